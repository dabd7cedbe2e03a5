// foliation-energy: command-line front end over the C interface.

#include "foliation/foliation.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Failure {
    fe_status status;
};

void check(fe_status status) {
    if (status != FE_OK) throw Failure{status};
}

int exit_code(fe_status status) {
    // Numerical and internal failures are 2; bad input and I/O are 1.
    return status == FE_ERR_NUMERICAL || status == FE_ERR_INTERNAL ? 2 : 1;
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Measure = std::unique_ptr<fe_measure, Deleter<fe_measure, fe_measure_free>>;
using Plan = std::unique_ptr<fe_plan, Deleter<fe_plan, fe_plan_free>>;
using Scenario = std::unique_ptr<fe_scenario, Deleter<fe_scenario, fe_scenario_free>>;
using Disintegration =
    std::unique_ptr<fe_disintegration, Deleter<fe_disintegration, fe_disintegration_free>>;
using CString = std::unique_ptr<char, Deleter<char, fe_string_free>>;

std::string real(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

std::string header(const std::string& config) {
    return std::string("# foliation-energy ") + fe_version() + ' ' + config + '\n';
}

/// Writes to `path` atomically, or to stdout when the path is empty.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    check(fe_write_text_atomic(path.c_str(), text.c_str()));
}

struct OtArgs {
    std::string mu, nu, plan;
    double p = 1.0;
};

void run_ot(const OtArgs& a) {
    Measure mu, nu;
    fe_measure* raw = nullptr;
    check(fe_measure_load_csv(a.mu.c_str(), &raw));
    mu.reset(raw);
    check(fe_measure_load_csv(a.nu.c_str(), &raw));
    nu.reset(raw);
    double value = 0.0;
    fe_plan* plan_raw = nullptr;
    check(fe_wasserstein(mu.get(), nu.get(), a.p, &value, a.plan.empty() ? nullptr : &plan_raw));
    Plan plan(plan_raw);
    if (plan) {
        const std::string config = "ot mu=" + a.mu + " nu=" + a.nu + " p=" + real(a.p);
        check(fe_plan_write_csv(plan.get(), a.plan.c_str(), config.c_str()));
    }
    std::printf("W_p = %.9g\n", value);
}

Scenario load(const std::string& path) {
    fe_scenario* raw = nullptr;
    check(fe_scenario_load(path.c_str(), &raw));
    return Scenario(raw);
}

struct DisintegrateArgs {
    std::string scenario, out;
    double bin_width = 0.0;
};

void run_disintegrate(const DisintegrateArgs& a) {
    Scenario s = load(a.scenario);
    std::string config = "disintegrate scenario=" + a.scenario;
    if (a.bin_width > 0.0) {
        fe_scenario* raw = nullptr;
        check(fe_scenario_bin_labels(s.get(), a.bin_width, &raw));
        s.reset(raw);
        config += " bin_width=" + real(a.bin_width);
    } else if (a.bin_width < 0.0) {
        throw CLI::ValidationError("--bin-width", "must be positive");
    }
    fe_disintegration* raw = nullptr;
    check(fe_disintegrate(s.get(), &raw));
    Disintegration d(raw);
    check(fe_disintegration_write(d.get(), a.out.c_str(), config.c_str()));
    std::printf("%zu conditionals written to %s\n", fe_disintegration_label_count(d.get()),
                a.out.c_str());
}

struct AnalyzeArgs {
    std::string scenario, out;
    double p = 1.0, tol = 1e-2, eps0 = 0.0;
    bool skip_gap = false;
    bool self_check = false;
    std::uint64_t seed = 0;
};

void run_analyze(const AnalyzeArgs& a) {
    if (a.self_check) {
        char* json = nullptr;
        int passed = 0;
        check(fe_self_check(a.seed, &json, &passed));
        CString owned(json);
        emit(a.out, json);
        if (!passed) throw Failure{FE_ERR_NUMERICAL};
        return;
    }
    if (a.scenario.empty()) throw CLI::RequiredError("SCENARIO");
    if (a.out.empty()) throw CLI::RequiredError("--out");
    Scenario s = load(a.scenario);
    fe_disintegration* raw = nullptr;
    check(fe_disintegrate(s.get(), &raw));
    Disintegration d(raw);
    fe_analyze_options options;
    fe_analyze_options_default(&options);
    options.p = a.p;
    options.tolerance = a.tol;
    options.eps0 = a.eps0;
    options.isometry_gap = a.skip_gap ? 0 : 1;
    const std::string config = "analyze scenario=" + a.scenario + " p=" + real(a.p) +
                               " tol=" + real(a.tol) + " eps0=" + real(a.eps0) +
                               " isometry_gap=" + (a.skip_gap ? "0" : "1");
    char* json = nullptr;
    double energy = 0.0;
    const char* verdict = nullptr;
    check(fe_analyze(d.get(), &options, config.c_str(), &json, &energy, &verdict));
    CString owned(json);
    emit(a.out, json);
    std::printf("energy = %.9g verdict = %s\n", energy, verdict);
}

void emit_csv(const std::string& out, const std::string& config, char* csv) {
    CString owned(csv);
    emit(out, header(config) + csv);
}

struct ScenarioArgs {
    std::string kind = "circle", map = "identity", out;
    fe_scenario_params params{};
    bool equal_weight = false;
};

void run_scenario(ScenarioArgs a) {
    fe_scenario_kind kind;
    check(fe_scenario_kind_parse(a.kind.c_str(), &kind));
    check(fe_graph_map_parse(a.map.c_str(), &a.params.graph_map));
    a.params.equal_weight = a.equal_weight ? 1 : 0;
    fe_scenario* raw = nullptr;
    check(fe_scenario_build(kind, &a.params, &raw));
    Scenario s(raw);
    const fe_scenario_params& p = a.params;
    const std::string config = "scenario kind=" + a.kind + " lambda=" + real(p.lambda) +
                               " R=" + real(p.R) + " y_min=" + real(p.y_min) +
                               " fibers=" + std::to_string(p.fibers) +
                               " points=" + std::to_string(p.points) +
                               " grid=" + std::to_string(p.grid) +
                               " samples=" + std::to_string(p.graph_samples) + " map=" + a.map +
                               " equal_weight=" + (a.equal_weight ? "1" : "0");
    check(fe_scenario_write_csv(s.get(), a.out.c_str(), config.c_str()));
    std::printf("%zu samples written to %s\n", fe_scenario_size(s.get()), a.out.c_str());
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (double v : values) out += (out.empty() ? "" : ",") + real(v);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Disintegration maps, Wasserstein energies and metric measure foliations"};
    app.require_subcommand(1);

    OtArgs ot;
    auto* ot_cmd = app.add_subcommand("ot", "Exact W_p between two measure CSV files");
    ot_cmd->add_option("MU", ot.mu, "source measure (x1,x2,w)")->required()->check(CLI::ExistingFile);
    ot_cmd->add_option("NU", ot.nu, "target measure (x1,x2,w)")->required()->check(CLI::ExistingFile);
    ot_cmd->add_option("--p", ot.p, "transport exponent, >= 1")->required();
    ot_cmd->add_option("--plan", ot.plan, "write the optimal plan as CSV i,j,flow");

    DisintegrateArgs dis;
    auto* dis_cmd = app.add_subcommand("disintegrate", "Write base and conditional measures");
    dis_cmd->add_option("SCENARIO", dis.scenario, "scenario .csv or .json")->required()->check(CLI::ExistingFile);
    dis_cmd->add_option("--bin-width", dis.bin_width, "bin labels to this width first");
    dis_cmd->add_option("--out", dis.out, "output directory")->required();

    AnalyzeArgs an;
    auto* an_cmd = app.add_subcommand("analyze", "Energy report and foliation verdict");
    an_cmd->add_option("SCENARIO", an.scenario, "scenario .csv or .json")->check(CLI::ExistingFile);
    an_cmd->add_option("--p", an.p, "transport exponent, >= 1");
    an_cmd->add_option("--tol", an.tol, "classifier tolerance on energy - 1")->capture_default_str();
    an_cmd->add_option("--eps0", an.eps0, "largest ball radius (default: fiber diameter)");
    an_cmd->add_option("--out", an.out, "report JSON path");
    an_cmd->add_flag("--no-isometry-gap", an.skip_gap, "skip the all-pairs isometry gap");
    an_cmd->add_flag("--self-check", an.self_check, "run randomized solver checks instead");
    an_cmd->add_option("--seed", an.seed, "seed for --self-check")->capture_default_str();

    std::string tables_out;
    auto* tables_cmd = app.add_subcommand("tables", "Perimeters and energies at reference lambdas");
    tables_cmd->add_option("--out", tables_out, "CSV path (default stdout)");

    std::vector<double> lambdas{1.0, 1.1, 1.5, 2.0};
    std::size_t profile_steps = 512;
    std::string profile_out;
    auto* profile_cmd = app.add_subcommand("arc-profile", "Normalized arc length against angle");
    profile_cmd->add_option("--lambdas", lambdas, "comma-separated lambdas")->delimiter(',')->capture_default_str();
    profile_cmd->add_option("--steps", profile_steps, "grid points on [0, 2 pi]")->capture_default_str();
    profile_cmd->add_option("--out", profile_out, "CSV path (default stdout)");

    double curve_min = 1.0, curve_max = 2.0;
    std::size_t curve_steps = 101;
    std::string curve_out;
    auto* curve_cmd = app.add_subcommand("energy-curve", "Closed-form 1-energy against lambda");
    curve_cmd->add_option("--min", curve_min, "smallest lambda")->capture_default_str();
    curve_cmd->add_option("--max", curve_max, "largest lambda")->capture_default_str();
    curve_cmd->add_option("--steps", curve_steps, "grid points")->capture_default_str();
    curve_cmd->add_option("--out", curve_out, "CSV path (default stdout)");

    ScenarioArgs sc;
    fe_scenario_params_default(&sc.params);
    auto* sc_cmd = app.add_subcommand("scenario", "Generate a built-in scenario as CSV");
    sc_cmd->add_option("--kind", sc.kind, "circle|ellipse|ellipse_dirac|square|graph")->capture_default_str();
    sc_cmd->add_option("--lambda", sc.params.lambda, "ellipse aspect, >= 1")->capture_default_str();
    sc_cmd->add_option("--R", sc.params.R, "outer major radius")->capture_default_str();
    sc_cmd->add_option("--y-min", sc.params.y_min, "smallest label (default 0.1 R)");
    sc_cmd->add_option("--fibers", sc.params.fibers, "fiber count")->capture_default_str();
    sc_cmd->add_option("--points", sc.params.points, "points per fiber")->capture_default_str();
    sc_cmd->add_option("--grid", sc.params.grid, "square grid size")->capture_default_str();
    sc_cmd->add_option("--samples", sc.params.graph_samples, "graph sample count")->capture_default_str();
    sc_cmd->add_option("--map", sc.map, "graph map: identity|sine|parabola")->capture_default_str();
    sc_cmd->add_flag("--equal-weight", sc.equal_weight, "equal-weight quantile atoms");
    sc_cmd->add_option("--out", sc.out, "scenario CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*ot_cmd) run_ot(ot);
        if (*dis_cmd) run_disintegrate(dis);
        if (*an_cmd) run_analyze(an);
        if (*tables_cmd) {
            char* csv = nullptr;
            check(fe_tables_csv(&csv));
            emit_csv(tables_out, "tables", csv);
        }
        if (*profile_cmd) {
            char* csv = nullptr;
            check(fe_arc_profile_csv(lambdas.data(), lambdas.size(), profile_steps, &csv));
            emit_csv(profile_out,
                     "arc-profile lambdas=" + join(lambdas) + " steps=" + std::to_string(profile_steps),
                     csv);
        }
        if (*curve_cmd) {
            char* csv = nullptr;
            check(fe_energy_curve_csv(curve_min, curve_max, curve_steps, &csv));
            emit_csv(curve_out,
                     "energy-curve min=" + real(curve_min) + " max=" + real(curve_max) +
                         " steps=" + std::to_string(curve_steps),
                     csv);
        }
        if (*sc_cmd) run_scenario(sc);
    } catch (const Failure& f) {
        std::cerr << "error: " << fe_last_error() << '\n';
        return exit_code(f.status);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }
    return 0;
}
