#include "foliation/foliation.h"

#include "foliation/disintegration.hpp"
#include "foliation/elliptic.hpp"
#include "foliation/energy.hpp"
#include "foliation/error.hpp"
#include "foliation/io.hpp"
#include "foliation/self_check.hpp"
#include "foliation/transport.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct fe_measure {
    foliation::DiscreteMeasure value;
};
struct fe_plan {
    foliation::TransportPlan value;
};
struct fe_scenario {
    foliation::FiberedScenario value;
};
struct fe_disintegration {
    foliation::Disintegration value;
};

namespace {

thread_local std::string last_error;

template <typename F>
fe_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return FE_OK;
    } catch (const foliation::InvalidInput& e) {
        last_error = e.what();
        return FE_ERR_INVALID_INPUT;
    } catch (const foliation::NumericalFailure& e) {
        last_error = e.what();
        return FE_ERR_NUMERICAL;
    } catch (const foliation::IoError& e) {
        last_error = e.what();
        return FE_ERR_IO;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return FE_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return FE_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return FE_ERR_INTERNAL;
    }
}

void require(const void* ptr, const char* what) {
    if (ptr == nullptr) throw foliation::InvalidInput(std::string(what) + " is null");
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string config_text(const char* config) { return config ? config : ""; }

foliation::ScenarioParams to_params(const fe_scenario_params& p) {
    foliation::ScenarioParams out;
    out.lambda = p.lambda;
    out.R = p.R;
    out.y_min = p.y_min;
    out.fibers = p.fibers;
    out.points = p.points;
    out.grid = p.grid;
    out.graph_samples = p.graph_samples;
    switch (p.graph_map) {
        case FE_GRAPH_IDENTITY: out.graph_map = foliation::GraphMap::identity; break;
        case FE_GRAPH_SINE: out.graph_map = foliation::GraphMap::sine; break;
        case FE_GRAPH_PARABOLA: out.graph_map = foliation::GraphMap::parabola; break;
        default: throw foliation::InvalidInput("unknown graph map");
    }
    out.sampling = p.equal_weight ? foliation::FiberSampling::equal_weight
                                  : foliation::FiberSampling::weighted_grid;
    return out;
}

}  // namespace

extern "C" {

const char* fe_version(void) { return foliation::kVersion; }

const char* fe_last_error(void) { return last_error.c_str(); }

void fe_string_free(char* s) { std::free(s); }

fe_status fe_write_text_atomic(const char* path, const char* text) {
    return guarded([&] {
        require(path, "path");
        require(text, "text");
        foliation::write_file_atomic(path, text);
    });
}

fe_status fe_measure_create(const double* x1, const double* x2, const double* w, size_t n,
                            fe_measure** out) {
    return guarded([&] {
        require(out, "out");
        if (n > 0) {
            require(x1, "x1");
            require(x2, "x2");
            require(w, "w");
        }
        std::vector<foliation::Atom> atoms(n);
        for (size_t k = 0; k < n; ++k) atoms[k] = {{x1[k], x2[k]}, w[k]};
        *out = new fe_measure{foliation::DiscreteMeasure(std::move(atoms))};
    });
}

fe_status fe_measure_load_csv(const char* path, fe_measure** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new fe_measure{foliation::read_measure_csv(path)};
    });
}

size_t fe_measure_size(const fe_measure* m) { return m ? m->value.size() : 0; }

double fe_measure_mass(const fe_measure* m) { return m ? m->value.mass() : 0.0; }

fe_status fe_measure_atom(const fe_measure* m, size_t k, double* x1, double* x2, double* w) {
    return guarded([&] {
        require(m, "measure");
        if (k >= m->value.size()) throw foliation::InvalidInput("atom index out of range");
        const foliation::Atom& a = m->value.atoms()[k];
        if (x1) *x1 = a.location.x1;
        if (x2) *x2 = a.location.x2;
        if (w) *w = a.weight;
    });
}

void fe_measure_free(fe_measure* m) { delete m; }

fe_status fe_wasserstein(const fe_measure* mu, const fe_measure* nu, double p, double* value,
                         fe_plan** plan) {
    return guarded([&] {
        require(mu, "mu");
        require(nu, "nu");
        require(value, "value");
        if (plan) {
            foliation::WassersteinResult r = foliation::wasserstein(mu->value, nu->value, p);
            *value = r.value;
            *plan = new fe_plan{std::move(r.plan)};
        } else {
            *value = foliation::wasserstein_distance(mu->value, nu->value, p);
        }
    });
}

fe_status fe_wasserstein_brute_force(const fe_measure* mu, const fe_measure* nu, double p,
                                     double* value) {
    return guarded([&] {
        require(mu, "mu");
        require(nu, "nu");
        require(value, "value");
        *value = foliation::brute_force_wasserstein(mu->value, nu->value, p);
    });
}

size_t fe_plan_size(const fe_plan* plan) { return plan ? plan->value.entries.size() : 0; }

double fe_plan_cost(const fe_plan* plan) { return plan ? plan->value.cost : 0.0; }

fe_status fe_plan_entry(const fe_plan* plan, size_t k, size_t* row, size_t* col, double* flow) {
    return guarded([&] {
        require(plan, "plan");
        if (k >= plan->value.entries.size()) throw foliation::InvalidInput("entry out of range");
        const foliation::PlanEntry& e = plan->value.entries[k];
        if (row) *row = e.row;
        if (col) *col = e.col;
        if (flow) *flow = e.flow;
    });
}

fe_status fe_plan_write_csv(const fe_plan* plan, const char* path, const char* config) {
    return guarded([&] {
        require(plan, "plan");
        require(path, "path");
        foliation::write_file_atomic(path, foliation::header_comment(config_text(config)) +
                                               foliation::format_plan_csv(plan->value));
    });
}

void fe_plan_free(fe_plan* plan) { delete plan; }

void fe_scenario_params_default(fe_scenario_params* params) {
    if (params == nullptr) return;
    const foliation::ScenarioParams d;
    params->lambda = d.lambda;
    params->R = d.R;
    params->y_min = d.y_min;
    params->fibers = d.fibers;
    params->points = d.points;
    params->grid = d.grid;
    params->graph_samples = d.graph_samples;
    params->graph_map = FE_GRAPH_IDENTITY;
    params->equal_weight = 0;
}

fe_status fe_scenario_kind_parse(const char* name, fe_scenario_kind* out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        *out = static_cast<fe_scenario_kind>(foliation::scenario_kind_from_string(name));
    });
}

fe_status fe_graph_map_parse(const char* name, fe_graph_map* out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        *out = static_cast<fe_graph_map>(foliation::graph_map_from_string(name));
    });
}

fe_status fe_scenario_build(fe_scenario_kind kind, const fe_scenario_params* params,
                            fe_scenario** out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        if (kind < FE_SCENARIO_CIRCLE || kind > FE_SCENARIO_GRAPH)
            throw foliation::InvalidInput("unknown scenario kind");
        *out = new fe_scenario{foliation::build_scenario(static_cast<foliation::ScenarioKind>(kind),
                                                         to_params(*params))};
    });
}

fe_status fe_scenario_load(const char* path, fe_scenario** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new fe_scenario{foliation::load_scenario(path)};
    });
}

fe_status fe_scenario_write_csv(const fe_scenario* s, const char* path, const char* config) {
    return guarded([&] {
        require(s, "scenario");
        require(path, "path");
        foliation::write_file_atomic(path, foliation::header_comment(config_text(config)) +
                                               foliation::format_scenario_csv(s->value));
    });
}

fe_status fe_scenario_bin_labels(const fe_scenario* s, double width, fe_scenario** out) {
    return guarded([&] {
        require(s, "scenario");
        require(out, "out");
        *out = new fe_scenario{foliation::bin_labels(s->value, width)};
    });
}

size_t fe_scenario_size(const fe_scenario* s) { return s ? s->value.samples.size() : 0; }

void fe_scenario_free(fe_scenario* s) { delete s; }

fe_status fe_disintegrate(const fe_scenario* s, fe_disintegration** out) {
    return guarded([&] {
        require(s, "scenario");
        require(out, "out");
        *out = new fe_disintegration{foliation::disintegrate(s->value)};
    });
}

size_t fe_disintegration_label_count(const fe_disintegration* d) {
    return d ? d->value.label_count() : 0;
}

fe_status fe_disintegration_label(const fe_disintegration* d, size_t k, double* label) {
    return guarded([&] {
        require(d, "disintegration");
        require(label, "label");
        if (k >= d->value.label_count()) throw foliation::InvalidInput("label index out of range");
        *label = d->value.labels[k];
    });
}

fe_status fe_disintegration_write(const fe_disintegration* d, const char* dir, const char* config) {
    return guarded([&] {
        require(d, "disintegration");
        require(dir, "dir");
        foliation::write_disintegration(d->value, dir, config_text(config));
    });
}

void fe_disintegration_free(fe_disintegration* d) { delete d; }

void fe_analyze_options_default(fe_analyze_options* options) {
    if (options == nullptr) return;
    const foliation::EnergyOptions d;
    options->p = d.p;
    options->tolerance = d.tolerance;
    options->eps0 = d.eps0;
    options->isometry_gap = d.compute_isometry_gap ? 1 : 0;
}

fe_status fe_analyze(const fe_disintegration* d, const fe_analyze_options* options,
                     const char* config, char** report_json, double* energy, const char** verdict) {
    return guarded([&] {
        require(d, "disintegration");
        require(options, "options");
        foliation::EnergyOptions opts;
        opts.p = options->p;
        opts.tolerance = options->tolerance;
        opts.eps0 = options->eps0;
        opts.compute_isometry_gap = options->isometry_gap != 0;
        if (!(opts.tolerance >= 0.0)) throw foliation::InvalidInput("tolerance must be >= 0");
        const foliation::EnergyReport report = foliation::energy(d->value, opts);
        if (report_json)
            *report_json = duplicate(foliation::format_report_json(report, config_text(config)));
        if (energy) *energy = report.energy;
        if (verdict) *verdict = foliation::to_string(report.verdict);
    });
}

fe_status fe_perimeter(double y, double lambda, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = foliation::perimeter(y, lambda);
    });
}

fe_status fe_closed_form_w1(double y, double yp, double lambda, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = foliation::closed_form_w1(y, yp, lambda);
    });
}

fe_status fe_closed_form_energy(double lambda, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = foliation::closed_form_energy(lambda);
    });
}

fe_status fe_tables_csv(char** csv) {
    return guarded([&] {
        require(csv, "csv");
        *csv = duplicate(foliation::format_table_csv(foliation::reference_tables()));
    });
}

fe_status fe_arc_profile_csv(const double* lambdas, size_t count, size_t steps, char** csv) {
    return guarded([&] {
        require(csv, "csv");
        if (count > 0) require(lambdas, "lambdas");
        const std::vector<double> values(lambdas, lambdas + count);
        *csv = duplicate(foliation::format_table_csv(foliation::arc_profile(values, steps)));
    });
}

fe_status fe_energy_curve_csv(double lambda_min, double lambda_max, size_t steps, char** csv) {
    return guarded([&] {
        require(csv, "csv");
        *csv = duplicate(
            foliation::format_table_csv(foliation::energy_curve(lambda_min, lambda_max, steps)));
    });
}

fe_status fe_self_check(uint64_t seed, char** summary_json, int* passed) {
    return guarded([&] {
        const foliation::SelfCheckResult r = foliation::run_self_check(seed);
        if (passed) *passed = r.passed() ? 1 : 0;
        if (summary_json) {
            nlohmann::ordered_json doc;
            doc["seed"] = seed;
            doc["oracle_instances"] = r.oracle_instances;
            doc["oracle_failures"] = r.oracle_failures;
            doc["oracle_worst_relative_error"] = r.oracle_worst_relative_error;
            doc["triples"] = r.triples;
            doc["axiom_failures"] = r.axiom_failures;
            doc["passed"] = r.passed();
            *summary_json = duplicate(doc.dump(2) + '\n');
        }
    });
}

}  // extern "C"
