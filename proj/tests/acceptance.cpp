// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances are pinned here, not taken from the command line.

#include "foliation/disintegration.hpp"
#include "foliation/elliptic.hpp"
#include "foliation/energy.hpp"
#include "foliation/transport.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace foliation;

namespace {

constexpr double kPi = std::numbers::pi;
const double kLambdas[] = {1.0, 1.001, 1.01, 1.1, 1.5, 2.0};
const double kPerimeters[] = {6.28318531, 6.28004725, 6.25211912, 6.00098645, 5.28847986, 4.84422411};
const double kEnergies[] = {1.0, 1.000499687, 1.004968906, 1.047025412, 1.188089106, 1.297046785};

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.passed) ++failures;
    std::printf("%s %2d %s: %s [%.2f s]\n", o.passed ? "PASS" : "FAIL", id, title, o.detail.c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

ScenarioParams resolution(std::size_t fibers, std::size_t points, double lambda = 1.0) {
    ScenarioParams p;
    p.fibers = fibers;
    p.points = points;
    p.lambda = lambda;
    return p;
}

/// Same ellipse scenario labels with n points per fiber; mean relative gap
/// between exact adjacent-pair W_1 and the radial closed form.
double mean_relative_gap(double lambda, std::size_t fibers, std::size_t n) {
    const Disintegration d = disintegrate(build_scenario(ScenarioKind::ellipse, resolution(fibers, n, lambda)));
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < d.label_count(); ++k) {
        const double closed = closed_form_w1(d.labels[k], d.labels[k + 1], lambda);
        const double exact = wasserstein_distance(d.conditionals[k], d.conditionals[k + 1], 1.0);
        sum += std::abs(closed - exact) / closed;
    }
    return sum / static_cast<double>(d.label_count() - 1);
}

/// The disintegration restricted to two labels.
Disintegration two_fibers(const FiberedScenario& s, double a, double b) {
    FiberedScenario out;
    out.name = s.name;
    for (const Sample& x : s.samples)
        if (x.label == a || x.label == b) out.samples.push_back(x);
    return disintegrate(out);
}

std::vector<Atom> random_atoms(std::mt19937_64& rng, std::size_t n, double mass) {
    std::uniform_real_distribution<double> c(-1.0, 1.0), w(0.05, 1.0);
    std::vector<Atom> atoms(n);
    double total = 0.0;
    for (Atom& a : atoms) {
        a = {{c(rng), c(rng)}, w(rng)};
        total += a.weight;
    }
    for (Atom& a : atoms) a.weight *= mass / total;
    return atoms;
}

}  // namespace

int main() {
    std::printf("foliation-energy acceptance suite\n");

    criterion(1, "perimeter table", [] {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(perimeter(1.0, kLambdas[k]) - kPerimeters[k]));
        const double s = elapsed_since(t0);
        return Outcome{worst <= 5e-8 && s < 1.0, fmt("max |err| = %.2e (tol 5e-8)", worst)};
    });

    criterion(2, "energy table", [] {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(closed_form_energy(kLambdas[k]) - kEnergies[k]));
        const double s = elapsed_since(t0);
        return Outcome{worst <= 5e-8 && s < 1.0, fmt("max |err| = %.2e (tol 5e-8)", worst)};
    });

    criterion(3, "circle pipeline 64x256, p=1", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const Disintegration d = disintegrate(build_scenario(ScenarioKind::circle, resolution(64, 256)));
        EnergyOptions o;
        o.compute_isometry_gap = false;
        const EnergyReport r = energy(d, o);
        const double s = elapsed_since(t0);
        const bool ok = std::abs(r.energy - 1.0) <= 1e-3 && r.verdict == Verdict::metric_measure_foliation && s < 60.0;
        return Outcome{ok, fmt("energy = %.12f verdict = %s", r.energy, to_string(r.verdict))};
    });

    criterion(4, "ellipse pipeline lambda=1.5, 64x256", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const double lambda = 1.5, target = 1.188089106;
        const Disintegration d = disintegrate(build_scenario(ScenarioKind::ellipse, resolution(64, 256, lambda)));
        EnergyOptions o;
        o.compute_isometry_gap = false;
        const EnergyReport r = energy(d, o);
        const bool energy_ok = std::abs(r.energy - target) <= 0.01 * target && r.verdict == Verdict::not_foliation;

        double worst_excess = -1.0;
        for (std::size_t k = 0; k + 1 < d.label_count(); ++k) {
            const double closed = closed_form_w1(d.labels[k], d.labels[k + 1], lambda);
            const double exact = wasserstein_distance(d.conditionals[k], d.conditionals[k + 1], 1.0);
            worst_excess = std::max(worst_excess, exact / closed - 1.0);
        }
        const bool bound_ok = worst_excess <= 0.005;

        const double gap128 = mean_relative_gap(lambda, 64, 128);
        const double gap256 = mean_relative_gap(lambda, 64, 256);
        const bool halving_ok = gap256 <= 0.5 * gap128;
        const double s = elapsed_since(t0);

        return Outcome{energy_ok && bound_ok && halving_ok && s < 120.0,
                       fmt("energy = %.9f verdict = %s; max W1/closed - 1 = %.2e; "
                           "mean gap n=128 %.2e, n=256 %.2e (halving %s)",
                           r.energy, to_string(r.verdict), worst_excess, gap128, gap256,
                           halving_ok ? "yes" : "no")};
    });

    criterion(5, "Dirac conditionals on ellipse fibers, lambda=1.5", [] {
        const FiberedScenario s = build_scenario(ScenarioKind::ellipse_dirac, resolution(64, 256, 1.5));
        const Disintegration d = disintegrate(s);
        EnergyOptions o;
        const EnergyReport r = energy(d, o);
        const double y = d.labels[0], yp = d.labels[1];
        const FoliationCheck pair = metric_foliation_check(two_fibers(s, y, yp), 1e-9);
        const bool ok = r.isometry_gap && *r.isometry_gap <= 1e-9 && !r.foliation_check.passed && !pair.passed &&
                        pair.worst_violation >= 0.1 * std::abs(yp - y) &&
                        r.verdict != Verdict::metric_measure_foliation;
        return Outcome{ok, fmt("isometry_gap = %.2e; pair (%.4f, %.4f) violation = %.4e vs 0.1|dy| = %.4e; "
                               "verdict = %s",
                               r.isometry_gap.value_or(NAN), y, yp, pair.worst_violation, 0.1 * std::abs(yp - y),
                               to_string(r.verdict))};
    });

    criterion(6, "OT oracle equivalence, 200 instances", [] {
        std::mt19937_64 rng(20261015);
        std::uniform_int_distribution<std::size_t> size(1, 3);
        double worst = 0.0;
        std::size_t bad = 0;
        for (int k = 0; k < 200; ++k) {
            const double p = k % 2 == 0 ? 1.0 : 2.0;
            const DiscreteMeasure mu(random_atoms(rng, size(rng), 1.0));
            const DiscreteMeasure nu(random_atoms(rng, size(rng), 1.0));
            const double fast = wasserstein_distance(mu, nu, p);
            const double brute = brute_force_wasserstein(mu, nu, p);
            const double rel = std::abs(fast - brute) / std::max(brute, 1e-300);
            worst = std::max(worst, rel);
            if (rel > 1e-9) ++bad;
        }
        return Outcome{bad == 0, fmt("%zu mismatches, worst relative error %.2e (tol 1e-9)", bad, worst)};
    });

    criterion(7, "metric axioms, 50 triples", [] {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<std::size_t> size(1, 16);
        double worst_sym = 0.0, worst_tri = 0.0, worst_mono = 0.0;
        for (int k = 0; k < 50; ++k) {
            const DiscreteMeasure a(random_atoms(rng, size(rng), 1.0));
            const DiscreteMeasure b(random_atoms(rng, size(rng), 1.0));
            const DiscreteMeasure c(random_atoms(rng, size(rng), 1.0));
            for (double p : {1.0, 2.0}) {
                const double ab = wasserstein_distance(a, b, p), ba = wasserstein_distance(b, a, p);
                const double bc = wasserstein_distance(b, c, p), ac = wasserstein_distance(a, c, p);
                worst_sym = std::max(worst_sym, std::abs(ab - ba));
                worst_tri = std::max(worst_tri, ac - ab - bc);
            }
            worst_mono = std::max(worst_mono, wasserstein_distance(a, b, 1.0) - wasserstein_distance(a, b, 2.0));
        }
        const bool ok = worst_sym <= 1e-9 && worst_tri <= 1e-9 && worst_mono <= 1e-9;
        return Outcome{ok, fmt("max asymmetry %.2e, max triangle excess %.2e, max W1 - W2 %.2e (tol 1e-9)",
                               worst_sym, worst_tri, worst_mono)};
    });

    struct Named {
        const char* name;
        ScenarioKind kind;
        ScenarioParams params;
    };
    ScenarioParams sine = resolution(64, 256);
    sine.graph_map = GraphMap::sine;
    const std::vector<Named> scenarios = {
        {"circle", ScenarioKind::circle, resolution(24, 96)},
        {"ellipse", ScenarioKind::ellipse, resolution(24, 96, 1.5)},
        {"ellipse_dirac", ScenarioKind::ellipse_dirac, resolution(64, 256, 1.5)},
        {"square", ScenarioKind::square, resolution(64, 256)},
        {"graph", ScenarioKind::graph, sine},
    };

    criterion(8, "lower bound W_p >= d* on every fiber pair", [&] {
        double worst = -INFINITY;
        std::size_t pairs = 0;
        std::string where;
        for (const Named& n : scenarios) {
            const Disintegration d = disintegrate(build_scenario(n.kind, n.params));
            for (std::size_t i = 0; i < d.label_count(); ++i)
                for (std::size_t j = i + 1; j < d.label_count(); ++j) {
                    const double dstar = fiber_distance(d, d.labels[i], d.labels[j]);
                    for (double p : {1.0, 2.0}) {
                        const double deficit =
                            dstar - wasserstein_distance(d.conditionals[i], d.conditionals[j], p);
                        if (deficit > worst) {
                            worst = deficit;
                            where = n.name;
                        }
                        ++pairs;
                    }
                }
        }
        return Outcome{worst <= 1e-12, fmt("%zu (pair, p) checks; max d* - W_p = %.2e on %s (tol 1e-12); "
                                           "circle/ellipse at 24x96",
                                           pairs, worst, where.c_str())};
    });

    criterion(9, "reconstruction on 100 random boxes per scenario", [&] {
        std::mt19937_64 rng(99);
        double worst = 0.0;
        for (const Named& n : scenarios) {
            const ScenarioParams params = n.kind == ScenarioKind::circle || n.kind == ScenarioKind::ellipse
                                              ? resolution(64, 256, n.params.lambda)
                                              : n.params;
            const FiberedScenario s = build_scenario(n.kind, params);
            const Disintegration d = disintegrate(s);
            double lo1 = INFINITY, hi1 = -INFINITY, lo2 = INFINITY, hi2 = -INFINITY;
            for (const Sample& x : s.samples) {
                lo1 = std::min(lo1, x.point.x1), hi1 = std::max(hi1, x.point.x1);
                lo2 = std::min(lo2, x.point.x2), hi2 = std::max(hi2, x.point.x2);
            }
            std::uniform_real_distribution<double> u1(lo1 - 0.1, hi1 + 0.1), u2(lo2 - 0.1, hi2 + 0.1);
            std::vector<Region> boxes;
            for (int k = 0; k < 100; ++k) {
                const auto [a1, b1] = std::minmax(u1(rng), u1(rng));
                const auto [a2, b2] = std::minmax(u2(rng), u2(rng));
                boxes.push_back([=](const Point2& q) {
                    return q.x1 >= a1 && q.x1 <= b1 && q.x2 >= a2 && q.x2 <= b2;
                });
            }
            worst = std::max(worst, verify_reconstruction(d, s, boxes) / s.total_mass());
        }
        return Outcome{worst <= 1e-12, fmt("max discrepancy / total mass = %.2e (tol 1e-12)", worst)};
    });

    criterion(10, "square 16x16", [] {
        ScenarioParams p;
        p.grid = 16;
        const Disintegration d = disintegrate(build_scenario(ScenarioKind::square, p));
        const EnergyReport r = energy(d, EnergyOptions{});
        const bool ok = std::abs(r.energy - 1.0) <= 1e-6 && r.verdict == Verdict::metric_measure_foliation;
        return Outcome{ok, fmt("energy = %.12f verdict = %s", r.energy, to_string(r.verdict))};
    });

    criterion(11, "circle energy at p=1 vs p=2", [] {
        const Disintegration d = disintegrate(build_scenario(ScenarioKind::circle, resolution(64, 256)));
        EnergyOptions o;
        o.compute_isometry_gap = false;
        const double e1 = energy(d, o).energy;
        o.p = 2.0;
        const double e2 = energy(d, o).energy;
        return Outcome{std::abs(e1 - e2) <= 2e-3, fmt("E_1 = %.12f, E_2 = %.12f (tol 2e-3)", e1, e2)};
    });

    criterion(12, "arc-profile and energy-curve data", [] {
        const Table profile = arc_profile({1.0, 1.001, 1.01, 1.1, 1.5, 2.0}, 512);
        bool monotone = true;
        double worst_endpoint = 0.0, worst_identity = 0.0;
        for (std::size_t c = 1; c < profile.columns.size(); ++c) {
            worst_endpoint = std::max({worst_endpoint, std::abs(profile.rows.front()[c]),
                                       std::abs(profile.rows.back()[c] - 1.0)});
            for (std::size_t j = 1; j < profile.rows.size(); ++j)
                monotone = monotone && profile.rows[j][c] > profile.rows[j - 1][c];
        }
        for (const auto& row : profile.rows)
            worst_identity = std::max(worst_identity, std::abs(row[1] - row[0] / (2 * kPi)));

        const Table curve = energy_curve(1.0, 2.0, 101);
        bool increasing = true;
        for (std::size_t j = 1; j < curve.rows.size(); ++j)
            increasing = increasing && curve.rows[j][1] > curve.rows[j - 1][1];
        const double ends = std::max(std::abs(curve.rows.front()[1] - kEnergies[0]),
                                     std::abs(curve.rows.back()[1] - kEnergies[5]));
        const bool ok = monotone && worst_endpoint <= 1e-10 && worst_identity <= 1e-10 && increasing && ends <= 5e-8;
        return Outcome{ok, fmt("profile monotone %s, endpoint err %.1e, lambda=1 vs theta/2pi %.1e; "
                               "curve increasing %s, endpoint err %.1e",
                               monotone ? "yes" : "no", worst_endpoint, worst_identity,
                               increasing ? "yes" : "no", ends)};
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
