#include "foliation/energy.hpp"

#include "foliation/error.hpp"
#include "foliation/parallel.hpp"
#include "foliation/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <set>

namespace foliation {

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::metric_measure_foliation: return "metric_measure_foliation";
        case Verdict::not_foliation: return "not_foliation";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

using DistanceFn = double (*)(const Point2&, const Point2&);

bool is_euclidean(const Metric& metric) {
    const DistanceFn* fn = metric.target<DistanceFn>();
    return fn != nullptr && *fn == &euclidean_distance;
}

/// Distances between fibers and, optionally, how far each fiber strays from
/// being equidistant to another. Both are m x m row-major; violation(a, b) is
/// max over x in F_a of d(x, F_b) - d(F_a, F_b).
struct FiberGeometry {
    std::size_t count = 0;
    std::vector<double> distance;
    std::vector<double> violation;

    double dist(std::size_t a, std::size_t b) const { return distance[a * count + b]; }
};

FiberGeometry fiber_geometry(const Disintegration& d, const Metric& metric, bool violations) {
    FiberGeometry g;
    g.count = d.label_count();
    g.distance.assign(g.count * g.count, 0.0);
    if (violations) g.violation.assign(g.count * g.count, 0.0);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < g.count; ++a)
        for (std::size_t b = a + 1; b < g.count; ++b) pairs.emplace_back(a, b);

    const bool euclidean = is_euclidean(metric);
    parallel_for(pairs.size(), [&](std::size_t k) {
        const auto [a, b] = pairs[k];
        const auto& fa = d.fibers[a];
        const auto& fb = d.fibers[b];
        // Squared distances on the Euclidean fast path.
        std::vector<double> row_min(fa.size(), std::numeric_limits<double>::infinity());
        std::vector<double> col_min(fb.size(), std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < fa.size(); ++i) {
            for (std::size_t j = 0; j < fb.size(); ++j) {
                double v;
                if (euclidean) {
                    const double dx = fa[i].x1 - fb[j].x1, dy = fa[i].x2 - fb[j].x2;
                    v = dx * dx + dy * dy;
                } else {
                    v = metric(fa[i], fb[j]);
                }
                row_min[i] = std::min(row_min[i], v);
                col_min[j] = std::min(col_min[j], v);
            }
        }
        if (euclidean) {
            for (double& v : row_min) v = std::sqrt(v);
            for (double& v : col_min) v = std::sqrt(v);
        }
        const double gap = *std::min_element(row_min.begin(), row_min.end());
        g.distance[a * g.count + b] = g.distance[b * g.count + a] = gap;
        if (violations) {
            g.violation[a * g.count + b] = *std::max_element(row_min.begin(), row_min.end()) - gap;
            g.violation[b * g.count + a] = *std::max_element(col_min.begin(), col_min.end()) - gap;
        }
    });
    return g;
}

double smallest_positive_distance(const FiberGeometry& g) {
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < g.count; ++a)
        for (std::size_t b = a + 1; b < g.count; ++b)
            if (g.dist(a, b) > 0.0) smallest = std::min(smallest, g.dist(a, b));
    return smallest;
}

void check_schedule(const std::vector<double>& schedule) {
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!(schedule[k] > 0.0) || !std::isfinite(schedule[k]))
            throw InvalidInput("eps schedule entries must be positive");
        if (k > 0 && !(schedule[k] < schedule[k - 1]))
            throw InvalidInput("eps schedule must be strictly decreasing");
    }
}

/// Labels within eps of `center` at the smallest usable radius.
struct Ball {
    double eps = 0.0;
    std::vector<std::size_t> members;
};

Ball smallest_usable_ball(const FiberGeometry& g, const Disintegration& d, std::size_t center,
                          const std::vector<double>& schedule) {
    Ball usable;
    for (double eps : schedule) {
        std::vector<std::size_t> members;
        for (std::size_t k = 0; k < g.count; ++k)
            if (g.dist(center, k) <= eps) members.push_back(k);
        if (members.size() < 2) break;
        usable = {eps, std::move(members)};
    }
    if (usable.members.size() < 2)
        throw InvalidInput("label " + format_real(d.labels[center]) +
                           " is isolated at every scheduled radius");
    for (std::size_t i = 0; i < usable.members.size(); ++i)
        for (std::size_t j = i + 1; j < usable.members.size(); ++j)
            if (g.dist(usable.members[i], usable.members[j]) <= 0.0)
                throw InvalidInput("fibers " + format_real(d.labels[usable.members[i]]) + " and " +
                                   format_real(d.labels[usable.members[j]]) + " touch");
    return usable;
}

using LabelPair = std::pair<std::size_t, std::size_t>;

std::map<LabelPair, double> transport_costs(const Disintegration& d, const std::set<LabelPair>& pairs,
                                            double p, const Metric& metric) {
    const std::vector<LabelPair> work(pairs.begin(), pairs.end());
    std::vector<double> values(work.size());
    parallel_for(work.size(), [&](std::size_t k) {
        values[k] = wasserstein_distance(d.conditionals[work[k].first],
                                         d.conditionals[work[k].second], p, metric);
    });
    std::map<LabelPair, double> out;
    for (std::size_t k = 0; k < work.size(); ++k) out.emplace(work[k], values[k]);
    return out;
}

DerivativeEstimate assemble(const Disintegration& d, const FiberGeometry& g, std::size_t center,
                            const Ball& ball, const std::map<LabelPair, double>& costs) {
    DerivativeEstimate est;
    est.label = d.labels[center];
    est.eps = ball.eps;
    est.derivative = -1.0;
    // Members are ascending, so the first maximum is the lexicographically
    // smallest pair.
    for (std::size_t i = 0; i < ball.members.size(); ++i) {
        for (std::size_t j = i + 1; j < ball.members.size(); ++j) {
            const LabelPair key{ball.members[i], ball.members[j]};
            const double ratio = costs.at(key) / g.dist(key.first, key.second);
            if (ratio > est.derivative) {
                est.derivative = ratio;
                est.witness = {d.labels[key.first], d.labels[key.second]};
            }
        }
    }
    return est;
}

void insert_pairs(const Ball& ball, std::set<LabelPair>& pairs) {
    for (std::size_t i = 0; i < ball.members.size(); ++i)
        for (std::size_t j = i + 1; j < ball.members.size(); ++j)
            pairs.emplace(ball.members[i], ball.members[j]);
}

void check_p(double p) {
    if (!std::isfinite(p) || p < 1.0) throw InvalidInput("p must be finite and >= 1");
}

std::vector<double> schedule_from(const FiberGeometry& g, double eps0) {
    double diameter = 0.0;
    for (double v : g.distance) diameter = std::max(diameter, v);
    const double floor = smallest_positive_distance(g);
    std::vector<double> schedule;
    double eps = eps0 > 0.0 ? eps0 : diameter;
    if (!(eps > 0.0) || !std::isfinite(floor)) return schedule;
    schedule.push_back(eps);
    while (eps >= floor && schedule.size() < 200) {
        eps /= 2.0;
        schedule.push_back(eps);
    }
    return schedule;
}

}  // namespace

double fiber_distance(const Disintegration& d, double y1, double y2, const Metric& metric) {
    const std::size_t a = d.index_of(y1), b = d.index_of(y2);
    if (a == b) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& x : d.fibers[a])
        for (const Point2& z : d.fibers[b]) best = std::min(best, metric(x, z));
    return best;
}

FoliationCheck metric_foliation_check(const Disintegration& d, double tol, const Metric& metric) {
    FoliationCheck check;
    if (d.label_count() < 2) return check;
    const FiberGeometry g = fiber_geometry(d, metric, true);
    for (double v : g.violation) check.worst_violation = std::max(check.worst_violation, v);
    check.passed = check.worst_violation <= tol;
    return check;
}

double lipschitz_check(const FiberedScenario& s, const Disintegration& d, const Metric& metric) {
    const FiberGeometry g = fiber_geometry(d, metric, false);
    std::vector<std::size_t> index(s.samples.size());
    for (std::size_t k = 0; k < s.samples.size(); ++k) index[k] = d.index_of(s.samples[k].label);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        for (std::size_t j = i + 1; j < s.samples.size(); ++j)
            worst = std::max(worst, g.dist(index[i], index[j]) -
                                        metric(s.samples[i].point, s.samples[j].point));
    return s.samples.size() < 2 ? 0.0 : worst;
}

std::vector<double> default_eps_schedule(const Disintegration& d, double eps0,
                                         const Metric& metric) {
    return schedule_from(fiber_geometry(d, metric, false), eps0);
}

DerivativeEstimate derivative_at(const Disintegration& d, double y, double p,
                                 const std::vector<double>& eps_schedule, const Metric& metric) {
    check_p(p);
    check_schedule(eps_schedule);
    const std::size_t center = d.index_of(y);
    const FiberGeometry g = fiber_geometry(d, metric, false);
    const Ball ball = smallest_usable_ball(g, d, center, eps_schedule);
    std::set<LabelPair> pairs;
    insert_pairs(ball, pairs);
    return assemble(d, g, center, ball, transport_costs(d, pairs, p, metric));
}

namespace {

EnergyReport energy_with(const Disintegration& d, const EnergyOptions& options,
                         const FiberGeometry& g, const std::vector<double>& schedule,
                         const Metric& metric) {
    check_p(options.p);
    check_schedule(schedule);
    EnergyReport report;
    report.p = options.p;
    report.tolerance = options.tolerance;

    std::vector<std::pair<std::size_t, Ball>> balls;
    std::set<LabelPair> pairs;
    for (std::size_t k = 0; k < d.label_count(); ++k) {
        try {
            Ball ball = smallest_usable_ball(g, d, k, schedule);
            insert_pairs(ball, pairs);
            balls.emplace_back(k, std::move(ball));
        } catch (const InvalidInput& e) {
            report.warnings.push_back(std::string("excluded: ") + e.what());
        }
    }
    if (balls.empty()) throw InvalidInput("no label has a companion within the eps schedule");

    if (options.compute_isometry_gap) {
        for (std::size_t a = 0; a < g.count; ++a)
            for (std::size_t b = a + 1; b < g.count; ++b) pairs.emplace(a, b);
    }
    const auto costs = transport_costs(d, pairs, options.p, metric);

    report.energy = -std::numeric_limits<double>::infinity();
    for (const auto& [center, ball] : balls) {
        report.per_label.push_back(assemble(d, g, center, ball, costs));
        report.energy = std::max(report.energy, report.per_label.back().derivative);
    }

    if (options.compute_isometry_gap) {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& [key, value] : costs) {
            const double dist = g.dist(key.first, key.second);
            if (dist <= 0.0)
                throw InvalidInput("fibers " + format_real(d.labels[key.first]) + " and " +
                                   format_real(d.labels[key.second]) + " touch");
            worst = std::max(worst, value / dist - 1.0);
        }
        report.isometry_gap = worst;
    }

    // Absolute foliation tolerance scaled to the closest fiber spacing.
    const double foliation_tol = options.tolerance * smallest_positive_distance(g);
    for (double v : g.violation)
        report.foliation_check.worst_violation = std::max(report.foliation_check.worst_violation, v);
    report.foliation_check.passed = report.foliation_check.worst_violation <= foliation_tol;

    if (report.energy > 1.0 + options.tolerance)
        report.verdict = Verdict::not_foliation;
    else if (report.foliation_check.passed)
        report.verdict = Verdict::metric_measure_foliation;
    else
        report.verdict = Verdict::inconclusive;
    return report;
}

}  // namespace

EnergyReport energy(const Disintegration& d, const EnergyOptions& options,
                    const std::vector<double>& eps_schedule, const Metric& metric) {
    return energy_with(d, options, fiber_geometry(d, metric, true), eps_schedule, metric);
}

EnergyReport energy(const Disintegration& d, const EnergyOptions& options, const Metric& metric) {
    const FiberGeometry g = fiber_geometry(d, metric, true);
    return energy_with(d, options, g, schedule_from(g, options.eps0), metric);
}

double isometry_gap(const Disintegration& d, double p, const Metric& metric) {
    check_p(p);
    if (d.label_count() < 2) throw InvalidInput("isometry gap needs at least two labels");
    const FiberGeometry g = fiber_geometry(d, metric, false);
    std::set<LabelPair> pairs;
    for (std::size_t a = 0; a < g.count; ++a)
        for (std::size_t b = a + 1; b < g.count; ++b) {
            if (g.dist(a, b) <= 0.0)
                throw InvalidInput("fibers " + format_real(d.labels[a]) + " and " +
                                   format_real(d.labels[b]) + " touch");
            pairs.emplace(a, b);
        }
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [key, value] : transport_costs(d, pairs, p, metric))
        worst = std::max(worst, value / g.dist(key.first, key.second) - 1.0);
    return worst;
}

}  // namespace foliation
