#include "foliation/elliptic.hpp"

#include "foliation/error.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace foliation {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct SimpsonState {
    const std::function<double(double)>& f;
    int max_depth;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const SimpsonState& s, double a, double b, double fa, double fm, double fb,
              double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = s.f(lm), frm = s.f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    // A few forced levels keep symmetric integrands from converging spuriously.
    if (depth >= 5 && std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= s.max_depth)
        throw NumericalFailure("adaptive quadrature exhausted its depth limit");
    return refine(s, a, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
           refine(s, m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
}

void check_lambda(double lambda) {
    if (!std::isfinite(lambda) || lambda < 1.0) throw InvalidInput("lambda must be >= 1");
}

void check_fiber(double y, double lambda) {
    if (!std::isfinite(y) || !(y > 0.0)) throw InvalidInput("fiber label y must be positive");
    check_lambda(lambda);
}

/// |d/dtheta L_1(theta)|: the arc-length element of the unit-major ellipse.
double speed(double lambda, double theta) {
    const double c = std::cos(theta);
    return std::sqrt(1.0 - (1.0 - 1.0 / (lambda * lambda)) * c * c);
}

double unit_arc_length(double lambda, double theta, double tol = 1e-11) {
    if (theta == 0.0) return 0.0;
    return adaptive_simpson([lambda](double t) { return speed(lambda, t); }, 0.0, theta, tol);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const SimpsonState state{f, max_depth};
    return refine(state, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), abs_tol, 0);
}

double arc_length(double y, double lambda, double theta) {
    check_fiber(y, lambda);
    if (!(theta >= 0.0 && theta <= kTwoPi)) throw InvalidInput("theta must lie in [0, 2 pi]");
    return y * unit_arc_length(lambda, theta);
}

double perimeter(double y, double lambda) { return arc_length(y, lambda, kTwoPi); }

double radial_coordinate(double y, double lambda, double theta) {
    check_fiber(y, lambda);
    const double c = std::cos(theta);
    const double l2 = lambda * lambda;
    return y / std::sqrt(l2 - (l2 - 1.0) * c * c);
}

double conditional_density(double y, double lambda, double theta) {
    check_fiber(y, lambda);
    return y * speed(lambda, theta) / perimeter(y, lambda);
}

double closed_form_w1(double y, double yp, double lambda) {
    check_fiber(y, lambda);
    if (!(yp >= y)) throw InvalidInput("closed_form_w1 expects y <= yp");
    return kTwoPi * (yp - y) * y / (lambda * perimeter(y, lambda));
}

double closed_form_energy(double lambda) {
    check_lambda(lambda);
    return kTwoPi / perimeter(1.0, lambda);
}

namespace {

/// Angle where the normalized arc length reaches `fraction`, by bisection on
/// the increasing map theta -> L_1(theta).
double arc_quantile(double lambda, double fraction, double total) {
    double lo = 0.0, hi = kTwoPi;
    const double target = fraction * total;
    for (int it = 0; it < 64 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (unit_arc_length(lambda, mid, 1e-13) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Point2 fiber_point(double y, double lambda, double theta) {
    const double r = radial_coordinate(y, lambda, theta);
    return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

DiscreteMeasure sample_fiber(double y, double lambda, std::size_t n, FiberSampling mode) {
    check_fiber(y, lambda);
    if (n < 3) throw InvalidInput("a fiber needs at least 3 atoms");
    std::vector<Atom> atoms;
    atoms.reserve(n);
    if (mode == FiberSampling::weighted_grid) {
        for (std::size_t k = 0; k < n; ++k) {
            const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            atoms.push_back({fiber_point(y, lambda, theta), speed(lambda, theta)});
        }
    } else {
        const double total = lambda == 1.0 ? kTwoPi : unit_arc_length(lambda, kTwoPi, 1e-13);
        for (std::size_t k = 0; k < n; ++k) {
            const double fraction = static_cast<double>(k) / static_cast<double>(n);
            const double theta = lambda == 1.0 ? kTwoPi * fraction
                                               : arc_quantile(lambda, fraction, total);
            atoms.push_back({fiber_point(y, lambda, theta), 1.0});
        }
    }
    return normalize(DiscreteMeasure(std::move(atoms)));
}

const char* to_string(ScenarioKind k) noexcept {
    switch (k) {
        case ScenarioKind::circle: return "circle";
        case ScenarioKind::ellipse: return "ellipse";
        case ScenarioKind::ellipse_dirac: return "ellipse_dirac";
        case ScenarioKind::square: return "square";
        case ScenarioKind::graph: return "graph";
    }
    return "circle";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
    for (ScenarioKind k : {ScenarioKind::circle, ScenarioKind::ellipse, ScenarioKind::ellipse_dirac,
                           ScenarioKind::square, ScenarioKind::graph})
        if (name == to_string(k)) return k;
    throw InvalidInput("unknown scenario kind '" + name + "'");
}

const char* to_string(GraphMap g) noexcept {
    switch (g) {
        case GraphMap::identity: return "identity";
        case GraphMap::sine: return "sine";
        case GraphMap::parabola: return "parabola";
    }
    return "identity";
}

GraphMap graph_map_from_string(const std::string& name) {
    for (GraphMap g : {GraphMap::identity, GraphMap::sine, GraphMap::parabola})
        if (name == to_string(g)) return g;
    throw InvalidInput("unknown graph map '" + name + "'");
}

namespace {

std::vector<double> label_grid(double y_min, double R, std::size_t m) {
    std::vector<double> labels(m);
    for (std::size_t i = 0; i < m; ++i)
        labels[i] = m == 1 ? R
                           : y_min + (R - y_min) * static_cast<double>(i) /
                                         static_cast<double>(m - 1);
    return labels;
}

/// Midpoint rule on d(nu) = 2y/R^2 dy over the label grid, normalized to 1.
std::vector<double> base_weights(const std::vector<double>& labels) {
    std::vector<double> w(labels);
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    return w;
}

FiberedScenario ellipse_family(ScenarioKind kind, const ScenarioParams& p) {
    const double lambda = kind == ScenarioKind::circle ? 1.0 : p.lambda;
    check_lambda(lambda);
    if (!(p.R > 0.0) || !std::isfinite(p.R)) throw InvalidInput("R must be positive");
    const double y_min = p.y_min > 0.0 ? p.y_min : 0.1 * p.R;
    if (!(y_min < p.R)) throw InvalidInput("y_min must lie in (0, R)");
    if (p.fibers < 1) throw InvalidInput("at least one fiber is required");
    if (p.points < 3) throw InvalidInput("at least 3 points per fiber are required");

    FiberedScenario s;
    s.name = to_string(kind);
    s.parameters = {{"lambda", lambda},
                    {"R", p.R},
                    {"y_min", y_min},
                    {"fibers", static_cast<double>(p.fibers)},
                    {"points", static_cast<double>(p.points)}};
    const std::vector<double> labels = label_grid(y_min, p.R, p.fibers);
    const std::vector<double> base = base_weights(labels);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const DiscreteMeasure fiber = sample_fiber(labels[i], lambda, p.points, p.sampling);
        const bool dirac_mass = kind == ScenarioKind::ellipse_dirac;
        for (const Atom& a : fiber.atoms())
            s.samples.push_back({a.location, labels[i], dirac_mass ? 0.0 : base[i] * a.weight});
        if (dirac_mass) s.samples.push_back({{0.0, labels[i] / lambda}, labels[i], base[i]});
    }
    return s;
}

FiberedScenario unit_square(const ScenarioParams& p) {
    if (p.grid < 1) throw InvalidInput("square grid must be at least 1");
    FiberedScenario s;
    s.name = "square";
    s.parameters = {{"grid", static_cast<double>(p.grid)}};
    const double n = static_cast<double>(p.grid);
    const double w = 1.0 / (n * n);
    for (std::size_t i = 0; i < p.grid; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / n;
        for (std::size_t j = 0; j < p.grid; ++j)
            s.samples.push_back({{x, (static_cast<double>(j) + 0.5) / n}, x, w});
    }
    return s;
}

FiberedScenario graph_of_map(const ScenarioParams& p) {
    if (p.graph_samples < 2) throw InvalidInput("graph scenario needs at least 2 samples");
    FiberedScenario s;
    s.name = "graph";
    s.parameters = {{"samples", static_cast<double>(p.graph_samples)},
                    {"map", static_cast<double>(static_cast<int>(p.graph_map))}};
    const double n = static_cast<double>(p.graph_samples);
    for (std::size_t k = 0; k < p.graph_samples; ++k) {
        const double x = static_cast<double>(k) / (n - 1.0);
        double value = x;
        if (p.graph_map == GraphMap::sine) value = 0.5 * std::sin(kTwoPi * x);
        if (p.graph_map == GraphMap::parabola) value = x * x;
        s.samples.push_back({{x, value}, x, 1.0 / n});
    }
    return s;
}

}  // namespace

FiberedScenario build_scenario(ScenarioKind kind, const ScenarioParams& params) {
    switch (kind) {
        case ScenarioKind::circle:
        case ScenarioKind::ellipse:
        case ScenarioKind::ellipse_dirac: return ellipse_family(kind, params);
        case ScenarioKind::square: return unit_square(params);
        case ScenarioKind::graph: return graph_of_map(params);
    }
    throw InvalidInput("unknown scenario kind");
}

Table arc_profile(const std::vector<double>& lambdas, std::size_t steps) {
    if (steps < 2) throw InvalidInput("arc profile needs at least 2 steps");
    if (lambdas.empty()) throw InvalidInput("arc profile needs at least one lambda");
    Table t;
    t.columns.push_back("theta");
    for (double l : lambdas) {
        check_lambda(l);
        t.columns.push_back(format_real(l));
    }
    const double last = static_cast<double>(steps - 1);
    t.rows.assign(steps, std::vector<double>(lambdas.size() + 1, 0.0));
    for (std::size_t j = 0; j < steps; ++j) t.rows[j][0] = kTwoPi * static_cast<double>(j) / last;
    for (std::size_t c = 0; c < lambdas.size(); ++c) {
        const double lambda = lambdas[c];
        std::vector<double> cumulative(steps, 0.0);
        for (std::size_t j = 1; j < steps; ++j)
            cumulative[j] = cumulative[j - 1] +
                            adaptive_simpson([lambda](double x) { return speed(lambda, x); },
                                             t.rows[j - 1][0], t.rows[j][0], 1e-13);
        for (std::size_t j = 0; j < steps; ++j) t.rows[j][c + 1] = cumulative[j] / cumulative.back();
    }
    return t;
}

Table energy_curve(double lambda_min, double lambda_max, std::size_t steps) {
    check_lambda(lambda_min);
    if (!(lambda_max > lambda_min) || !std::isfinite(lambda_max))
        throw InvalidInput("energy curve needs lambda_min < lambda_max");
    if (steps < 2) throw InvalidInput("energy curve needs at least 2 steps");
    Table t;
    t.columns = {"lambda", "E1"};
    for (std::size_t k = 0; k < steps; ++k) {
        const double lambda = k + 1 == steps
                                  ? lambda_max
                                  : lambda_min + (lambda_max - lambda_min) * static_cast<double>(k) /
                                                     static_cast<double>(steps - 1);
        t.rows.push_back({lambda, closed_form_energy(lambda)});
    }
    return t;
}

Table reference_tables() {
    Table t;
    t.columns = {"lambda", "L_1", "E_1"};
    for (double lambda : {1.0, 1.001, 1.01, 1.1, 1.5, 2.0}) {
        const double length = perimeter(1.0, lambda);
        t.rows.push_back({lambda, length, kTwoPi / length});
    }
    return t;
}

std::string format_table_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c > 0) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    char buf[64];
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.8f", row[c]);
            if (c > 0) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace foliation
