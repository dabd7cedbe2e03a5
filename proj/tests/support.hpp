#pragma once

// Test-only oracles and generators. Nothing here calls into the code paths it
// is used to check.

#include "foliation/metric_measure.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace foliation::testing {

inline DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t atoms, double mass = 1.0) {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::vector<Atom> out(atoms);
    double total = 0.0;
    for (Atom& a : out) {
        a = {{coord(rng), coord(rng)}, weight(rng)};
        total += a.weight;
    }
    for (Atom& a : out) a.weight *= mass / total;
    return DiscreteMeasure(std::move(out));
}

/// Periodic trapezoid rule over [0, 2 pi]; spectrally accurate for smooth
/// periodic integrands.
template <typename F>
double periodic_trapezoid(F f, int n = 8192) {
    const double h = 2.0 * std::numbers::pi / n;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += f(k * h);
    return s * h;
}

/// Composite Gauss-Legendre (5 nodes) on [a, b] with `panels` panels.
template <typename F>
double gauss_legendre(F f, double a, double b, int panels = 2000) {
    static constexpr double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                    -0.9061798459386640, 0.9061798459386640};
    static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int k = 0; k < 5; ++k) s += w[k] * f(mid + 0.5 * h * x[k]);
    }
    return s * 0.5 * h;
}

/// Hungarian algorithm for a square cost matrix; returns the minimal total.
inline double min_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1), v(n + 1), minv(n + 1);
    std::vector<int> p(n + 1), way(n + 1);
    std::vector<char> used(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += cost[p[j] - 1][j - 1];
    return total;
}

}  // namespace foliation::testing
