#include "foliation/self_check.hpp"

#include "foliation/transport.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace foliation {

namespace {

DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t atoms, double mass) {
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

}  // namespace

SelfCheckResult run_self_check(std::uint64_t seed, std::size_t instances, std::size_t triples) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> small(1, 3);
    std::uniform_int_distribution<std::size_t> medium(1, 16);
    SelfCheckResult result;

    for (std::size_t k = 0; k < instances; ++k) {
        const double p = k % 2 == 0 ? 1.0 : 2.0;
        const DiscreteMeasure mu = random_measure(rng, small(rng), 1.0);
        const DiscreteMeasure nu = random_measure(rng, small(rng), 1.0);
        const double solver = wasserstein_distance(mu, nu, p);
        const double oracle = brute_force_wasserstein(mu, nu, p);
        const double rel = std::abs(solver - oracle) / std::max(oracle, 1e-300);
        result.oracle_worst_relative_error = std::max(result.oracle_worst_relative_error, rel);
        ++result.oracle_instances;
        if (rel > 1e-9) ++result.oracle_failures;
    }

    for (std::size_t k = 0; k < triples; ++k) {
        const DiscreteMeasure a = random_measure(rng, medium(rng), 1.0);
        const DiscreteMeasure b = random_measure(rng, medium(rng), 1.0);
        const DiscreteMeasure c = random_measure(rng, medium(rng), 1.0);
        bool ok = true;
        double w1_ab = 0.0;
        for (double p : {1.0, 2.0}) {
            const double ab = wasserstein_distance(a, b, p);
            const double ba = wasserstein_distance(b, a, p);
            const double bc = wasserstein_distance(b, c, p);
            const double ac = wasserstein_distance(a, c, p);
            ok = ok && std::abs(ab - ba) <= 1e-9 * std::max(1.0, ab);
            ok = ok && ac <= ab + bc + 1e-9;
            if (p == 1.0) w1_ab = ab;
            else ok = ok && w1_ab <= ab + 1e-9;
        }
        ++result.triples;
        if (!ok) ++result.axiom_failures;
    }
    return result;
}

}  // namespace foliation
