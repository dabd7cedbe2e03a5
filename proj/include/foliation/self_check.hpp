#pragma once

#include <cstddef>
#include <cstdint>

namespace foliation {

struct SelfCheckResult {
    std::size_t oracle_instances = 0;
    std::size_t oracle_failures = 0;
    double oracle_worst_relative_error = 0.0;
    std::size_t triples = 0;
    std::size_t axiom_failures = 0;

    bool passed() const noexcept { return oracle_failures == 0 && axiom_failures == 0; }
};

/// Seeded randomized checks of the transport solver: agreement with the
/// spanning-tree oracle on small instances, then symmetry, triangle
/// inequality and W_1 <= W_2 on random triples.
SelfCheckResult run_self_check(std::uint64_t seed, std::size_t instances = 200,
                               std::size_t triples = 50);

}  // namespace foliation
