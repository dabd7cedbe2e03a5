#pragma once

#include "foliation/metric_measure.hpp"

#include <cstddef>
#include <vector>

namespace foliation {

struct PlanEntry {
    std::size_t row = 0;
    std::size_t col = 0;
    double flow = 0.0;
};

/// A coupling between two discrete measures, stored sparsely. `cost` is the
/// p-th power transport cost the plan was built with.
struct TransportPlan {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<PlanEntry> entries;
    double cost = 0.0;
};

struct WassersteinResult {
    double value = 0.0;
    TransportPlan plan;
};

/// Largest mass difference accepted as balanced. Within it the lighter side is
/// rescaled proportionally.
inline constexpr double kMassBalanceTolerance = 1e-9;

/// Exact W_p between two discrete measures.
///
/// Solves the transportation problem by primal simplex pivoting on spanning
/// tree bases, starting from the north-west corner rule. Pricing scans blocks
/// of cells for the most negative reduced cost; after a long run of degenerate
/// pivots the solver falls back to Bland's smallest-index rule for both
/// entering and leaving cells, which guarantees termination.
///
/// Throws InvalidInput for unbalanced masses or p outside [1, inf), and
/// NumericalFailure if the pivot budget is exhausted.
WassersteinResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                              const Metric& metric = euclidean_metric());

/// Value only, without materializing the plan.
double wasserstein_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                            const Metric& metric = euclidean_metric());

/// Test oracle for instances with at most 3 atoms per side: enumerates every
/// spanning tree of the bipartite support graph, solves the tree flow, drops
/// infeasible trees and returns the cheapest, raised to 1/p.
double brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                               const Metric& metric = euclidean_metric());

/// Sum of flow * distance^p over the plan entries.
double plan_cost(const TransportPlan& plan, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                 double p, const Metric& metric = euclidean_metric());

std::string format_plan_csv(const TransportPlan& plan);

}  // namespace foliation
