#pragma once

#include "foliation/disintegration.hpp"
#include "foliation/metric_measure.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace foliation {

enum class Verdict { metric_measure_foliation, not_foliation, inconclusive };

const char* to_string(Verdict v) noexcept;

struct DerivativeEstimate {
    double label = 0.0;
    double derivative = 0.0;
    double eps = 0.0;
    std::pair<double, double> witness{0.0, 0.0};
};

struct FoliationCheck {
    bool passed = true;
    double worst_violation = 0.0;
};

struct EnergyReport {
    double p = 1.0;
    std::vector<DerivativeEstimate> per_label;
    double energy = 0.0;
    Verdict verdict = Verdict::inconclusive;
    double tolerance = 0.0;
    std::optional<double> isometry_gap;
    FoliationCheck foliation_check;
    std::vector<std::string> warnings;
};

struct EnergyOptions {
    double p = 1.0;
    /// Classifier tolerance on energy - 1.
    double tolerance = 1e-2;
    /// Largest ball radius; <= 0 selects the fiber-metric diameter.
    double eps0 = 0.0;
    bool compute_isometry_gap = true;
};

double fiber_distance(const Disintegration& d, double y1, double y2,
                      const Metric& metric = euclidean_metric());

/// Checks d(x, F') = d(F, F') within `tol` for every ordered fiber pair and
/// every x in F.
FoliationCheck metric_foliation_check(const Disintegration& d, double tol,
                                      const Metric& metric = euclidean_metric());

/// max over sample pairs of d*(pi(x), pi(x')) - d(x, x').
double lipschitz_check(const FiberedScenario& s, const Disintegration& d,
                       const Metric& metric = euclidean_metric());

/// eps0 * 2^-k, continued until the radius drops below the closest pair of
/// distinct fibers.
std::vector<double> default_eps_schedule(const Disintegration& d, double eps0 = 0.0,
                                         const Metric& metric = euclidean_metric());

DerivativeEstimate derivative_at(const Disintegration& d, double y, double p,
                                 const std::vector<double>& eps_schedule,
                                 const Metric& metric = euclidean_metric());

EnergyReport energy(const Disintegration& d, const EnergyOptions& options,
                    const std::vector<double>& eps_schedule,
                    const Metric& metric = euclidean_metric());

/// Uses default_eps_schedule(d, options.eps0).
EnergyReport energy(const Disintegration& d, const EnergyOptions& options,
                    const Metric& metric = euclidean_metric());

/// max over all distinct label pairs of W_p / d* - 1.
double isometry_gap(const Disintegration& d, double p, const Metric& metric = euclidean_metric());

}  // namespace foliation
