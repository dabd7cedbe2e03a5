#pragma once

#include "foliation/metric_measure.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace foliation {

/// Empirical disintegration of a scenario's measure over its labels.
///
/// Labels are stored sorted ascending; every per-label vector is indexed the
/// same way. The base measure embeds label y at the point (y, 0) purely for
/// bookkeeping; distances on the label space come from fibers.
struct Disintegration {
    std::vector<double> labels;
    DiscreteMeasure base;
    std::vector<DiscreteMeasure> conditionals;
    std::vector<std::vector<Point2>> fibers;
    std::size_t source_samples = 0;
    double source_mass = 0.0;

    std::size_t label_count() const noexcept { return labels.size(); }
    /// Index of an exactly matching label. Throws InvalidInput when absent.
    std::size_t index_of(double label) const;
    double base_weight(std::size_t index) const;
};

/// Groups samples by exact label. `weights`, when given, replaces the sample
/// weights and must be strictly positive. Throws InvalidInput for an empty
/// scenario, a bad weight, or a label without mass.
Disintegration disintegrate(const FiberedScenario& s,
                            std::optional<std::span<const double>> weights = std::nullopt);

/// The base measure nu = pi_* mu.
DiscreteMeasure pushforward(const FiberedScenario& s,
                            std::optional<std::span<const double>> weights = std::nullopt);

/// max over regions of |sum_y mu_y(A) nu({y}) - mu(A)|.
double verify_reconstruction(const Disintegration& d, const FiberedScenario& s,
                             std::span<const Region> regions);

/// Replaces each label by the midpoint of its width-sized bin. Labels within
/// 1e-9 (relative) of a bin edge are snapped onto it first, so exact grid
/// labels keep their partition.
FiberedScenario bin_labels(const FiberedScenario& s, double width);

}  // namespace foliation
