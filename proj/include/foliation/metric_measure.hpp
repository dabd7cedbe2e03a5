#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace foliation {

struct Point2 {
    double x1 = 0.0;
    double x2 = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Ambient distance. Every downstream computation goes through this callback.
using Metric = std::function<double(const Point2&, const Point2&)>;

double euclidean_distance(const Point2& a, const Point2& b) noexcept;

/// The default ambient metric as a callback.
Metric euclidean_metric();

struct Atom {
    Point2 location;
    double weight = 0.0;
};

/// Finitely many positively weighted atoms in the plane.
///
/// Zero-weight atoms are dropped at construction. Coincident locations are kept
/// as separate atoms. The measure is immutable once built.
class DiscreteMeasure {
public:
    /// Throws InvalidInput on negative or non-finite weights, non-finite
    /// coordinates, or when no positive mass remains.
    explicit DiscreteMeasure(std::vector<Atom> atoms);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double mass() const noexcept { return mass_; }
    bool is_probability() const noexcept { return probability_; }

    std::vector<double> weights() const;

private:
    DiscreteMeasure(std::vector<Atom> atoms, double mass, bool probability);

    std::vector<Atom> atoms_;
    double mass_ = 0.0;
    bool probability_ = false;

    friend DiscreteMeasure normalize(const DiscreteMeasure&);
    friend DiscreteMeasure dirac(const Point2&);
};

DiscreteMeasure dirac(const Point2& p);

/// Rescales to unit mass and flags the result as a probability measure.
DiscreteMeasure normalize(const DiscreteMeasure& m);

using Region = std::function<bool(const Point2&)>;

/// Mass of the atoms inside `region`.
double restrict_mass(const DiscreteMeasure& m, const Region& region);

/// Collapses coincident atoms into one. Never called implicitly.
DiscreteMeasure merge_coincident(const DiscreteMeasure& m);

struct Sample {
    Point2 point;
    double label = 0.0;
    /// Mass carried by the sample. Zero marks a geometry-only point: it belongs
    /// to its fiber but contributes nothing to the measure.
    double weight = 1.0;
};

/// A sampled ground space where every sample carries its projection label.
/// The fiber of a label is the set of samples sharing it.
struct FiberedScenario {
    std::vector<Sample> samples;
    std::string name;
    std::map<std::string, double> parameters;

    double total_mass() const;
    /// Throws InvalidInput on an empty sample set, non-finite values or
    /// negative weights.
    void validate() const;
};

// Measure CSV: header `x1,x2,w`; `#` lines are comments.
DiscreteMeasure read_measure_csv(const std::string& path);
DiscreteMeasure parse_measure_csv(const std::string& text);
std::string format_measure_csv(const DiscreteMeasure& m);

// Scenario CSV: header `x1,x2,label` with an optional fourth column `w`.
FiberedScenario read_scenario_csv(const std::string& path);
FiberedScenario parse_scenario_csv(const std::string& text);
std::string format_scenario_csv(const FiberedScenario& s);

/// Shortest decimal text that round-trips to `v`.
std::string format_real(double v);

}  // namespace foliation
