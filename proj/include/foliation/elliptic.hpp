#pragma once

#include "foliation/metric_measure.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace foliation {

/// Nested ellipses x1^2 + lambda^2 x2^2 = y^2, y in [y_min, R].
struct EllipseFoliation {
    double lambda = 1.0;
    double R = 1.0;
    double y_min = 0.1;
};

/// Adaptive Simpson integration with an absolute tolerance and a recursion
/// depth cap. Throws NumericalFailure if the cap is hit before the local
/// error estimate meets its share of the tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-11, int max_depth = 40);

/// Arc length of the ellipse with major semi-axis y from angle 0 to theta.
double arc_length(double y, double lambda, double theta);

/// Full perimeter, arc_length(y, lambda, 2 pi).
double perimeter(double y, double lambda);

/// Distance from the origin of the ellipse point at polar angle theta.
double radial_coordinate(double y, double lambda, double theta);

/// Density of the conditional measure with respect to d(theta).
double conditional_density(double y, double lambda, double theta);

/// W_1 cost of the radial plan between fibers y <= yp.
double closed_form_w1(double y, double yp, double lambda);

/// 2 pi / perimeter(1, lambda); independent of y.
double closed_form_energy(double lambda);

enum class FiberSampling {
    /// Uniform polar-angle grid, atoms weighted by the conditional density.
    weighted_grid,
    /// Equal weights at the quantiles of the conditional measure.
    equal_weight,
};

/// n atoms on fiber y, flagged as a probability measure. Requires n >= 3.
DiscreteMeasure sample_fiber(double y, double lambda, std::size_t n,
                             FiberSampling mode = FiberSampling::weighted_grid);

enum class ScenarioKind { circle, ellipse, ellipse_dirac, square, graph };

const char* to_string(ScenarioKind k) noexcept;
ScenarioKind scenario_kind_from_string(const std::string& name);

enum class GraphMap { identity, sine, parabola };

const char* to_string(GraphMap g) noexcept;
GraphMap graph_map_from_string(const std::string& name);

struct ScenarioParams {
    double lambda = 1.0;
    double R = 1.0;
    /// <= 0 selects 0.1 R.
    double y_min = 0.0;
    std::size_t fibers = 64;
    std::size_t points = 256;
    std::size_t grid = 16;
    std::size_t graph_samples = 64;
    GraphMap graph_map = GraphMap::identity;
    FiberSampling sampling = FiberSampling::weighted_grid;
};

/// Labelled samples whose disintegration reproduces the conditionals of the
/// named construction. Total mass is 1.
FiberedScenario build_scenario(ScenarioKind kind, const ScenarioParams& params = {});

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Normalized arc length L_1(theta) / perimeter for each lambda, theta on an
/// evenly spaced grid of [0, 2 pi] with `steps` points.
Table arc_profile(const std::vector<double>& lambdas, std::size_t steps);

/// (lambda, closed_form_energy(lambda)) on an evenly spaced grid.
Table energy_curve(double lambda_min, double lambda_max, std::size_t steps);

/// Perimeters and energies at the lambdas of the published tables.
Table reference_tables();

/// CSV with 8 fixed decimals.
std::string format_table_csv(const Table& t);

}  // namespace foliation
