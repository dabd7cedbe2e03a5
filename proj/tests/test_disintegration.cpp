#include "foliation/disintegration.hpp"
#include "foliation/elliptic.hpp"
#include "foliation/error.hpp"

#include <doctest.h>

#include <algorithm>

#include <random>

using namespace foliation;

namespace {

std::vector<Region> random_boxes(std::mt19937_64& rng, int count, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Region> boxes;
    for (int k = 0; k < count; ++k) {
        double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        boxes.push_back([=](const Point2& x) { return x.x1 >= a && x.x1 <= b && x.x2 >= c && x.x2 <= d; });
    }
    return boxes;
}

}  // namespace

TEST_CASE("unit square disintegrates into uniform columns") {
    ScenarioParams params;
    params.grid = 8;
    const FiberedScenario s = build_scenario(ScenarioKind::square, params);
    const Disintegration d = disintegrate(s);
    REQUIRE(d.label_count() == 8);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(d.base_weight(k) == doctest::Approx(1.0 / 8).epsilon(1e-15));
        CHECK(d.conditionals[k].is_probability());
        CHECK(d.conditionals[k].size() == 8);
        for (const Atom& a : d.conditionals[k].atoms()) {
            CHECK(a.weight == doctest::Approx(1.0 / 8).epsilon(1e-15));
            CHECK(a.location.x1 == d.labels[k]);
        }
    }
    CHECK(d.base.mass() == doctest::Approx(s.total_mass()).epsilon(1e-15));
}

TEST_CASE("graph scenario conditionals are Diracs at the graph point") {
    ScenarioParams params;
    params.graph_samples = 20;
    params.graph_map = GraphMap::sine;
    const FiberedScenario s = build_scenario(ScenarioKind::graph, params);
    const Disintegration d = disintegrate(s);
    REQUIRE(d.label_count() == 20);
    for (std::size_t k = 0; k < d.label_count(); ++k) {
        REQUIRE(d.conditionals[k].size() == 1);
        CHECK(d.conditionals[k].atoms()[0].weight == 1.0);
        CHECK(d.conditionals[k].atoms()[0].location.x1 == d.labels[k]);
    }
}

TEST_CASE("single label") {
    FiberedScenario s;
    s.samples = {{{0, 0}, 2.0, 1.0}, {{1, 0}, 2.0, 3.0}};
    const Disintegration d = disintegrate(s);
    REQUIRE(d.label_count() == 1);
    CHECK(d.base.mass() == 4.0);
    CHECK(d.base.atoms()[0].location == Point2{2.0, 0.0});
    CHECK(d.conditionals[0].atoms()[0].weight == 0.25);
    CHECK(d.conditionals[0].atoms()[1].weight == 0.75);

    const DiscreteMeasure nu = pushforward(s);
    CHECK(nu.size() == 1);
    CHECK(nu.mass() == 4.0);
}

TEST_CASE("pushforward") {
    ScenarioParams params;
    params.grid = 5;
    const DiscreteMeasure square = pushforward(build_scenario(ScenarioKind::square, params));
    for (const Atom& a : square.atoms()) CHECK(a.weight == doctest::Approx(0.2).epsilon(1e-15));

    params.fibers = 10;
    params.points = 16;
    const FiberedScenario circle = build_scenario(ScenarioKind::circle, params);
    const DiscreteMeasure nu = pushforward(circle);
    REQUIRE(nu.size() == 10);
    // Base weight proportional to the radius, as in d(nu) = 2r/R^2 dr.
    for (const Atom& a : nu.atoms())
        CHECK(a.weight / a.location.x1 == doctest::Approx(nu.atoms()[0].weight / nu.atoms()[0].location.x1));
    CHECK(nu.mass() == doctest::Approx(circle.total_mass()).epsilon(1e-14));

    FiberedScenario one;
    one.samples = {{{0.3, 0.4}, 0.5, 1.0}};
    CHECK(pushforward(one).atoms()[0].location == Point2{0.5, 0.0});
}

TEST_CASE("explicit weights override sample weights") {
    FiberedScenario s;
    s.samples = {{{0, 0}, 1.0, 1.0}, {{0, 1}, 1.0, 1.0}};
    const std::vector<double> w{1.0, 3.0};
    const Disintegration d = disintegrate(s, std::span<const double>(w));
    CHECK(d.conditionals[0].atoms()[1].weight == 0.75);
    const std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS(disintegrate(s, std::span<const double>(bad)), InvalidInput);
    const std::vector<double> short_list{1.0};
    CHECK_THROWS_AS(disintegrate(s, std::span<const double>(short_list)), InvalidInput);
}

TEST_CASE("disintegration errors") {
    CHECK_THROWS_AS(disintegrate(FiberedScenario{}), InvalidInput);
    FiberedScenario massless;
    massless.samples = {{{0, 0}, 1.0, 0.0}};
    CHECK_THROWS_AS(disintegrate(massless), InvalidInput);
    FiberedScenario negative;
    negative.samples = {{{0, 0}, 1.0, -1.0}};
    CHECK_THROWS_AS(disintegrate(negative), InvalidInput);
}

TEST_CASE("geometry-only samples belong to the fiber but carry no mass") {
    ScenarioParams params;
    params.fibers = 4;
    params.points = 12;
    params.lambda = 1.5;
    const Disintegration d = disintegrate(build_scenario(ScenarioKind::ellipse_dirac, params));
    for (std::size_t k = 0; k < d.label_count(); ++k) {
        CHECK(d.fibers[k].size() == 13);
        REQUIRE(d.conditionals[k].size() == 1);
        CHECK(d.conditionals[k].atoms()[0].location.x2 == doctest::Approx(d.labels[k] / 1.5));
    }
}

TEST_CASE("conditionals are probabilities concentrated on their fibers") {
    std::mt19937_64 rng(1);
    for (ScenarioKind kind : {ScenarioKind::circle, ScenarioKind::ellipse, ScenarioKind::ellipse_dirac,
                              ScenarioKind::square, ScenarioKind::graph}) {
        ScenarioParams params;
        params.fibers = 6;
        params.points = 16;
        params.lambda = 1.3;
        params.grid = 6;
        params.graph_samples = 9;
        const Disintegration d = disintegrate(build_scenario(kind, params));
        for (std::size_t k = 0; k < d.label_count(); ++k) {
            CHECK(d.conditionals[k].is_probability());
            for (const Atom& a : d.conditionals[k].atoms())
                CHECK(std::find(d.fibers[k].begin(), d.fibers[k].end(), a.location) != d.fibers[k].end());
        }
    }
}

TEST_CASE("reconstruction identity") {
    ScenarioParams params;
    params.grid = 16;
    const FiberedScenario square = build_scenario(ScenarioKind::square, params);
    const Disintegration d = disintegrate(square);
    const std::vector<Region> whole{[](const Point2&) { return true; }};
    CHECK(verify_reconstruction(d, square, whole) <= 1e-15);
    const std::vector<Region> left{[](const Point2& x) { return x.x1 < 0.5; }};
    CHECK(verify_reconstruction(d, square, left) <= 1e-12);

    std::mt19937_64 rng(99);
    const auto boxes = random_boxes(rng, 100, -0.1, 1.1);
    CHECK(verify_reconstruction(d, square, boxes) <= 1e-12 * square.total_mass());

    FiberedScenario other = square;
    other.samples.pop_back();
    CHECK_THROWS_AS(verify_reconstruction(d, other, whole), InvalidInput);
}

TEST_CASE("bin_labels") {
    FiberedScenario s;
    s.samples = {{{0, 0}, 0.10, 1}, {{0, 1}, 0.11, 1}, {{0, 2}, 0.49, 1}};
    const FiberedScenario binned = bin_labels(s, 0.2);
    CHECK(binned.samples[0].label == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(binned.samples[1].label == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(binned.samples[2].label == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(disintegrate(bin_labels(s, 10.0)).label_count() == 1);
    CHECK_THROWS_AS(bin_labels(s, 0.0), InvalidInput);
    CHECK_THROWS_AS(bin_labels(s, -1.0), InvalidInput);
}

TEST_CASE("binning exact grid labels at the grid step keeps the partition") {
    const double step = 0.1;
    FiberedScenario s;
    for (int k = 0; k < 30; ++k)
        for (int j = 0; j < 3; ++j) s.samples.push_back({{k * step, double(j)}, k * step, 1.0});
    const Disintegration before = disintegrate(s);
    const Disintegration after = disintegrate(bin_labels(s, step));
    REQUIRE(after.label_count() == before.label_count());
    for (std::size_t k = 0; k < before.label_count(); ++k) {
        CHECK(after.labels[k] == doctest::Approx(before.labels[k] + step / 2).epsilon(1e-12));
        CHECK(after.fibers[k] == before.fibers[k]);
    }
}

TEST_CASE("a vanishing bin width reproduces the exact-label disintegration") {
    ScenarioParams params;
    params.fibers = 7;
    params.points = 8;
    const FiberedScenario s = build_scenario(ScenarioKind::circle, params);
    const Disintegration exact = disintegrate(s);
    const Disintegration fine = disintegrate(bin_labels(s, 1e-9));
    REQUIRE(fine.label_count() == exact.label_count());
    for (std::size_t k = 0; k < exact.label_count(); ++k) {
        CHECK(fine.fibers[k] == exact.fibers[k]);
        CHECK(fine.base_weight(k) == exact.base_weight(k));
    }
}
