#include "foliation/disintegration.hpp"

#include "foliation/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace foliation {

std::size_t Disintegration::index_of(double label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label)
        throw InvalidInput("unknown label " + format_real(label));
    return static_cast<std::size_t>(it - labels.begin());
}

double Disintegration::base_weight(std::size_t index) const {
    return base.atoms()[index].weight;
}

namespace {

std::vector<double> effective_weights(const FiberedScenario& s,
                                      std::optional<std::span<const double>> weights) {
    s.validate();
    std::vector<double> w;
    w.reserve(s.samples.size());
    if (weights) {
        if (weights->size() != s.samples.size())
            throw InvalidInput("weight count does not match sample count");
        for (double v : *weights) {
            if (!std::isfinite(v) || v <= 0.0) throw InvalidInput("weights must be positive");
            w.push_back(v);
        }
    } else {
        for (const Sample& x : s.samples) w.push_back(x.weight);
    }
    return w;
}

}  // namespace

Disintegration disintegrate(const FiberedScenario& s,
                            std::optional<std::span<const double>> weights) {
    const std::vector<double> w = effective_weights(s, weights);

    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < s.samples.size(); ++k) groups[s.samples[k].label].push_back(k);

    std::vector<double> labels;
    std::vector<Atom> base_atoms;
    std::vector<DiscreteMeasure> conditionals;
    std::vector<std::vector<Point2>> fibers;
    labels.reserve(groups.size());
    double total = 0.0;
    for (const auto& [label, members] : groups) {
        std::vector<Atom> atoms;
        std::vector<Point2> fiber;
        double fiber_mass = 0.0;
        for (std::size_t k : members) {
            fiber.push_back(s.samples[k].point);
            if (w[k] > 0.0) {
                atoms.push_back({s.samples[k].point, w[k]});
                fiber_mass += w[k];
            }
        }
        if (atoms.empty()) throw InvalidInput("label " + format_real(label) + " carries no mass");
        labels.push_back(label);
        base_atoms.push_back({{label, 0.0}, fiber_mass});
        conditionals.push_back(normalize(DiscreteMeasure(std::move(atoms))));
        fibers.push_back(std::move(fiber));
        total += fiber_mass;
    }
    return Disintegration{std::move(labels),       DiscreteMeasure(std::move(base_atoms)),
                          std::move(conditionals), std::move(fibers),
                          s.samples.size(),        total};
}

DiscreteMeasure pushforward(const FiberedScenario& s,
                            std::optional<std::span<const double>> weights) {
    return disintegrate(s, weights).base;
}

double verify_reconstruction(const Disintegration& d, const FiberedScenario& s,
                             std::span<const Region> regions) {
    double direct_mass = s.total_mass();
    if (s.samples.size() != d.source_samples ||
        std::abs(direct_mass - d.source_mass) > 1e-12 * std::max(1.0, direct_mass))
        throw InvalidInput("disintegration was not built from this scenario");
    double worst = 0.0;
    for (const Region& region : regions) {
        double direct = 0.0;
        for (const Sample& x : s.samples)
            if (region(x.point)) direct += x.weight;
        double recombined = 0.0;
        for (std::size_t k = 0; k < d.label_count(); ++k)
            recombined += restrict_mass(d.conditionals[k], region) * d.base_weight(k);
        worst = std::max(worst, std::abs(recombined - direct));
    }
    return worst;
}

FiberedScenario bin_labels(const FiberedScenario& s, double width) {
    if (!(width > 0.0) || !std::isfinite(width)) throw InvalidInput("bin width must be positive");
    FiberedScenario out = s;
    for (Sample& x : out.samples) {
        double q = x.label / width;
        const double nearest = std::round(q);
        if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, std::abs(q))) q = nearest;
        x.label = std::floor(q) * width + width / 2.0;
    }
    out.parameters["bin_width"] = width;
    return out;
}

}  // namespace foliation
