#include "foliation/metric_measure.hpp"

#include "foliation/error.hpp"
#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace foliation {

double euclidean_distance(const Point2& a, const Point2& b) noexcept {
    return std::hypot(a.x1 - b.x1, a.x2 - b.x2);
}

Metric euclidean_metric() { return &euclidean_distance; }

namespace {

bool finite(const Point2& p) { return std::isfinite(p.x1) && std::isfinite(p.x2); }

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
    atoms_.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!finite(a.location)) throw InvalidInput("atom location is not finite");
        if (!std::isfinite(a.weight) || a.weight < 0.0)
            throw InvalidInput("atom weight must be finite and nonnegative");
        if (a.weight > 0.0) {
            atoms_.push_back(a);
            mass_ += a.weight;
        }
    }
    if (atoms_.empty()) throw InvalidInput("measure has no positive mass");
    if (!std::isfinite(mass_)) throw InvalidInput("measure mass is not finite");
    probability_ = std::abs(mass_ - 1.0) <= 1e-12;
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, double mass, bool probability)
    : atoms_(std::move(atoms)), mass_(mass), probability_(probability) {}

std::vector<double> DiscreteMeasure::weights() const {
    std::vector<double> w;
    w.reserve(atoms_.size());
    for (const Atom& a : atoms_) w.push_back(a.weight);
    return w;
}

DiscreteMeasure dirac(const Point2& p) {
    if (!finite(p)) throw InvalidInput("dirac location is not finite");
    return DiscreteMeasure({Atom{p, 1.0}}, 1.0, true);
}

DiscreteMeasure normalize(const DiscreteMeasure& m) {
    if (m.is_probability() && m.mass() == 1.0) return m;
    std::vector<Atom> atoms(m.atoms().begin(), m.atoms().end());
    double mass = 0.0;
    for (Atom& a : atoms) {
        a.weight /= m.mass();
        mass += a.weight;
    }
    return DiscreteMeasure(std::move(atoms), mass, true);
}

double restrict_mass(const DiscreteMeasure& m, const Region& region) {
    double total = 0.0;
    for (const Atom& a : m.atoms())
        if (region(a.location)) total += a.weight;
    return total;
}

DiscreteMeasure merge_coincident(const DiscreteMeasure& m) {
    std::vector<Atom> merged;
    for (const Atom& a : m.atoms()) {
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const Atom& b) { return b.location == a.location; });
        if (it == merged.end())
            merged.push_back(a);
        else
            it->weight += a.weight;
    }
    return DiscreteMeasure(std::move(merged));
}

double FiberedScenario::total_mass() const {
    double total = 0.0;
    for (const Sample& s : samples) total += s.weight;
    return total;
}

void FiberedScenario::validate() const {
    if (samples.empty()) throw InvalidInput("scenario has no samples");
    for (const Sample& s : samples) {
        if (!finite(s.point) || !std::isfinite(s.label))
            throw InvalidInput("scenario sample is not finite");
        if (!std::isfinite(s.weight) || s.weight < 0.0)
            throw InvalidInput("scenario sample weight must be finite and nonnegative");
    }
}

std::string format_real(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

DiscreteMeasure parse_measure_csv(const std::string& text) {
    const detail::CsvTable table = detail::parse_csv(text);
    detail::require_columns(table, {"x1", "x2", "w"});
    std::vector<Atom> atoms;
    atoms.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (!(row[2] > 0.0))
            throw InvalidInput("measure row " + std::to_string(r + 1) + ": weight must be positive");
        atoms.push_back({{row[0], row[1]}, row[2]});
    }
    return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure read_measure_csv(const std::string& path) {
    return parse_measure_csv(detail::slurp(path));
}

std::string format_measure_csv(const DiscreteMeasure& m) {
    std::string out = "x1,x2,w\n";
    for (const Atom& a : m.atoms())
        out += format_real(a.location.x1) + ',' + format_real(a.location.x2) + ',' +
               format_real(a.weight) + '\n';
    return out;
}

FiberedScenario parse_scenario_csv(const std::string& text) {
    const detail::CsvTable table = detail::parse_csv(text);
    const bool weighted = table.columns.size() == 4;
    if (weighted)
        detail::require_columns(table, {"x1", "x2", "label", "w"});
    else
        detail::require_columns(table, {"x1", "x2", "label"});
    FiberedScenario s;
    s.name = "file";
    s.samples.reserve(table.rows.size());
    for (const auto& row : table.rows)
        s.samples.push_back({{row[0], row[1]}, row[2], weighted ? row[3] : 1.0});
    s.validate();
    return s;
}

FiberedScenario read_scenario_csv(const std::string& path) {
    FiberedScenario s = parse_scenario_csv(detail::slurp(path));
    s.name = path;
    return s;
}

std::string format_scenario_csv(const FiberedScenario& s) {
    std::string out = "x1,x2,label,w\n";
    for (const Sample& x : s.samples)
        out += format_real(x.point.x1) + ',' + format_real(x.point.x2) + ',' +
               format_real(x.label) + ',' + format_real(x.weight) + '\n';
    return out;
}

}  // namespace foliation
