#include "foliation/io.hpp"

#include "foliation/error.hpp"
#include "csv.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace foliation {

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + temp.string());
        out << contents;
        out.flush();
        if (!out) throw IoError("short write to " + temp.string());
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw IoError("cannot move output into place at " + path);
    }
}

std::string read_file(const std::string& path) { return detail::slurp(path); }

std::string header_comment(const std::string& config) {
    return std::string("# ") + kToolName + ' ' + kVersion + ' ' + config + '\n';
}

std::string format_report_json(const EnergyReport& report, const std::string& config) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["comment"] = std::string(kToolName) + ' ' + kVersion + ' ' + config;
    doc["p"] = report.p;
    doc["energy"] = report.energy;
    doc["verdict"] = to_string(report.verdict);
    doc["tolerance"] = report.tolerance;
    ordered_json per_label = ordered_json::array();
    for (const DerivativeEstimate& e : report.per_label) {
        ordered_json item;
        item["label"] = e.label;
        item["derivative"] = e.derivative;
        item["eps"] = e.eps;
        item["witness"] = {e.witness.first, e.witness.second};
        per_label.push_back(std::move(item));
    }
    doc["per_label"] = std::move(per_label);
    doc["isometry_gap"] = report.isometry_gap ? ordered_json(*report.isometry_gap) : ordered_json();
    doc["foliation_check"] = {{"passed", report.foliation_check.passed},
                              {"worst_violation", report.foliation_check.worst_violation}};
    doc["warnings"] = report.warnings;
    return doc.dump(2) + '\n';
}

void write_disintegration(const Disintegration& d, const std::string& dir,
                          const std::string& config) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir);
    const std::string header = header_comment(config);
    write_file_atomic((fs::path(dir) / "base.csv").string(), header + format_measure_csv(d.base));
    for (std::size_t k = 0; k < d.label_count(); ++k) {
        const std::string name = "fiber_" + format_real(d.labels[k]) + ".csv";
        write_file_atomic((fs::path(dir) / name).string(),
                          header + format_measure_csv(d.conditionals[k]));
    }
}

}  // namespace foliation

namespace foliation {

FiberedScenario parse_scenario_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("scenario JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidInput("scenario JSON must be an object");
    try {
        if (doc.contains("samples")) {
            FiberedScenario s;
            s.name = doc.value("name", std::string("json"));
            for (const auto& row : doc.at("samples")) {
                if (!row.is_array() || (row.size() != 3 && row.size() != 4))
                    throw InvalidInput("scenario JSON samples are [x1, x2, label(, w)]");
                s.samples.push_back({{row[0].get<double>(), row[1].get<double>()},
                                     row[2].get<double>(),
                                     row.size() == 4 ? row[3].get<double>() : 1.0});
            }
            s.validate();
            return s;
        }
        ScenarioParams params;
        params.lambda = doc.value("lambda", params.lambda);
        params.R = doc.value("R", params.R);
        params.y_min = doc.value("y_min", params.y_min);
        params.fibers = doc.value("fibers", params.fibers);
        params.points = doc.value("points", params.points);
        params.grid = doc.value("grid", params.grid);
        params.graph_samples = doc.value("samples_count", params.graph_samples);
        params.graph_map = graph_map_from_string(doc.value("map", std::string("identity")));
        if (doc.value("equal_weight", false)) params.sampling = FiberSampling::equal_weight;
        return build_scenario(scenario_kind_from_string(doc.at("kind").get<std::string>()), params);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("scenario JSON: ") + e.what());
    }
}

FiberedScenario load_scenario(const std::string& path) {
    const std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".json") return parse_scenario_json(read_file(path));
    return read_scenario_csv(path);
}

}  // namespace foliation
