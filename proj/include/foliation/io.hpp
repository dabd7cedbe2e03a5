#pragma once

#include "foliation/elliptic.hpp"
#include "foliation/energy.hpp"

#include <string>

namespace foliation {

inline constexpr const char* kToolName = "foliation-energy";
inline constexpr const char* kVersion = "0.1.0";

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

/// `# foliation-energy <version> <config>` followed by a newline.
std::string header_comment(const std::string& config);

/// Report as JSON with keys in a fixed order. `config` is echoed under
/// "comment".
std::string format_report_json(const EnergyReport& report, const std::string& config);

/// Writes one measure CSV for the base and one per conditional into `dir`.
void write_disintegration(const Disintegration& d, const std::string& dir,
                          const std::string& config);

}  // namespace foliation

namespace foliation {

/// Scenario from a `.csv` sample file or a `.json` document. JSON holds either
/// generator settings (`{"kind": "ellipse", "lambda": 1.5, ...}`) or explicit
/// samples (`{"samples": [[x1, x2, label, w], ...]}`).
FiberedScenario load_scenario(const std::string& path);
FiberedScenario parse_scenario_json(const std::string& text);

}  // namespace foliation
