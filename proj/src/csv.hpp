#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace foliation::detail {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Numeric CSV with one header line. Blank lines and lines starting with `#`
/// are skipped.
CsvTable parse_csv(const std::string& text);

void require_columns(const CsvTable& t, std::initializer_list<const char*> names);

std::string slurp(const std::string& path);

}  // namespace foliation::detail
