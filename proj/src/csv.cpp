#include "csv.hpp"

#include "foliation/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace foliation::detail {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto fields = split(view);
        if (!have_header) {
            for (auto f : fields) table.columns.emplace_back(f);
            have_header = true;
            continue;
        }
        if (fields.size() != table.columns.size())
            throw InvalidInput("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(table.columns.size()) + " fields");
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
                throw InvalidInput("line " + std::to_string(line_no) + ": bad number '" +
                                   std::string(f) + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw InvalidInput("CSV header missing");
    return table;
}

void require_columns(const CsvTable& t, std::initializer_list<const char*> names) {
    bool ok = t.columns.size() == names.size();
    std::size_t i = 0;
    std::string expected;
    for (const char* n : names) {
        if (ok && t.columns[i] != n) ok = false;
        if (!expected.empty()) expected += ',';
        expected += n;
        ++i;
    }
    if (!ok) throw InvalidInput("CSV header must be '" + expected + "'");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace foliation::detail
