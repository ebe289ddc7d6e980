#include "gelkit/dataset.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

namespace gelkit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_line(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t comma = line.find(',', pos);
        const std::size_t end = (comma == std::string::npos) ? line.size() : comma;
        const std::string_view field = trim(std::string_view(line).substr(pos, end - pos));
        if (field.empty()) return false;
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || ptr != field.data() + field.size()) return false;
        out.push_back(value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return !out.empty();
}

} // namespace

Dataset::Dataset(Matrix rows) : rows_(std::move(rows)) {
    if (rows_.rows() < 1 || rows_.cols() < 1)
        throw IoError("dataset must contain at least one observation");
    if (!rows_.allFinite())
        throw IoError("dataset contains non-finite entries");
}

Dataset Dataset::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file '" + path + "'");

    std::vector<std::vector<double>> parsed;
    std::vector<double> fields;
    std::string line;
    int line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (!parse_line(line, fields)) {
            if (first_content_line) {
                first_content_line = false; // header row
                continue;
            }
            throw IoError("'" + path + "' line " + std::to_string(line_no) +
                          ": not a comma-separated list of numbers");
        }
        first_content_line = false;
        if (!parsed.empty() && fields.size() != parsed.front().size())
            throw IoError("'" + path + "' line " + std::to_string(line_no) + ": expected " +
                          std::to_string(parsed.front().size()) + " fields, got " +
                          std::to_string(fields.size()));
        parsed.push_back(fields);
    }
    if (parsed.empty()) throw IoError("'" + path + "' contains no observations");

    Matrix rows(static_cast<Eigen::Index>(parsed.size()),
                static_cast<Eigen::Index>(parsed.front().size()));
    for (std::size_t i = 0; i < parsed.size(); ++i)
        for (std::size_t j = 0; j < parsed.front().size(); ++j)
            rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parsed[i][j];
    return Dataset(std::move(rows));
}

} // namespace gelkit
