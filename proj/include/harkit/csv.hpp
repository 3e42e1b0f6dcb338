#pragma once

// Minimal CSV helpers for the canonical file formats: comma separated, UTF-8,
// '.' decimal point, LF line endings, no quoting (values are numbers and
// snake_case tokens).

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace harkit::csv {

std::vector<std::string> split(std::string_view line);

std::string join(const std::vector<std::string>& fields);

// Fixed formatting for dataset values: 6 significant decimal digits.
std::string format_value(double v);

double parse_double(std::string_view field, const std::string& context);
long long parse_int(std::string_view field, const std::string& context);

// Line-oriented reader that tracks 1-based line numbers for error reporting.
class LineReader {
public:
    explicit LineReader(const std::string& path);
    // Returns false at end of file. Strips a trailing '\r' if present.
    bool next(std::string& line);
    long line_number() const { return line_no_; }
    const std::string& path() const { return path_; }

private:
    std::ifstream in_;
    std::string path_;
    long line_no_ = 0;
};

}  // namespace harkit::csv
