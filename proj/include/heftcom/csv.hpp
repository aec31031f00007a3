#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heftcom {

/// Delimited text with a mandatory header row. Lines starting with `#` are
/// comments.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row

    std::optional<std::size_t> find_column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in, char delimiter = ',');
CsvTable read_csv_file(const std::filesystem::path& path, char delimiter = ',');

std::string csv_field(std::string_view value);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Fixed-point text with `decimals` digits.
std::string format_fixed(double value, int decimals);

double parse_number(std::string_view text);

/// Writes a tidy table: a `#` metadata line, then header and rows.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header, std::string_view metadata = {});

    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
    std::size_t width_;
};

}  // namespace heftcom
