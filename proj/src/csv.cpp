#include "heftcom/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <boost/tokenizer.hpp>

#include "heftcom/error.hpp"

namespace heftcom {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter, std::size_t line_number) {
    using Separator = boost::escaped_list_separator<char>;
    // backslash escapes are disabled; quotes follow RFC 4180 doubling
    boost::tokenizer<Separator> tokens(line, Separator('\0', delimiter, '"'));
    std::vector<std::string> fields;
    try {
        for (const auto& t : tokens) {
            fields.push_back(t);
        }
    } catch (const boost::escaped_list_error& e) {
        throw LoadError("line " + std::to_string(line_number) + ": " + e.what());
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

CsvTable read_csv(std::istream& in, char delimiter) {
    CsvTable table;
    std::string line;
    std::size_t line_number = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_number;
        if (line_number == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto fields = split_line(line, delimiter, line_number);
        for (auto& f : fields) {
            f = std::string(trim(f));
        }
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw LoadError("line " + std::to_string(line_number) + ": expected " + std::to_string(table.header.size()) +
                            " fields, found " + std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_number);
    }
    return table;
}

CsvTable read_csv_file(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path);
    if (!in) {
        throw LoadError("cannot open " + path.string());
    }
    return read_csv(in, delimiter);
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(value);
    }
    std::string out = "\"";
    for (const char c : value) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "NaN";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) {
        return format_number(value);
    }
    return std::string(buf, ptr);
}

double parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw InvalidInputError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header, std::string_view metadata)
    : out_(out), width_(header.size()) {
    if (!metadata.empty()) {
        out_ << "# " << metadata << '\n';
    }
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) {
        throw InvalidInputError("row width " + std::to_string(fields.size()) + " does not match header width " +
                                std::to_string(width_));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out_ << ',';
        }
        out_ << csv_field(fields[i]);
    }
    out_ << '\n';
}

}  // namespace heftcom
