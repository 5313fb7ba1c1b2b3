#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace isofield::cli {

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

// 17 significant digits.
std::string format_number(double v);
// RFC 4180 quoting when the field contains a comma, quote or line break.
std::string quote_field(const std::string& s);

struct CsvMeta {
    std::string command;
    std::string config;  // canonical JSON of the resolved configuration
    std::optional<std::uint64_t> seed;
};

std::string meta_line(const CsvMeta& meta);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void meta(const CsvMeta& m) { out_ << meta_line(m) << '\n'; }
    void header(const std::vector<std::string>& names);

    template <class... T>
    void row(const T&... v) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(v), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(const std::string& s) { return quote_field(s); }
    static std::string cell(const char* s) { return quote_field(s); }
    static std::string cell(double v) { return format_number(v); }
    template <class I, class = std::enable_if_t<std::is_integral_v<I>>>
    static std::string cell(I v) {
        return std::to_string(v);
    }

    std::ostream& out_;
};

struct CsvTable {
    std::vector<std::string> comments;  // lines starting with '#', without the marker
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column; validation error when absent.
    std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

double parse_double(const std::string& s, const std::string& what);
long long parse_int(const std::string& s, const std::string& what);

// Data rows of a CSV text: every line that is not a comment.
std::vector<std::string> data_lines(const std::string& text);

}  // namespace isofield::cli
