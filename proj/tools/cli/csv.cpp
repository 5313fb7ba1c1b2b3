#include "csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "isofield/error.hpp"

namespace isofield::cli {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // no negative zero in output
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string meta_line(const CsvMeta& m) {
    std::string s = "# isofield command=" + m.command + " config_hash=" + hex64(fnv1a64(m.config)) +
                    " seed=" + (m.seed ? std::to_string(*m.seed) : std::string("none"));
    return s + " config=" + m.config;
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << quote_field(names[i]);
    out_ << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    fail_validation("CSV: missing column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::size_t i = 0;
    const std::size_t n = text.size();
    bool have_header = false;
    while (i < n) {
        if (text[i] == '#') {
            const std::size_t e = text.find('\n', i);
            std::string line = text.substr(i + 1, e == std::string::npos ? std::string::npos : e - i - 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            t.comments.push_back(line);
            i = (e == std::string::npos) ? n : e + 1;
            continue;
        }
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false, done = false;
        while (i < n && !done) {
            const char c = text[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < n && text[i + 1] == '"') {
                        cur += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    cur += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(cur));
                cur.clear();
            } else if (c == '\n' || c == '\r') {
                if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
                done = true;
            } else {
                cur += c;
            }
            ++i;
        }
        if (quoted) fail_validation("CSV: unterminated quoted field");
        fields.push_back(std::move(cur));
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
        } else {
            if (fields.size() != t.header.size())
                fail_validation("CSV: row " + std::to_string(t.rows.size() + 1) + " has " + std::to_string(fields.size()) +
                                " fields, header has " + std::to_string(t.header.size()));
            t.rows.push_back(std::move(fields));
        }
    }
    if (!have_header) fail_validation("CSV: no header row");
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_validation("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

double parse_double(const std::string& s, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || (errno == ERANGE && std::isinf(v)))
        fail_validation(what + ": '" + s + "' is not a number");
    return v;
}

long long parse_int(const std::string& s, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        fail_validation(what + ": '" + s + "' is not an integer");
    return v;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out.push_back(line);
    return out;
}

}  // namespace isofield::cli
