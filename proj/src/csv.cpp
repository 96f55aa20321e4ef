#include "optocirc/csv.hpp"

#include "optocirc/error.hpp"

#include <cstdio>
#include <fstream>

namespace optocirc {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

struct CellText {
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return quote(s); }
};

} // namespace

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string render_csv(const Table& t) {
    std::string out;
    for (std::size_t k = 0; k < t.header.size(); ++k) {
        if (k) out += ',';
        out += quote(t.header[k]);
    }
    out += '\n';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (t.rows[r].size() != t.header.size())
            throw DomainError("table row " + std::to_string(r) + " has " + std::to_string(t.rows[r].size())
                              + " cells, header has " + std::to_string(t.header.size()));
        for (std::size_t k = 0; k < t.rows[r].size(); ++k) {
            if (k) out += ',';
            out += std::visit(CellText{}, t.rows[r][k]);
        }
        out += '\n';
    }
    return out;
}

void write_table(const Table& t, const std::string& path) {
    const std::string text = render_csv(t);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace optocirc
