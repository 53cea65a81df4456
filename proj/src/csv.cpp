#include "zlab/csv.hpp"

#include <cmath>
#include <cstdio>

namespace zlab {

std::string csv_quote(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void CsvWriter::sep() {
    if (!first_) os_ << ',';
    first_ = false;
}

CsvWriter& CsvWriter::header(std::initializer_list<std::string_view> cols) {
    for (auto c : cols) field(c);
    end_row();
    return *this;
}

CsvWriter& CsvWriter::field(std::string_view s) {
    sep();
    os_ << csv_quote(s);
    return *this;
}

CsvWriter& CsvWriter::field(double x) {
    sep();
    os_ << format_double(x);
    return *this;
}

CsvWriter& CsvWriter::field(long long x) {
    sep();
    os_ << x;
    return *this;
}

void CsvWriter::end_row() {
    os_ << '\n';
    first_ = true;
}

}  // namespace zlab
