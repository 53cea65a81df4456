#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace zlab {

// Minimal RFC 4180 writer: CRLF-free (LF) rows, fields quoted when they
// contain a comma, quote or newline. Doubles print with 17 significant
// digits so files round-trip exactly.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    CsvWriter& header(std::initializer_list<std::string_view> cols);
    CsvWriter& field(std::string_view s);
    CsvWriter& field(double x);
    CsvWriter& field(long long x);
    CsvWriter& field(int x) { return field(static_cast<long long>(x)); }
    CsvWriter& field(unsigned long x) { return field(static_cast<long long>(x)); }
    CsvWriter& field(unsigned long long x) { return field(static_cast<long long>(x)); }
    CsvWriter& field(bool b) { return field(std::string_view(b ? "true" : "false")); }
    CsvWriter& field(const char* s) { return field(std::string_view(s)); }
    CsvWriter& field(const std::string& s) { return field(std::string_view(s)); }
    void end_row();

    template <class... Ts>
    void row(const Ts&... xs) {
        (field(xs), ...);
        end_row();
    }

private:
    void sep();
    std::ostream& os_;
    bool first_ = true;
};

std::string csv_quote(std::string_view s);
std::string format_double(double x);

}  // namespace zlab
