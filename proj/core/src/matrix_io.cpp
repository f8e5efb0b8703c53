#include "blind_stbc/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <vector>

namespace blind_stbc {

namespace {

// std::from_chars rejects a leading '+', so strip it here.
const char* parse_signed(const char* first, const char* last, double& value) {
    bool negative = false;
    if (first != last && (*first == '+' || *first == '-')) {
        negative = *first == '-';
        ++first;
    }
    if (first == last || *first == '+' || *first == '-') return nullptr;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) return nullptr;
    if (negative) value = -value;
    return ptr;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
    return buf;
}

std::optional<Complex> parse_complex(std::string_view token) {
    const char* first = token.data();
    const char* last = first + token.size();
    if (token.size() < 2 || token.back() != 'j') return std::nullopt;
    --last;

    double re = 0.0;
    const char* mid = parse_signed(first, last, re);
    if (mid == nullptr || mid == last || (*mid != '+' && *mid != '-')) return std::nullopt;
    double im = 0.0;
    const char* end = parse_signed(mid, last, im);
    if (end != last) return std::nullopt;
    if (!std::isfinite(re) || !std::isfinite(im)) return std::nullopt;
    return Complex{re, im};
}

ComplexMatrix read_matrix(std::istream& is) {
    std::vector<Complex> entries;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;

        std::size_t count = 0;
        while (pos != std::string::npos) {
            const std::size_t end = line.find_first_of(" \t\r", pos);
            const std::string_view token(line.data() + pos,
                                         (end == std::string::npos ? line.size() : end) - pos);
            const auto z = parse_complex(token);
            if (!z) {
                throw ParseError(line_no, pos + 1,
                                 "malformed complex token '" + std::string(token) + "'");
            }
            entries.push_back(*z);
            ++count;
            pos = end == std::string::npos ? end : line.find_first_not_of(" \t\r", end);
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            throw ParseError(line_no, 1,
                             "row has " + std::to_string(count) + " entries, expected " +
                                 std::to_string(cols));
        }
        ++rows;
    }
    if (rows == 0) {
        throw ParseError(line_no + 1, 1, "no matrix rows found");
    }
    return ComplexMatrix(rows, cols, std::move(entries));
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) os << ' ';
            os << format_complex(m(r, c));
        }
        os << '\n';
    }
}

}  // namespace blind_stbc
