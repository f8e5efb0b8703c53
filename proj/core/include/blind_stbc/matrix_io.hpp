#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "blind_stbc/linalg.hpp"

namespace blind_stbc {

/// Malformed matrix text. line/column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Shortest-safe decimal form of a double (17 significant digits).
std::string format_real(double v);

/// "re+imj" / "re-imj" with 17 significant digits, e.g. "0.5-1.25j".
std::string format_complex(Complex z);

/// Inverse of format_complex. Returns nullopt on malformed or non-finite input.
std::optional<Complex> parse_complex(std::string_view token);

/// Text matrix format: one row per line, whitespace-separated "re+imj" tokens.
/// Blank lines and lines starting with '#' are ignored; all rows need equal length.
ComplexMatrix read_matrix(std::istream& is);
void write_matrix(std::ostream& os, const ComplexMatrix& m);

}  // namespace blind_stbc
