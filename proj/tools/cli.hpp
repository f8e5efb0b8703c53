#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

namespace blind_stbc::cli {

/// Parses a dB grid "start:step:stop", a comma list "a,b,c", or a single value.
std::vector<double> parse_grid(std::string_view text);

/// Same grammar as parse_grid but every value must be a positive integer.
std::vector<std::size_t> parse_count_grid(std::string_view text);

/// Entry point shared by the executable and the tests. Returns the process exit code;
/// diagnostics go to `err` as a single line.
int parse_and_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blind_stbc::cli
