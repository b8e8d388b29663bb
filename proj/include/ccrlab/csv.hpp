#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ccrlab {

/// 12 significant digits, the precision used by every emitted artifact.
std::string format_number(double value);

std::vector<std::string> split_csv_line(std::string_view line);

double parse_double(std::string_view field);
long long parse_integer(std::string_view field);

} // namespace ccrlab
