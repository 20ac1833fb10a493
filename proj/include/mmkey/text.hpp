#pragma once

#include <string>
#include <vector>

namespace mmkey {

// snprintf-backed number formatting (the toolchain lacks <format>).
std::string fmt_f(double value, int decimals);
std::string fmt_g(double value, int significant = 6);
std::string fmt_g17(double value); // round-trips a double exactly

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

} // namespace mmkey
