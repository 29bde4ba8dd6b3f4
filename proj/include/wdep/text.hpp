#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wdep {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Strict numeric parsing: the whole (trimmed) string must be consumed.
double parse_real(std::string_view s);
long long parse_integer(std::string_view s);
std::vector<double> parse_real_list(std::string_view s);

/// Integer grid: "1:30" (inclusive range), "1:30:2" (with step) or "1,2,5".
std::vector<long long> parse_integer_grid(std::string_view s);
/// Real grid: "0:1:0.25" (inclusive when the step lands on the end) or "0.1,0.5".
std::vector<double> parse_real_grid(std::string_view s);

/// "name(arg1,arg2)" or "name".
struct CallSyntax {
    std::string name;
    std::vector<std::string> args;
};
CallSyntax parse_call(std::string_view s);

std::uint64_t fnv1a64(std::span<const std::byte> bytes);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace wdep
