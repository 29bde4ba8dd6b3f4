#include "wdep/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace wdep {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

double parse_real(std::string_view text) {
    const std::string s = trim(text);
    if (s == "inf" || s == "+inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double value = 0.0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("not a real number: '" + s + "'");
    return value;
}

long long parse_integer(std::string_view text) {
    const std::string s = trim(text);
    long long value = 0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + s + "'");
    return value;
}

std::vector<double> parse_real_list(std::string_view s) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) out.push_back(parse_real(item));
    return out;
}

std::vector<long long> parse_integer_grid(std::string_view text) {
    const std::string s = trim(text);
    std::vector<long long> out;
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() < 2 || parts.size() > 3)
            throw std::invalid_argument("bad integer range '" + s + "'");
        const long long lo = parse_integer(parts[0]);
        const long long hi = parse_integer(parts[1]);
        const long long step = parts.size() == 3 ? parse_integer(parts[2]) : 1;
        if (step <= 0 || hi < lo) throw std::invalid_argument("bad integer range '" + s + "'");
        for (long long v = lo; v <= hi; v += step) out.push_back(v);
        return out;
    }
    for (const auto& item : split(s, ',')) out.push_back(parse_integer(item));
    return out;
}

std::vector<double> parse_real_grid(std::string_view text) {
    const std::string s = trim(text);
    if (s.find(':') == std::string::npos) return parse_real_list(s);
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw std::invalid_argument("bad real range '" + s + "' (lo:hi:step)");
    const double lo = parse_real(parts[0]);
    const double hi = parse_real(parts[1]);
    const double step = parse_real(parts[2]);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad real range '" + s + "'");
    std::vector<double> out;
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

CallSyntax parse_call(std::string_view text) {
    const std::string s = trim(text);
    CallSyntax call;
    const auto open = s.find('(');
    if (open == std::string::npos) {
        call.name = s;
        return call;
    }
    if (s.back() != ')') throw std::invalid_argument("unbalanced parentheses in '" + s + "'");
    call.name = trim(std::string_view(s).substr(0, open));
    const std::string inner = trim(std::string_view(s).substr(open + 1, s.size() - open - 2));
    if (!inner.empty()) call.args = split(inner, ',');
    return call;
}

std::uint64_t fnv1a64(std::span<const std::byte> bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::byte b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view text) {
    return fnv1a64(std::as_bytes(std::span(text.data(), text.size())));
}

}  // namespace wdep
