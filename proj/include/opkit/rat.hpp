#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace opkit {

// Exact arbitrary-precision scalars. cpp_rational keeps the canonical form
// we rely on everywhere: gcd(num, den) = 1, den >= 1, zero stored as 0/1.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

// Text form used in every file format: "p/q", or just "p" when q = 1.
// p and q are decimal integers, q > 0.
inline std::string rat_to_string(const Rat& q) {
    std::string s = rat_num(q).str();
    if (rat_den(q) != 1) {
        s += '/';
        s += rat_den(q).str();
    }
    return s;
}

inline bool is_decimal_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

// Parses "p" or "p/q" with q > 0. Reduction happens on construction.
inline Rat parse_rat(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!is_decimal_integer(text))
            throw std::invalid_argument("invalid rational literal '" + std::string(text) + "'");
        return Rat(Int(std::string(text)));
    }
    const std::string_view p = text.substr(0, slash);
    const std::string_view q = text.substr(slash + 1);
    if (!is_decimal_integer(p) || !is_decimal_integer(q))
        throw std::invalid_argument("invalid rational literal '" + std::string(text) + "'");
    Int den{std::string(q)};
    if (den <= 0)
        throw std::invalid_argument("rational literal needs a positive denominator: '" +
                                    std::string(text) + "'");
    return Rat(Int(std::string(p)), den);
}

} // namespace opkit
