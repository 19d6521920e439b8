#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace saw {

// Exact arithmetic used for all counts and probabilities. Floating point
// appears only in explicitly approximate quantities (Gaussian densities,
// fitted exponents, Monte Carlo statistics).
using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace detail {
// Pascal triangle rows 0..256, built once; larger arguments fall back to the
// multiplicative formula.
inline const std::vector<std::vector<BigInt>>& pascal_cache() {
    static const std::vector<std::vector<BigInt>> table = [] {
        constexpr int rows = 257;
        std::vector<std::vector<BigInt>> t(rows);
        for (int i = 0; i < rows; ++i) {
            t[i].assign(i + 1, 1);
            for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
        }
        return t;
    }();
    return table;
}
}  // namespace detail

inline BigInt binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (n < static_cast<std::int64_t>(detail::pascal_cache().size()))
        return detail::pascal_cache()[n][k];
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;  // exact: r is a binomial coefficient after each division
    }
    return r;
}

// num/den as a double, stable for operands far beyond double range.
inline double to_double_ratio(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("to_double_ratio: zero denominator");
    if (num == 0) return 0;
    using boost::multiprecision::msb;
    const bool neg = (num < 0) != (den < 0);
    const BigInt n = abs(num), d = abs(den);
    const std::int64_t shift = 128 - (static_cast<std::int64_t>(msb(n)) - static_cast<std::int64_t>(msb(d)));
    BigInt q = shift >= 0 ? BigInt((n << shift) / d) : BigInt(n / (d << -shift));
    double r = std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
    return neg ? -r : r;
}

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

// Accepts "p", "p/q" and decimal-free signs, e.g. "-3/7".
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational: " + s);
    }
}

}  // namespace saw
