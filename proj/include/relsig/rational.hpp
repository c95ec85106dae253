#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace relsig {

/// Exact arbitrary-precision rational. All probability arithmetic in the
/// library goes through this type; floating point appears only in the
/// Monte Carlo layer and in display formatting.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Binomial coefficient C(n, k) as an exact integer; 0 when k is out of range.
inline BigInt binomial(unsigned n, long k) {
    if (k < 0 || static_cast<unsigned>(k) > n) return 0;
    BigInt result = 1;
    for (unsigned i = 0; i < static_cast<unsigned>(k); ++i) {
        result *= n - i;
        result /= i + 1;
    }
    return result;
}

inline BigInt factorial(unsigned n) {
    BigInt result = 1;
    for (unsigned i = 2; i <= n; ++i) result *= i;
    return result;
}

/// Parse "p/q" or "p" into a rational. Throws std::invalid_argument on
/// malformed input or zero denominator.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational: " + text);
    }
}

/// "p/q" in lowest terms, or just "p" for integers.
inline std::string format_rational(const Rational& value) {
    std::string num = numerator(value).str();
    if (denominator(value) == 1) return num;
    return num + "/" + denominator(value).str();
}

}  // namespace relsig
