// Exact integer and rational arithmetic used throughout treepoly.
//
// All probabilities, densities and LP pivots are carried as reduced
// fractions. GMP does the heavy lifting; this header only fixes the
// vocabulary and the textual `p/q` form that crosses every I/O boundary.

#ifndef TREEPOLY_RATIONAL_HPP
#define TREEPOLY_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace treepoly {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using RationalVector = std::vector<Rational>;

/// `p/q` in lowest terms; integers print without a denominator.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

/// Parses `p`, `-p`, `p/q` or a terminating decimal such as `0.125`.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Rounds to `digits` places after the decimal point (half away from zero).
std::string to_decimal(const Rational& value, int digits);

BigInt binomial(std::int64_t n, std::int64_t k);
BigInt factorial(std::int64_t n);
/// (2n-3)!! for n >= 2, the number of leaf-labelled rooted binary trees.
BigInt double_factorial_odd(std::int64_t n);
BigInt pow2(unsigned exponent);

Rational pow(const Rational& base, unsigned exponent);

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  return Rational(num, den);
}

}  // namespace treepoly

#endif  // TREEPOLY_RATIONAL_HPP
