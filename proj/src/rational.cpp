#include "treepoly/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace treepoly {

std::string to_string(const BigInt& value) { return value.str(); }

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  BigInt value{std::string(s)};
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && den_text.front() == '-') {
      throw std::invalid_argument("negative denominator in '" + std::string(text) + "'");
    }
    BigInt den = parse_integer(den_text, text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if ((!int_part.empty() && !all_digits(int_part)) || !all_digits(frac_part)) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    BigInt whole = int_part.empty() ? BigInt(0) : BigInt(std::string(int_part));
    BigInt frac{std::string(frac_part)};
    BigInt scale = pow(BigInt(10), static_cast<unsigned>(frac_part.size()));
    Rational value(whole * scale + frac, scale);
    return negative ? Rational(-value) : value;
  }

  return Rational(parse_integer(text, text));
}

std::string to_decimal(const Rational& value, int digits) {
  if (digits < 0) digits = 0;
  const bool negative = value < 0;
  const Rational magnitude = negative ? Rational(-value) : value;
  const BigInt scale = pow(BigInt(10), static_cast<unsigned>(digits));
  const Rational scaled = magnitude * scale;
  const BigInt num = boost::multiprecision::numerator(scaled);
  const BigInt den = boost::multiprecision::denominator(scaled);
  BigInt rounded = num / den;
  if ((num % den) * 2 >= den) rounded += 1;

  std::string body = rounded.str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), 1, '.');
  }
  if (negative && rounded != 0) body.insert(0, 1, '-');
  return body;
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt factorial(std::int64_t n) {
  BigInt result = 1;
  for (std::int64_t i = 2; i <= n; ++i) result *= i;
  return result;
}

BigInt double_factorial_odd(std::int64_t n) {
  BigInt result = 1;
  for (std::int64_t i = 3; i <= 2 * n - 3; i += 2) result *= i;
  return result;
}

BigInt pow2(unsigned exponent) { return BigInt(1) << exponent; }

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

}  // namespace treepoly
