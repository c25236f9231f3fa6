#include "polyent/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "polyent/errors.hpp"

namespace polyent {

namespace {

Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ConfigError("not a number: '" + std::string(text) + "'");
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E')
      throw ConfigError("not a number: '" + std::string(text) + "'");
    ++pos;
    const std::string exponent(text.substr(pos));
    if (exponent.empty()) throw ConfigError("bad exponent in '" + std::string(text) + "'");
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exponent, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad exponent in '" + std::string(text) + "'");
    }
    if (used != exponent.size()) throw ConfigError("bad exponent in '" + std::string(text) + "'");
    scale += e;
  }
  mpz_class value(digits, 10);
  if (negative) value = -value;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational result = scale >= 0 ? Rational(value * power) : Rational(value, power);
  result.canonicalize();
  return result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ConfigError("empty rational");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw ConfigError("non-finite value cannot be made rational");
  Rational r(x);  // mpq_set_d is exact
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace polyent
