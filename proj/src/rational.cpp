#include "posec/rational.hpp"

#include <cmath>
#include <cstdint>

#include "posec/error.hpp"

namespace posec {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("not a rational number: '" + std::string(whole) + "'");
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

BigInt pow10(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    BigInt ev = parse_integer(text.substr(e + 1), text);
    if (ev > 1000 || ev < -1000) throw ParseError("exponent out of range in '" + std::string(text) + "'");
    exponent = ev.convert_to<long>();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long scale = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = mantissa.substr(0, dot);
    std::string_view frac_part = mantissa.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
        int_part.size() + frac_part.size() == 0) {
      throw ParseError("not a rational number: '" + std::string(text) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    scale = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(mantissa)) throw ParseError("not a rational number: '" + std::string(text) + "'");
    digits = std::string(mantissa);
  }
  Rational value{BigInt{digits}};
  const long shift = exponent - scale;
  if (shift >= 0) {
    value *= pow10(static_cast<unsigned>(shift));
  } else {
    value /= pow10(static_cast<unsigned>(-shift));
  }
  return negative ? Rational(-value) : value;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InvalidParameter("non-finite value has no rational form");
  int exp = 0;
  const double frac = std::frexp(value, &exp);
  // frac * 2^53 is an exact integer for any double.
  const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  Rational r{BigInt{mant}};
  exp -= 53;
  BigInt two_pow = 1;
  two_pow <<= static_cast<unsigned>(exp >= 0 ? exp : -exp);
  if (exp >= 0) return r * two_pow;
  return r / two_pow;
}

}  // namespace posec
