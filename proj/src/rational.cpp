#include "resonance/rational.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "resonance/errors.hpp"

namespace resonance {

namespace {

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = s.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) {
      throw ConfigError("malformed exponent in number '" + std::string(text) + "'");
    }
    s = s.substr(0, e);
  }
  boost::multiprecision::cpp_int digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (char ch : s) {
    if (ch == '.') {
      if (seen_point) throw ConfigError("malformed number '" + std::string(text) + "'");
      seen_point = true;
      continue;
    }
    if (ch < '0' || ch > '9') throw ConfigError("malformed number '" + std::string(text) + "'");
    digits = digits * 10 + (ch - '0');
    seen_digit = true;
    if (seen_point) --exponent;
  }
  if (!seen_digit) throw ConfigError("malformed number '" + std::string(text) + "'");
  if (exponent > 400 || exponent < -400) {
    throw ConfigError("exponent out of range in '" + std::string(text) + "'");
  }
  boost::multiprecision::cpp_int scale = boost::multiprecision::pow(
      boost::multiprecision::cpp_int(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  Rational result = exponent < 0 ? Rational(digits, scale) : Rational(digits * scale);
  return negative ? Rational(-result) : result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(text);
}

std::string shortest_decimal(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw ConfigError("non-finite value cannot be made exact");
  return parse_decimal(shortest_decimal(value));
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string to_fraction_string(const Rational& value) {
  auto num = boost::multiprecision::numerator(value);
  auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

}  // namespace resonance
