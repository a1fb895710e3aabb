#include "probint/rational.hpp"

#include <cctype>

#include "probint/error.hpp"

namespace probint {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Boost reads a leading 0 as an octal prefix.
Integer decimal_integer(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Integer{std::string(digits.empty() ? "0" : digits)};
}

[[noreturn]] void bad_number(std::string_view text) {
  throw ValidationError("malformed probability '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    Integer d = decimal_integer(den);
    if (d == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    value = Rational(decimal_integer(num), d);
  } else {
    auto dot = body.find('.');
    std::string_view whole = body.substr(0, dot);
    std::string_view frac =
        dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
    if (whole.empty() && frac.empty()) bad_number(text);
    if (!whole.empty() && !all_digits(whole)) bad_number(text);
    if (dot != std::string_view::npos && !all_digits(frac)) bad_number(text);
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer digits = decimal_integer(std::string(whole) + std::string(frac));
    value = Rational(digits, scale);
  }
  return negative ? Rational(-value) : value;
}

std::string to_fraction_string(const Rational& value) {
  return value.str();
}

std::string to_decimal_string(const Rational& value, int places) {
  Integer num = boost::multiprecision::numerator(value);
  Integer den = boost::multiprecision::denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  Integer scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  Integer scaled = (num * scale * 2 + den) / (den * 2);
  Integer whole = scaled / scale;
  Integer frac = scaled % scale;
  std::string out = negative && scaled != 0 ? "-" : "";
  out += whole.str();
  if (places > 0) {
    std::string f = frac.str();
    out += '.';
    out += std::string(static_cast<std::size_t>(places) - f.size(), '0');
    out += f;
  }
  return out;
}

}  // namespace probint
