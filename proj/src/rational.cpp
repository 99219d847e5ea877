#include "quiverloop/rational.hpp"

#include <cctype>

#include "quiverloop/error.hpp"

namespace quiverloop {
namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw Error("malformed number '" + std::string(whole) + "'");
  }
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error("malformed number '" + std::string(whole) + "'");
    }
  }
  return BigInt(std::string(digits));
}

BigInt pow10(long exponent) {
  BigInt result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);

  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), whole);
    BigInt den = parse_integer(text.substr(slash + 1), whole);
    if (den == 0) throw Error("zero denominator in '" + std::string(whole) + "'");
    value = Rational(num, den);
  } else {
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = text.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (exp_text.empty() || exp_text.size() > 6) {
        throw Error("malformed number '" + std::string(whole) + "'");
      }
      exponent = parse_integer(exp_text, whole).convert_to<long>();
      if (exp_negative) exponent = -exponent;
      text = text.substr(0, e);
    }
    std::string_view int_part = text;
    std::string_view frac_part;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      int_part = text.substr(0, dot);
      frac_part = text.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) {
      throw Error("malformed number '" + std::string(whole) + "'");
    }
    BigInt mantissa = int_part.empty() ? BigInt(0) : parse_integer(int_part, whole);
    if (!frac_part.empty()) {
      mantissa = mantissa * pow10(static_cast<long>(frac_part.size())) +
                 parse_integer(frac_part, whole);
      exponent -= static_cast<long>(frac_part.size());
    }
    if (exponent >= 0) {
      value = Rational(mantissa * pow10(exponent));
    } else {
      value = Rational(mantissa, pow10(-exponent));
    }
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace quiverloop
