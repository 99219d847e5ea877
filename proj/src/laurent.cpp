#include "quiverloop/laurent.hpp"

#include <cmath>
#include <sstream>

namespace quiverloop {

LaurentPolynomial LaurentPolynomial::constant(BigInt c) { return monomial(std::move(c), 0, 0); }

LaurentPolynomial LaurentPolynomial::monomial(BigInt c, int y_power, int inverse_x_power) {
  LaurentPolynomial p;
  p.add({y_power, inverse_x_power}, c);
  return p;
}

BigInt LaurentPolynomial::coefficient(int y_power, int inverse_x_power) const {
  auto it = terms_.find({y_power, inverse_x_power});
  return it == terms_.end() ? BigInt(0) : it->second;
}

void LaurentPolynomial::add(const Monomial& m, const BigInt& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  LaurentPolynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      out.add({ma.y_power + mb.y_power, ma.inverse_x_power + mb.inverse_x_power}, ca * cb);
    }
  }
  return out;
}

LaurentPolynomial LaurentPolynomial::operator-() const { return scaled(-1); }

LaurentPolynomial LaurentPolynomial::times_x_power(int k) const {
  LaurentPolynomial out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(Monomial{m.y_power, m.inverse_x_power - k}, c);
  return out;
}

LaurentPolynomial LaurentPolynomial::scaled(const BigInt& c) const {
  LaurentPolynomial out;
  if (c == 0) return out;
  for (const auto& [m, v] : terms_) out.terms_.emplace(m, v * c);
  return out;
}

double LaurentPolynomial::evaluate(double x, double y) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    sum += c.convert_to<double>() * std::pow(y, m.y_power) * std::pow(x, -m.inverse_x_power);
  }
  return sum;
}

std::string to_string(const LaurentPolynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool negative = c < 0;
    const BigInt magnitude = negative ? BigInt(-c) : c;
    out << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
    first = false;

    std::string numerator;
    if (m.y_power > 0) numerator = m.y_power == 1 ? "y" : "y^" + std::to_string(m.y_power);
    if (m.inverse_x_power < 0) {
      const int k = -m.inverse_x_power;
      std::string xs = k == 1 ? "x" : "x^" + std::to_string(k);
      numerator = numerator.empty() ? xs : numerator + "*" + xs;
    }
    if (numerator.empty()) {
      out << magnitude.str();
    } else if (magnitude == 1) {
      out << numerator;
    } else {
      out << magnitude.str() << "*" << numerator;
    }
    if (m.inverse_x_power > 0) {
      out << "/x";
      if (m.inverse_x_power > 1) out << "^" << m.inverse_x_power;
    }
  }
  return out.str();
}

}  // namespace quiverloop
