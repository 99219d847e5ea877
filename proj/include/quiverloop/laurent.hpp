#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "quiverloop/rational.hpp"

namespace quiverloop {

// Exact polynomial in y and 1/x with big-integer coefficients:
//   sum c_{a,b} y^a x^{-b},  a >= 0, b any integer.
// Moments only ever carry b >= 0; negative b appears when the coupling
// itself multiplies a moment in a loop equation.
class LaurentPolynomial {
 public:
  struct Monomial {
    int y_power;
    int inverse_x_power;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
  };

  LaurentPolynomial() = default;
  // The constant polynomial c.
  static LaurentPolynomial constant(BigInt c);
  static LaurentPolynomial monomial(BigInt c, int y_power, int inverse_x_power);

  const std::map<Monomial, BigInt>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  BigInt coefficient(int y_power, int inverse_x_power) const;

  LaurentPolynomial& operator+=(const LaurentPolynomial& o);
  LaurentPolynomial& operator-=(const LaurentPolynomial& o);
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) {
    return a += b;
  }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) {
    return a -= b;
  }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b);
  LaurentPolynomial operator-() const;

  // Multiplies by x^k.
  LaurentPolynomial times_x_power(int k) const;
  LaurentPolynomial scaled(const BigInt& c) const;

  double evaluate(double x, double y) const;

  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

 private:
  void add(const Monomial& m, const BigInt& c);

  std::map<Monomial, BigInt> terms_;
};

// "4*y/x + 3*y^2/x^2 + 1/x^2 + y/x^3 + 1".
std::string to_string(const LaurentPolynomial& p);

}  // namespace quiverloop
