#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "quiverloop/quiver.hpp"
#include "quiverloop/rational.hpp"

namespace quiverloop {

// Polynomial f(t) = f_0 + f_1 t + ... + f_d t^d. Trailing zeros are
// dropped so that degree() is the index of the last nonzero coefficient.
class ActionSpec {
 public:
  ActionSpec() = default;
  explicit ActionSpec(std::vector<Rational> coefficients);

  std::size_t degree() const { return f_.empty() ? 0 : f_.size() - 1; }
  Rational coefficient(std::size_t k) const { return k < f_.size() ? f_[k] : Rational(0); }
  const std::vector<Rational>& coefficients() const { return f_; }

 private:
  std::vector<Rational> f_;
};

// Tr_H f(D) regrouped by traced-loop class:
//   Tr_H f(D) = N * constant() + sum_gamma g_gamma Tr hol gamma.
struct PlaquetteTable {
  // Nonzero coefficients only; keys are nonempty cyclic words.
  std::map<CyclicWord, Rational> entries;
  // Identity contributions in units of N (= Tr 1 on one vertex space),
  // split by the basepoint vertex of the walks that produced them.
  std::vector<Rational> constant_by_vertex;

  Rational constant() const;
  Rational coefficient(const CyclicWord& gamma) const;
};

// Enumerates closed walks of every length k <= deg f at every vertex,
// cyclically reduces each one and adds f_k to its class.
PlaquetteTable expand_action(const Quiver& q, const ActionSpec& f);

// Complex value of N * constant + sum g Tr hol gamma. Throws ActionError
// on a missing edge or a matrix that is not dim x dim unitary within 1e-8.
std::complex<double> evaluate_action_complex(const PlaquetteTable& table,
                                             std::span<const Eigen::MatrixXcd> unitaries,
                                             std::int64_t dim);

// Real part of the above. The table of a real polynomial is closed under
// reversal, so the imaginary part is rounding noise.
double evaluate_action(const PlaquetteTable& table, std::span<const Eigen::MatrixXcd> unitaries,
                       std::int64_t dim);

}  // namespace quiverloop
