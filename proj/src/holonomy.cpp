#include "quiverloop/holonomy.hpp"

namespace quiverloop {

Eigen::MatrixXcd holonomy(const EdgeWord& w, std::span<const Eigen::MatrixXcd> unitaries,
                          Eigen::Index dim) {
  if (w.empty()) return Eigen::MatrixXcd::Identity(dim, dim);
  auto factor = [&](const Step& s) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd& u = unitaries[s.edge];
    if (s.orientation == Orientation::kForward) return u;
    return u.adjoint();
  };
  Eigen::MatrixXcd out = factor(w[0]);
  for (std::size_t k = 1; k < w.size(); ++k) {
    const Eigen::MatrixXcd& u = unitaries[w[k].edge];
    if (w[k].orientation == Orientation::kForward) {
      out = out * u;
    } else {
      out = out * u.adjoint();
    }
  }
  return out;
}

std::complex<double> trace_holonomy(const EdgeWord& w, std::span<const Eigen::MatrixXcd> unitaries,
                                    Eigen::Index dim) {
  if (w.empty()) return static_cast<double>(dim);
  if (w.size() == 1) {
    const Eigen::MatrixXcd& u = unitaries[w[0].edge];
    return w[0].orientation == Orientation::kForward ? u.trace() : std::conj(u.trace());
  }
  // Tr(A B) without forming the last product.
  Eigen::MatrixXcd prefix = holonomy(w.subword(0, w.size() - 1), unitaries, dim);
  const Step& last = w[w.size() - 1];
  const Eigen::MatrixXcd& u = unitaries[last.edge];
  if (last.orientation == Orientation::kForward) {
    return (prefix.array() * u.transpose().array()).sum();
  }
  return (prefix.array() * u.conjugate().array()).sum();
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace quiverloop
