#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "quiverloop/quiver.hpp"

namespace quiverloop {

// Ordered product of the edge unitaries along w; backward steps use the
// adjoint. `unitaries` is indexed by edge. The empty word gives the
// identity of size `dim`.
Eigen::MatrixXcd holonomy(const EdgeWord& w, std::span<const Eigen::MatrixXcd> unitaries,
                          Eigen::Index dim);

std::complex<double> trace_holonomy(const EdgeWord& w, std::span<const Eigen::MatrixXcd> unitaries,
                                    Eigen::Index dim);

// max |U U^dagger - 1| entrywise.
double unitarity_defect(const Eigen::MatrixXcd& u);

}  // namespace quiverloop
