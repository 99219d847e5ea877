#pragma once

#include <iosfwd>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "quiverloop/laurent.hpp"

namespace quiverloop {

// Large-N moments m_n(x, y) of the triangle model, y = m_1, from
//   m_{n+1} = m_{n-1} + (1/x) sum_{l=0}^{n-1} m_l m_{n-l},  m_0 = 1.
// Grows on demand; guarded by a mutex so a shared table can be read from
// several threads once built.
class MomentTable {
 public:
  MomentTable();

  // Builds up to and including n, then returns m_n.
  LaurentPolynomial moment(std::size_t n);
  // Copies of m_0 .. m_{count-1}.
  std::vector<LaurentPolynomial> first(std::size_t count);

 private:
  std::mutex mutex_;
  std::vector<LaurentPolynomial> moments_;
};

// Process-wide memoized table.
LaurentPolynomial moment(std::size_t n);

// Toeplitz matrix (m_{|i-j|}(x, y)). Throws BootstrapError at x = 0,
// where the moments have poles.
Eigen::MatrixXd moment_matrix(std::size_t order, double x, double y);

// det M_1 .. det M_n of the leading principal blocks, from the pivots of
// an unpivoted LDL^T factorisation. Once a pivot drops to |d| <= pivot_floor
// the remaining minors come from an LU determinant.
std::vector<double> leading_principal_minors(const Eigen::MatrixXd& m, double pivot_floor = 1e-10);

struct FeasibilityResult {
  bool feasible = false;
  // Largest n with det M_1 .. det M_n all >= -tol (0 if even M_1 fails).
  std::size_t max_feasible_order = 0;
  std::optional<std::size_t> first_failing_order;
  // Some moment or minor was not finite; reported as infeasible.
  bool overflow = false;
  std::vector<double> minors;
};

FeasibilityResult feasible(double x, double y, std::size_t max_order, double tol = 1e-10);

struct GridSpec {
  double x_min = -3.0;
  double x_max = 3.0;
  std::size_t x_points = 300;
  double y_min = -1.2;
  double y_max = 1.2;
  std::size_t y_points = 300;

  double x_at(std::size_t i) const;
  double y_at(std::size_t j) const;
};

struct FeasibilityCell {
  double x;
  double y;
  bool undefined;  // x == 0
  bool overflow;
  std::size_t max_feasible_order;
  std::optional<std::size_t> first_failing_order;
};

struct FeasibilityMap {
  GridSpec grid;
  std::size_t max_order = 0;
  double tol = 0.0;
  // Row-major: row j is y_at(j), column i is x_at(i).
  std::vector<FeasibilityCell> cells;

  const FeasibilityCell& at(std::size_t i, std::size_t j) const {
    return cells[j * grid.x_points + i];
  }
  // Defined cells whose leading minors up to `order` all pass.
  std::size_t count_feasible(std::size_t order) const;
};

// Rows are split across `threads` workers; the output does not depend on
// the worker count.
FeasibilityMap scan_region(const GridSpec& grid, std::size_t max_order, double tol = 1e-10,
                           unsigned threads = 1);

// x,y,max_feasible_order,first_failing_order. Undefined cells print NA in
// both order columns; an empty last column means no order failed.
void write_csv(std::ostream& out, const FeasibilityMap& map);
void write_svg(std::ostream& out, const FeasibilityMap& map);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

}  // namespace quiverloop
