#include "quiverloop/bootstrap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <thread>

#include "quiverloop/error.hpp"

namespace quiverloop {

MomentTable::MomentTable() {
  moments_.push_back(LaurentPolynomial::constant(1));
  moments_.push_back(LaurentPolynomial::monomial(1, 1, 0));
}

LaurentPolynomial MomentTable::moment(std::size_t n) {
  std::lock_guard lock(mutex_);
  while (moments_.size() <= n) {
    const std::size_t k = moments_.size() - 1;  // build m_{k+1}
    LaurentPolynomial sum;
    for (std::size_t l = 0; l < k; ++l) sum += moments_[l] * moments_[k - l];
    moments_.push_back(moments_[k - 1] + sum.times_x_power(-1));
  }
  return moments_[n];
}

std::vector<LaurentPolynomial> MomentTable::first(std::size_t count) {
  if (count > 0) moment(count - 1);
  std::lock_guard lock(mutex_);
  return {moments_.begin(), moments_.begin() + static_cast<std::ptrdiff_t>(count)};
}

LaurentPolynomial moment(std::size_t n) {
  static MomentTable table;
  return table.moment(n);
}

namespace {

Eigen::MatrixXd toeplitz(const std::vector<double>& m, std::size_t order) {
  const auto n = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m[static_cast<std::size_t>(std::abs(i - j))];
  }
  return out;
}

std::vector<LaurentPolynomial> shared_moments(std::size_t count) {
  static MomentTable table;
  return table.first(count);
}

FeasibilityResult classify(const std::vector<double>& minors, double tol, bool overflow) {
  FeasibilityResult r;
  r.minors = minors;
  r.overflow = overflow;
  if (overflow) {
    r.first_failing_order = 1;
    for (std::size_t k = 0; k < minors.size(); ++k) {
      if (!std::isfinite(minors[k]) || minors[k] < -tol) break;
      r.max_feasible_order = k + 1;
      r.first_failing_order = k + 2;
    }
    return r;
  }
  for (std::size_t k = 0; k < minors.size(); ++k) {
    if (!(minors[k] >= -tol)) {
      r.first_failing_order = k + 1;
      return r;
    }
    r.max_feasible_order = k + 1;
  }
  r.feasible = true;
  return r;
}

FeasibilityResult feasible_with(const std::vector<LaurentPolynomial>& moments, double x, double y,
                                std::size_t max_order, double tol) {
  std::vector<double> values(max_order);
  bool finite = true;
  for (std::size_t k = 0; k < max_order; ++k) {
    values[k] = moments[k].evaluate(x, y);
    finite = finite && std::isfinite(values[k]);
  }
  if (!finite) return classify({}, tol, true);
  std::vector<double> minors = leading_principal_minors(toeplitz(values, max_order), tol);
  const bool minors_finite =
      std::all_of(minors.begin(), minors.end(), [](double d) { return std::isfinite(d); });
  return classify(minors, tol, !minors_finite);
}

}  // namespace

Eigen::MatrixXd moment_matrix(std::size_t order, double x, double y) {
  if (x == 0.0) throw BootstrapError("moments are undefined at x = 0");
  if (order == 0) throw BootstrapError("moment matrix order must be at least 1");
  auto moments = shared_moments(order);
  std::vector<double> values(order);
  for (std::size_t k = 0; k < order; ++k) values[k] = moments[k].evaluate(x, y);
  return toeplitz(values, order);
}

std::vector<double> leading_principal_minors(const Eigen::MatrixXd& m, double pivot_floor) {
  const Eigen::Index n = m.rows();
  std::vector<double> minors(static_cast<std::size_t>(n));
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  double det = 1.0;
  Eigen::Index k = 0;
  for (; k < n; ++k) {
    double pivot = m(k, k);
    for (Eigen::Index j = 0; j < k; ++j) pivot -= l(k, j) * l(k, j) * d(j);
    d(k) = pivot;
    det *= pivot;
    minors[static_cast<std::size_t>(k)] = det;
    if (std::abs(pivot) <= pivot_floor) {
      ++k;
      break;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      double s = m(i, k);
      for (Eigen::Index j = 0; j < k; ++j) s -= l(i, j) * l(k, j) * d(j);
      l(i, k) = s / pivot;
    }
  }
  for (; k < n; ++k) {
    minors[static_cast<std::size_t>(k)] = m.topLeftCorner(k + 1, k + 1).fullPivLu().determinant();
  }
  return minors;
}

FeasibilityResult feasible(double x, double y, std::size_t max_order, double tol) {
  if (x == 0.0) throw BootstrapError("moments are undefined at x = 0");
  if (max_order == 0) throw BootstrapError("max order must be at least 1");
  if (tol < 0) throw BootstrapError("tolerance must be nonnegative");
  return feasible_with(shared_moments(max_order), x, y, max_order, tol);
}

double GridSpec::x_at(std::size_t i) const {
  if (x_points <= 1) return x_min;
  return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(x_points - 1);
}

double GridSpec::y_at(std::size_t j) const {
  if (y_points <= 1) return y_min;
  return y_min + (y_max - y_min) * static_cast<double>(j) / static_cast<double>(y_points - 1);
}

std::size_t FeasibilityMap::count_feasible(std::size_t order) const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [&](const auto& c) {
    return !c.undefined && c.max_feasible_order >= order;
  }));
}

FeasibilityMap scan_region(const GridSpec& grid, std::size_t max_order, double tol,
                           unsigned threads) {
  if (max_order == 0) throw BootstrapError("max order must be at least 1");
  if (tol < 0) throw BootstrapError("tolerance must be nonnegative");
  if (grid.x_points == 0 || grid.y_points == 0) throw BootstrapError("empty grid");
  FeasibilityMap map;
  map.grid = grid;
  map.max_order = max_order;
  map.tol = tol;
  map.cells.resize(grid.x_points * grid.y_points);
  const auto moments = shared_moments(max_order);

  auto fill_row = [&](std::size_t j) {
    const double y = grid.y_at(j);
    for (std::size_t i = 0; i < grid.x_points; ++i) {
      const double x = grid.x_at(i);
      FeasibilityCell& cell = map.cells[j * grid.x_points + i];
      cell.x = x;
      cell.y = y;
      cell.undefined = x == 0.0;
      if (cell.undefined) {
        cell.overflow = false;
        cell.max_feasible_order = 0;
        cell.first_failing_order.reset();
        continue;
      }
      FeasibilityResult r = feasible_with(moments, x, y, max_order, tol);
      cell.overflow = r.overflow;
      cell.max_feasible_order = r.max_feasible_order;
      cell.first_failing_order = r.first_failing_order;
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1) {
    for (std::size_t j = 0; j < grid.y_points; ++j) fill_row(j);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t j = t; j < grid.y_points; j += threads) fill_row(j);
      });
    }
  }
  return map;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_csv(std::ostream& out, const FeasibilityMap& map) {
  out << "x,y,max_feasible_order,first_failing_order\n";
  for (const auto& c : map.cells) {
    out << format_double(c.x) << ',' << format_double(c.y) << ',';
    if (c.undefined) {
      out << "NA,NA\n";
      continue;
    }
    out << c.max_feasible_order << ',';
    if (c.first_failing_order) out << *c.first_failing_order;
    out << '\n';
  }
}

void write_svg(std::ostream& out, const FeasibilityMap& map) {
  // Cells that pass every order are white, the rest are shaded by how
  // early they fail; undefined cells are gray.
  static const char* const kPalette[] = {"#3b0f70", "#8c2981", "#de4968", "#fe9f6d",
                                         "#fcfdbf", "#9ecae1", "#4292c6", "#08519c"};
  const std::size_t nx = map.grid.x_points, ny = map.grid.y_points;
  const int cell = 2;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << nx * cell << "\" height=\""
      << ny * cell << "\" shape-rendering=\"crispEdges\">\n";
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const auto& c = map.at(i, j);
      std::string fill;
      if (c.undefined) {
        fill = "#808080";
      } else if (!c.first_failing_order) {
        fill = "#ffffff";
      } else {
        fill = kPalette[std::min<std::size_t>(*c.first_failing_order - 1, 7)];
      }
      // y grows upwards in the picture.
      out << "<rect x=\"" << i * cell << "\" y=\"" << (ny - 1 - j) * cell << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace quiverloop
