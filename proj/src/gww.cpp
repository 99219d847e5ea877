#include "quiverloop/gww.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <Eigen/Dense>

#include "quiverloop/bootstrap.hpp"
#include "quiverloop/error.hpp"

namespace quiverloop {
namespace {

namespace mp = boost::multiprecision;

template <unsigned Digits>
using Real = mp::number<mp::mpfr_float_backend<Digits>, mp::et_off>;

constexpr double kMaxArgument = 700.0;

template <class T>
T bessel_series(int q, const T& z) {
  const int order = std::abs(q);
  const T half = z / 2;
  const T half_sq = half * half;
  T term = 1;
  for (int k = 1; k <= order; ++k) term = term * half / k;
  T sum = term;
  const T eps = std::numeric_limits<T>::epsilon();
  const double peak = std::abs(static_cast<double>(half));
  for (int k = 1;; ++k) {
    term = term * half_sq / (static_cast<long>(k) * (k + order));
    sum += term;
    if (k > peak && abs(term) <= eps * abs(sum)) break;
    if (term == 0) break;
  }
  return sum;
}

double bessel_series(int q, double z) {
  const int order = std::abs(q);
  const double half = z / 2;
  const double half_sq = half * half;
  double term = 1.0;
  for (int k = 1; k <= order; ++k) term *= half / k;
  double sum = term;
  for (int k = 1;; ++k) {
    term *= half_sq / (static_cast<double>(k) * (k + order));
    sum += term;
    if ((k > std::abs(half) && std::abs(term) <= 1e-17 * std::abs(sum)) || term == 0.0) break;
  }
  return sum;
}

// Decimal digits lost to cancellation in the Toeplitz determinant grow
// like N(N-1)/2 log10|z|.
unsigned required_digits(int n, double z) {
  const double loss = 0.5 * n * (n - 1) * std::log10(std::max(2.0, std::abs(z)));
  return static_cast<unsigned>(30.0 + loss + 2.0 * n);
}

struct Evaluation {
  double z_value;
  double log_z;
  double y;
  bool analytic;
};

template <class T>
struct Toeplitz {
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix m;
  Matrix dm;  // d/dx
};

template <class T>
Toeplitz<T> build(int n, const T& x) {
  const T z = -2 * x * n;
  std::vector<T> bessel(static_cast<std::size_t>(n + 1));
  for (int q = 0; q <= n; ++q) bessel[static_cast<std::size_t>(q)] = bessel_series(q, z);
  auto at = [&](int q) { return bessel[static_cast<std::size_t>(std::abs(q))]; };
  Toeplitz<T> t;
  t.m.resize(n, n);
  t.dm.resize(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const int q = k - j;
      t.m(k, j) = at(q);
      // dI_q/dz = (I_{q-1} + I_{q+1}) / 2 and dz/dx = -2N.
      t.dm(k, j) = -T(n) * (at(q - 1) + at(q + 1));
    }
  }
  return t;
}

template <class T>
T determinant(const typename Toeplitz<T>::Matrix& m) {
  return Eigen::PartialPivLU<typename Toeplitz<T>::Matrix>(m).determinant();
}

template <unsigned Digits>
Evaluation evaluate(int n, double x_in, DerivativeMethod method) {
  using T = Real<Digits>;
  const T x = x_in;
  Toeplitz<T> t = build<T>(n, x);
  Eigen::PartialPivLU<typename Toeplitz<T>::Matrix> lu(t.m);
  const T z = lu.determinant();
  Evaluation e;
  e.z_value = static_cast<double>(z);
  e.log_z = z > 0 ? static_cast<double>(log(z)) : std::numeric_limits<double>::quiet_NaN();
  const double scale = 2.0 * n * n;

  bool analytic = method != DerivativeMethod::kFiniteDifference;
  if (method == DerivativeMethod::kAuto) {
    // 1-norm condition estimate; Eigen's rcond() needs NumTraits::infinity.
    const T rcond = 1 / (t.m.cwiseAbs().colwise().sum().maxCoeff() *
                         lu.inverse().cwiseAbs().colwise().sum().maxCoeff());
    analytic = rcond > T(1) / mp::pow(T(10), static_cast<int>(Digits) - 20);
  }
  if (analytic) {
    const typename Toeplitz<T>::Matrix solved = lu.solve(t.dm);
    e.y = -static_cast<double>(solved.trace()) / scale + 0.0;  // no "-0" in output
  } else {
    // Central difference with h ~ 10^(-digits/3): truncation and rounding
    // errors both stay far below double precision.
    const T h = mp::pow(T(10), -static_cast<int>(Digits) / 3) * std::max(1.0, std::abs(x_in));
    const T plus = determinant<T>(build<T>(n, x + h).m);
    const T minus = determinant<T>(build<T>(n, x - h).m);
    e.y = -static_cast<double>((plus - minus) / (2 * h * z)) / scale + 0.0;
  }
  e.analytic = analytic;
  return e;
}

Evaluation evaluate_any(int n, double x, DerivativeMethod method) {
  if (n < 1) throw GwwError("matrix size N must be at least 1");
  if (!std::isfinite(x)) throw GwwError("coupling must be finite");
  const double z = 2.0 * std::abs(x) * n;
  if (z > kMaxArgument) {
    throw GwwError("|2 x N| = " + format_double(z) + " exceeds the supported range " +
                   format_double(kMaxArgument));
  }
  const unsigned digits = required_digits(n, z);
  if (digits <= 50) return evaluate<50>(n, x, method);
  if (digits <= 100) return evaluate<100>(n, x, method);
  if (digits <= 200) return evaluate<200>(n, x, method);
  if (digits <= 500) return evaluate<500>(n, x, method);
  throw GwwError("N = " + std::to_string(n) + " at x = " + format_double(x) +
                 " needs more than 500 digits of working precision");
}

}  // namespace

double bessel_i(int q, double z) {
  if (!(std::abs(z) <= kMaxArgument)) {
    throw GwwError("|z| = " + format_double(std::abs(z)) + " is outside the supported range");
  }
  return bessel_series(q, z);
}

double partition_function(int n, double x) {
  Evaluation e = evaluate_any(n, x, DerivativeMethod::kAnalytic);
  if (!std::isfinite(e.z_value)) {
    throw GwwError("Z_N(x) overflows a double at N = " + std::to_string(n) + ", x = " +
                   format_double(x) + "; use log_partition_function");
  }
  return e.z_value;
}

double log_partition_function(int n, double x) {
  return evaluate_any(n, x, DerivativeMethod::kAnalytic).log_z;
}

GwwSample first_moment_sample(int n, double x, DerivativeMethod method) {
  GwwSample s;
  s.x = x;
  try {
    Evaluation e = evaluate_any(n, x, method);
    s.z_value = e.z_value;
    s.log_z = e.log_z;
    s.y = e.y;
    s.method = e.analytic ? DerivativeMethod::kAnalytic : DerivativeMethod::kFiniteDifference;
    if (!(e.z_value > 0) && std::isfinite(e.z_value)) {
      s.ok = false;
      s.note = "Z_N is not positive";
    } else if (!std::isfinite(e.y)) {
      s.ok = false;
      s.note = "derivative is not finite";
    }
  } catch (const GwwError& err) {
    s.ok = false;
    s.note = err.what();
    s.z_value = s.log_z = s.y = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

double first_moment(int n, double x, DerivativeMethod method) {
  return evaluate_any(n, x, method).y;
}

GwwCurve first_moment_curve(int n, std::span<const double> xs, unsigned threads) {
  if (n < 1) throw GwwError("matrix size N must be at least 1");
  GwwCurve curve;
  curve.n = n;
  curve.samples.resize(xs.size());
  threads = std::max(1u, threads);
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < xs.size(); i += threads) {
      curve.samples[i] = first_moment_sample(n, xs[i]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) workers.emplace_back([&work, t] { work(t); });
  }
  return curve;
}

std::vector<double> uniform_grid(double a, double b, std::size_t points) {
  std::vector<double> out;
  if (points == 0) return out;
  if (points == 1 || a == b) return {a};
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return out;
}

void write_csv(std::ostream& out, const GwwCurve& curve) {
  out << "x,Z,y\n";
  for (const auto& s : curve.samples) {
    out << format_double(s.x) << ',' << format_double(s.z_value) << ',' << format_double(s.y)
        << '\n';
  }
}

}  // namespace quiverloop
