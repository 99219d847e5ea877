#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace quiverloop {

// Modified Bessel function of the first kind, I_q(z), by its power series.
// Throws GwwError for |z| > 700.
double bessel_i(int q, double z);

// Z_N(x) = integral over U(N) of exp(-N x Tr(U + U^*)) dU
//        = det[ I_{k-m}(-2 x N) ]_{k,m = 1..N}.
// The determinant is formed in extended precision: for large |x| N it is
// a massive cancellation between entries of size e^{2|x|N}. Throws
// GwwError if the value does not fit in a double.
double partition_function(int n, double x);
double log_partition_function(int n, double x);

enum class DerivativeMethod { kAuto, kAnalytic, kFiniteDifference };

struct GwwSample {
  double x = 0.0;
  double z_value = 0.0;  // Z_N(x); +inf when it exceeds the double range
  double log_z = 0.0;
  double y = 0.0;        // y_N(x) = E[(1/N) Tr U]
  bool ok = true;
  DerivativeMethod method = DerivativeMethod::kAnalytic;
  std::string note;
};

struct GwwCurve {
  int n = 1;
  std::vector<GwwSample> samples;
};

// y_N(x) = -(1 / (2 N^2 Z_N)) dZ_N/dx. kAuto uses dZ = Z tr(M^{-1} dM)
// with dI_q/dz = (I_{q-1} + I_{q+1}) / 2, and switches to a central
// difference with step 1e-5 max(1, |x|) if the Toeplitz matrix is badly
// conditioned at the working precision.
GwwSample first_moment_sample(int n, double x, DerivativeMethod method = DerivativeMethod::kAuto);
double first_moment(int n, double x, DerivativeMethod method = DerivativeMethod::kAuto);

GwwCurve first_moment_curve(int n, std::span<const double> xs, unsigned threads = 1);

// `points` evenly spaced values from a to b inclusive. A degenerate range
// (a == b) or points == 1 gives the single value a.
std::vector<double> uniform_grid(double a, double b, std::size_t points);

// x,Z,y
void write_csv(std::ostream& out, const GwwCurve& curve);

}  // namespace quiverloop
