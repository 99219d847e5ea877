#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "quiverloop/action.hpp"
#include "quiverloop/bratteli.hpp"
#include "quiverloop/loop_equations.hpp"
#include "quiverloop/random.hpp"

namespace quiverloop {

// Haar-distributed element of U(n): QR of a standard complex Gaussian
// matrix with the phases of diag(R) moved into Q.
Eigen::MatrixXcd sample_haar(Eigen::Index n, CounterRng& rng);

struct DiracSample {
  // Per edge: the independent Haar blocks u_{e,j}, one per summand of t(e).
  std::vector<std::vector<Eigen::MatrixXcd>> blocks;
  // Per edge: U_e = diag(1_{r_1} (x) u_{e,1}, 1_{r_2} (x) u_{e,2}, ...), N x N.
  std::vector<Eigen::MatrixXcd> unitaries;
};

// Block u_{e,j} of sample i is drawn from the stream keyed by
// (seed, e, j, i).
DiracSample sample_dirac(const BratteliNetwork& net, std::uint64_t seed, std::uint64_t sample_index);

Eigen::MatrixXcd embed_blocks(const BratteliNetwork& net, EdgeIndex e,
                              const std::vector<Eigen::MatrixXcd>& blocks);

// (#Q0 N) x (#Q0 N) matrix whose (v,w) block is the sum of U_e over edges
// v -> w plus the sum of U_e^* over edges w -> v.
Eigen::MatrixXcd assemble_dirac(const BratteliNetwork& net, const DiracSample& sample);

// Tr f(D) from the eigenvalues of the self-adjoint D.
double spectral_action_by_eigenvalues(const Eigen::MatrixXcd& dirac, const ActionSpec& f);

enum class McMethod { kReweight, kMetropolis };

struct McOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  McMethod method = McMethod::kReweight;
  std::size_t burnin = 1000;  // sweeps (metropolis)
  std::size_t thin = 10;      // sweeps between measurements (metropolis)
  unsigned threads = 1;       // reweighting only; results do not depend on it
  // Reweighting fails when the effective sample size drops below this
  // fraction of the sample count.
  double min_effective_fraction = 0.01;
  std::size_t batches = 50;  // batch means for metropolis errors
};

struct EstimatorResult {
  std::complex<double> mean;
  double std_error = 0.0;       // of the real part
  double std_error_imag = 0.0;  // of the imaginary part
  std::size_t samples = 0;
  double effective_samples = 0.0;
  std::optional<double> acceptance;  // metropolis
  std::optional<double> step_size;   // metropolis, after tuning
};

// E[(1/N) Tr hol beta] under exp(-N S(D)) dD. S omits the constant part of
// the table, which cancels in the normalisation. Throws SamplingError when
// the effective sample size or the acceptance rate is out of range.
EstimatorResult estimate_wilson(const BratteliNetwork& net, const PlaquetteTable& table,
                                const EdgeWord& beta, const McOptions& options);

struct ResidualResult {
  EstimatorResult lhs;
  EstimatorResult rhs;
  // lhs - rhs estimated per sample on the shared stream.
  EstimatorResult residual;
};

ResidualResult check_loop_equation(const BratteliNetwork& net, const PlaquetteTable& table,
                                   const LoopEquation& eq, const McOptions& options);

}  // namespace quiverloop
