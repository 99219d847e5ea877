#include "quiverloop/haar_mc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include "quiverloop/bootstrap.hpp"
#include "quiverloop/error.hpp"
#include "quiverloop/holonomy.hpp"

namespace quiverloop {

using Eigen::Index;
using Eigen::MatrixXcd;

namespace {

constexpr std::uint64_t kTagHaar = 0;
constexpr std::uint64_t kTagInitial = 1;
constexpr std::uint64_t kTagProposal = 2;

// The Box-Muller transform is written out so that streams are identical
// across standard libraries.
double standard_normal(CounterRng& rng) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

MatrixXcd complex_gaussian(Index n, CounterRng& rng) {
  MatrixXcd z(n, n);
  const double s = std::sqrt(0.5);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      z(i, j) = {s * re, s * im};
    }
  }
  return z;
}

// Hermitian matrix with GUE-distributed entries.
MatrixXcd random_hermitian(Index n, CounterRng& rng) {
  MatrixXcd z = complex_gaussian(n, rng);
  return (z + z.adjoint()) * std::sqrt(0.5);
}

// exp(i eps H) through the eigendecomposition of H.
MatrixXcd unitary_exponential(const MatrixXcd& h, double eps) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  const Eigen::VectorXcd phases =
      (std::complex<double>(0.0, eps) * es.eigenvalues().cast<std::complex<double>>())
          .array()
          .exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<std::vector<MatrixXcd>> draw_blocks(const BratteliNetwork& net, std::uint64_t seed,
                                                std::uint64_t tag, std::uint64_t index) {
  const Quiver& q = net.quiver();
  std::vector<std::vector<MatrixXcd>> blocks(q.edges().size());
  for (EdgeIndex e = 0; e < q.edges().size(); ++e) {
    const auto& sizes = net.block_sizes(q.edges()[e].target);
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      CounterRng rng{seed, tag, static_cast<std::uint64_t>(e), j, index};
      blocks[e].push_back(sample_haar(sizes[j], rng));
    }
  }
  return blocks;
}

// The plaquette part of the action with double couplings. The constant
// N * const cancels between numerator and normalisation.
struct CompiledAction {
  std::vector<std::pair<double, EdgeWord>> terms;
  Index dim = 0;

  double operator()(std::span<const MatrixXcd> unitaries) const {
    double s = 0.0;
    for (const auto& [g, w] : terms) s += g * trace_holonomy(w, unitaries, dim).real();
    return s;
  }
};

CompiledAction compile(const BratteliNetwork& net, const PlaquetteTable& table) {
  CompiledAction a;
  a.dim = net.dimension();
  for (const auto& [gamma, g] : table.entries) {
    for (const Step& s : gamma.word().steps()) {
      if (s.edge >= net.quiver().edges().size()) {
        throw SamplingError("plaquette table refers to an edge outside the network");
      }
    }
    a.terms.emplace_back(to_double(g), gamma.word());
  }
  return a;
}

// Observables are functions of the normalised traces of a fixed word list.
struct ObservableSet {
  std::vector<EdgeWord> words;
  std::size_t outputs = 1;
  std::function<void(std::span<const std::complex<double>> traces,
                     std::span<std::complex<double>> out)>
      combine;
};

struct Stream {
  std::vector<double> log_weight;                       // per sample
  std::vector<std::vector<std::complex<double>>> values;  // per output, per sample
  std::optional<double> acceptance;
  std::optional<double> step_size;
};

void measure(const ObservableSet& obs, std::span<const MatrixXcd> unitaries, Index dim,
             std::vector<std::complex<double>>& traces, std::vector<std::complex<double>>& out) {
  const double inv = 1.0 / static_cast<double>(dim);
  for (std::size_t k = 0; k < obs.words.size(); ++k) {
    traces[k] = trace_holonomy(obs.words[k], unitaries, dim) * inv;
  }
  obs.combine(traces, out);
}

Stream run_reweight(const BratteliNetwork& net, const CompiledAction& action,
                    const ObservableSet& obs, const McOptions& opt) {
  const std::size_t n = opt.samples;
  const double big_n = static_cast<double>(net.dimension());
  Stream st;
  st.log_weight.resize(n);
  st.values.assign(obs.outputs, std::vector<std::complex<double>>(n));

  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  auto work = [&](std::size_t first_chunk, std::size_t stride) {
    std::vector<std::complex<double>> traces(obs.words.size()), out(obs.outputs);
    for (std::size_t c = first_chunk; c < chunks; c += stride) {
      for (std::size_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) {
        DiracSample s = sample_dirac(net, opt.seed, i);
        st.log_weight[i] = -big_n * action(s.unitaries);
        measure(obs, s.unitaries, net.dimension(), traces, out);
        for (std::size_t k = 0; k < obs.outputs; ++k) st.values[k][i] = out[k];
      }
    }
  };
  const unsigned threads = std::max(1u, opt.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) workers.emplace_back([&work, t, threads] { work(t, threads); });
  }
  return st;
}

Stream run_metropolis(const BratteliNetwork& net, const CompiledAction& action,
                      const ObservableSet& obs, const McOptions& opt) {
  if (opt.thin == 0) throw SamplingError("thinning interval must be at least 1");
  const Quiver& q = net.quiver();
  const double big_n = static_cast<double>(net.dimension());
  auto blocks = draw_blocks(net, opt.seed, kTagInitial, 0);
  std::vector<MatrixXcd> unitaries;
  for (EdgeIndex e = 0; e < q.edges().size(); ++e) unitaries.push_back(embed_blocks(net, e, blocks[e]));
  double s_current = action(unitaries);

  double eps = 0.5;
  std::size_t accepted = 0, proposed = 0;
  std::size_t sweep_counter = 0;

  auto sweep = [&] {
    const std::uint64_t sweep_id = sweep_counter++;
    for (EdgeIndex e = 0; e < q.edges().size(); ++e) {
      for (std::size_t j = 0; j < blocks[e].size(); ++j) {
        CounterRng rng{opt.seed, kTagProposal, sweep_id, static_cast<std::uint64_t>(e), j};
        const MatrixXcd v = unitary_exponential(random_hermitian(blocks[e][j].rows(), rng), eps);
        MatrixXcd old_block = blocks[e][j];
        MatrixXcd old_u = unitaries[e];
        blocks[e][j] = v * old_block;
        unitaries[e] = embed_blocks(net, e, blocks[e]);
        const double s_new = action(unitaries);
        const double log_ratio = -big_n * (s_new - s_current);
        ++proposed;
        if (log_ratio >= 0.0 || rng.uniform() < std::exp(log_ratio)) {
          s_current = s_new;
          ++accepted;
        } else {
          blocks[e][j] = std::move(old_block);
          unitaries[e] = std::move(old_u);
        }
      }
    }
  };

  // Burn-in doubles as step-size tuning toward 30-50% acceptance.
  constexpr std::size_t kTuneWindow = 50;
  for (std::size_t b = 0; b < opt.burnin; ++b) {
    sweep();
    if ((b + 1) % kTuneWindow == 0) {
      const double rate = static_cast<double>(accepted) / static_cast<double>(proposed);
      if (rate > 0.5) eps = std::min(eps * 1.25, 2.0 * M_PI);
      else if (rate < 0.3) eps /= 1.25;
      accepted = proposed = 0;
    }
  }
  accepted = proposed = 0;

  Stream st;
  st.log_weight.assign(opt.samples, 0.0);
  st.values.assign(obs.outputs, std::vector<std::complex<double>>(opt.samples));
  std::vector<std::complex<double>> traces(obs.words.size()), out(obs.outputs);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    for (std::size_t t = 0; t < opt.thin; ++t) sweep();
    measure(obs, unitaries, net.dimension(), traces, out);
    for (std::size_t k = 0; k < obs.outputs; ++k) st.values[k][i] = out[k];
  }
  const double rate =
      proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  st.acceptance = rate;
  st.step_size = eps;
  if (rate < 0.05 || rate > 0.95) {
    throw SamplingError("metropolis acceptance rate " + format_double(rate) +
                        " is outside [0.05, 0.95] after tuning (step " + format_double(eps) +
                        "); use the reweighting method");
  }
  return st;
}

// Self-normalised importance-sampling estimate, reduced in sample order.
EstimatorResult reduce_weighted(const std::vector<double>& log_weight,
                                const std::vector<std::complex<double>>& values) {
  const std::size_t n = values.size();
  const double shift = *std::max_element(log_weight.begin(), log_weight.end());
  std::vector<double> w(n);
  double sum_w = 0.0, sum_w2 = 0.0;
  std::complex<double> sum_wo = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp(log_weight[i] - shift);
    sum_w += w[i];
    sum_w2 += w[i] * w[i];
    sum_wo += w[i] * values[i];
  }
  EstimatorResult r;
  r.samples = n;
  r.mean = sum_wo / sum_w;
  double var_re = 0.0, var_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> d = values[i] - r.mean;
    var_re += w[i] * w[i] * d.real() * d.real();
    var_im += w[i] * w[i] * d.imag() * d.imag();
  }
  r.std_error = std::sqrt(var_re) / sum_w;
  r.std_error_imag = std::sqrt(var_im) / sum_w;
  r.effective_samples = std::min(static_cast<double>(n), sum_w * sum_w / sum_w2);
  return r;
}

// Plain mean with batch-means error bars for a correlated chain.
EstimatorResult reduce_chain(const std::vector<std::complex<double>>& values, std::size_t batches) {
  const std::size_t n = values.size();
  EstimatorResult r;
  r.samples = n;
  std::complex<double> sum = 0.0;
  for (const auto& v : values) sum += v;
  r.mean = sum / static_cast<double>(n);

  const std::size_t b = std::clamp<std::size_t>(batches, 2, std::max<std::size_t>(2, n));
  const std::size_t size = n / b;
  if (size == 0) {
    r.std_error = r.std_error_imag = std::numeric_limits<double>::infinity();
    r.effective_samples = 0.0;
    return r;
  }
  double ss_re = 0.0, ss_im = 0.0;
  for (std::size_t k = 0; k < b; ++k) {
    std::complex<double> m = 0.0;
    for (std::size_t i = k * size; i < (k + 1) * size; ++i) m += values[i];
    m /= static_cast<double>(size);
    ss_re += (m.real() - r.mean.real()) * (m.real() - r.mean.real());
    ss_im += (m.imag() - r.mean.imag()) * (m.imag() - r.mean.imag());
  }
  const double bd = static_cast<double>(b);
  r.std_error = std::sqrt(ss_re / (bd - 1.0) / bd);
  r.std_error_imag = std::sqrt(ss_im / (bd - 1.0) / bd);

  double var = 0.0;
  for (const auto& v : values) var += std::norm(v - r.mean);
  var /= static_cast<double>(n > 1 ? n - 1 : 1);
  const double se2 = r.std_error * r.std_error + r.std_error_imag * r.std_error_imag;
  r.effective_samples = se2 > 0.0 ? std::min(static_cast<double>(n), var / se2)
                                  : static_cast<double>(n);
  return r;
}

std::vector<EstimatorResult> estimate(const BratteliNetwork& net, const PlaquetteTable& table,
                                      const ObservableSet& obs, const McOptions& opt) {
  if (opt.samples == 0) throw SamplingError("sample count must be at least 1");
  const CompiledAction action = compile(net, table);
  std::vector<EstimatorResult> out;
  if (opt.method == McMethod::kReweight) {
    Stream st = run_reweight(net, action, obs, opt);
    for (const auto& v : st.values) out.push_back(reduce_weighted(st.log_weight, v));
    const double ess = out.empty() ? 0.0 : out.front().effective_samples;
    const double floor = opt.min_effective_fraction * static_cast<double>(opt.samples);
    if (ess < floor) {
      throw SamplingError("effective sample size " + format_double(ess) + " of " +
                          std::to_string(opt.samples) +
                          " is below the reweighting threshold; use the metropolis method");
    }
  } else {
    Stream st = run_metropolis(net, action, obs, opt);
    for (const auto& v : st.values) {
      EstimatorResult r = reduce_chain(v, opt.batches);
      r.acceptance = st.acceptance;
      r.step_size = st.step_size;
      out.push_back(r);
    }
  }
  return out;
}

void require_closed(const Quiver& q, const EdgeWord& w) {
  q.check_composable(w);
  if (!q.is_closed(w)) throw SamplingError("Wilson loop must be a closed word");
}

}  // namespace

MatrixXcd sample_haar(Index n, CounterRng& rng) {
  if (n < 1) throw SamplingError("unitary block size must be at least 1");
  const MatrixXcd z = complex_gaussian(n, rng);
  Eigen::HouseholderQR<MatrixXcd> qr(z);
  MatrixXcd q = qr.householderQ();
  for (Index j = 0; j < n; ++j) {
    const std::complex<double> r = qr.matrixQR()(j, j);
    const double mag = std::abs(r);
    if (mag > 0.0) q.col(j) *= r / mag;
  }
  return q;
}

MatrixXcd embed_blocks(const BratteliNetwork& net, EdgeIndex e, const std::vector<MatrixXcd>& blocks) {
  const VertexIndex t = net.quiver().edges().at(e).target;
  const auto& n = net.block_sizes(t);
  const auto& r = net.multiplicities(t);
  if (blocks.size() != n.size()) throw SamplingError("wrong number of unitary blocks for edge");
  const Index dim = net.dimension();
  MatrixXcd u = MatrixXcd::Zero(dim, dim);
  Index offset = 0;
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (blocks[j].rows() != n[j] || blocks[j].cols() != n[j]) {
      throw SamplingError("unitary block has the wrong size");
    }
    for (std::int64_t copy = 0; copy < r[j]; ++copy) {
      u.block(offset, offset, n[j], n[j]) = blocks[j];
      offset += n[j];
    }
  }
  return u;
}

DiracSample sample_dirac(const BratteliNetwork& net, std::uint64_t seed, std::uint64_t sample_index) {
  DiracSample s;
  s.blocks = draw_blocks(net, seed, kTagHaar, sample_index);
  for (EdgeIndex e = 0; e < s.blocks.size(); ++e) s.unitaries.push_back(embed_blocks(net, e, s.blocks[e]));
  return s;
}

MatrixXcd assemble_dirac(const BratteliNetwork& net, const DiracSample& sample) {
  const Quiver& q = net.quiver();
  const Index dim = net.dimension();
  const Index total = dim * static_cast<Index>(q.vertex_count());
  MatrixXcd d = MatrixXcd::Zero(total, total);
  for (EdgeIndex e = 0; e < q.edges().size(); ++e) {
    const Edge& edge = q.edges()[e];
    const MatrixXcd& u = sample.unitaries.at(e);
    const Index s = static_cast<Index>(edge.source) * dim;
    const Index t = static_cast<Index>(edge.target) * dim;
    d.block(s, t, dim, dim) += u;
    d.block(t, s, dim, dim) += u.adjoint();
  }
  return d;
}

double spectral_action_by_eigenvalues(const MatrixXcd& dirac, const ActionSpec& f) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(dirac, Eigen::EigenvaluesOnly);
  std::vector<double> c;
  for (const Rational& r : f.coefficients()) c.push_back(to_double(r));
  double total = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    double p = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * lambda + *it;
    total += p;
  }
  return total;
}

EstimatorResult estimate_wilson(const BratteliNetwork& net, const PlaquetteTable& table,
                                const EdgeWord& beta, const McOptions& options) {
  require_closed(net.quiver(), beta);
  ObservableSet obs;
  obs.words = {beta};
  obs.combine = [](std::span<const std::complex<double>> t, std::span<std::complex<double>> out) {
    out[0] = t[0];
  };
  return estimate(net, table, obs, options).front();
}

ResidualResult check_loop_equation(const BratteliNetwork& net, const PlaquetteTable& table,
                                   const LoopEquation& eq, const McOptions& options) {
  if (eq.mode != LoopMode::kFiniteN) {
    throw SamplingError("only finite-N loop equations can be checked by sampling");
  }
  std::map<CyclicWord, std::size_t> index;
  ObservableSet obs;
  auto slot = [&](const CyclicWord& w) {
    auto [it, inserted] = index.try_emplace(w, obs.words.size());
    if (inserted) obs.words.push_back(w.word());
    return it->second;
  };
  struct Lhs {
    double c;
    std::size_t a, b;
  };
  struct Rhs {
    double c;
    std::size_t a;
  };
  std::vector<Lhs> lhs;
  std::vector<Rhs> rhs;
  for (const auto& t : eq.lhs) lhs.push_back({static_cast<double>(t.coefficient), slot(t.first), slot(t.second)});
  for (const auto& t : eq.rhs) rhs.push_back({to_double(t.coefficient()), slot(t.word)});

  obs.outputs = 3;
  obs.combine = [lhs, rhs](std::span<const std::complex<double>> t,
                           std::span<std::complex<double>> out) {
    std::complex<double> l = 0.0, r = 0.0;
    for (const auto& term : lhs) l += term.c * t[term.a] * t[term.b];
    for (const auto& term : rhs) r += term.c * t[term.a];
    out[0] = l;
    out[1] = r;
    out[2] = l - r;
  };
  auto results = estimate(net, table, obs, options);
  return {results[0], results[1], results[2]};
}

}  // namespace quiverloop
