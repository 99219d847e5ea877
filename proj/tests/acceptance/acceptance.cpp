// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "cli.hpp"
#include "oracles.hpp"
#include "quiverloop/action.hpp"
#include "quiverloop/bootstrap.hpp"
#include "quiverloop/gww.hpp"
#include "quiverloop/haar_mc.hpp"
#include "quiverloop/job.hpp"
#include "quiverloop/loop_equations.hpp"

using namespace quiverloop;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

Job triangle(std::int64_t n, const Rational& x) {
  return parse_job(builtin_triangle_json(n, x), "builtin:triangle");
}

EdgeWord zeta_power(const Quiver& q, int n) {
  const EdgeWord zeta = q.parse_word("e1+ e2+ e3+");
  return n >= 0 ? zeta.power(static_cast<std::size_t>(n))
                : zeta.reversed().power(static_cast<std::size_t>(-n));
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  std::size_t matched = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    if (moment(n) == oracle::printed_moment(n)) ++matched;
  }
  const double t = seconds_since(t0);
  return {matched == 6 && t < 1.0, std::to_string(matched) + "/6 moments equal the printed table, " +
                                       fmt(t) + " s"};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  const Job job = triangle(3, Rational(1, 5));
  const PlaquetteTable table = expand_action(job.quiver, job.action);
  const CyclicWord zeta = cyclic_canonical(job.quiver, zeta_power(job.quiver, 1));
  const EdgeIndex root = job.quiver.edge_index("e1");
  std::size_t ok = 0;
  std::string first_problem;
  for (int n = 1; n <= 6; ++n) {
    const LoopEquation eq =
        generate_loop_equation(job.quiver, table, zeta_power(job.quiver, n), root, LoopMode::kLargeN);
    const MomentEquation me = factorize_large_N(eq);
    auto m_of = [&](const CyclicWord& w) {
      const auto k = power_index(w, zeta);
      if (!k) throw std::runtime_error("moment word is not a power of the 3-cycle");
      return moment(static_cast<std::size_t>(std::abs(*k)));
    };
    auto side = [&](const std::vector<MomentTerm>& terms) {
      LaurentPolynomial sum;
      for (const auto& t : terms) {
        if (denominator(t.coefficient) != 1) throw std::runtime_error("non-integer multiplicity");
        LaurentPolynomial p = LaurentPolynomial::constant(BigInt(numerator(t.coefficient)));
        for (const auto& w : t.moments) p = p * m_of(w);
        // Both plaquettes of the triangle carry g = x.
        if (t.coupling) p = p.times_x_power(1);
        sum += p;
      }
      return sum;
    };
    // The expected shape: lhs sum_{l<n} m_l m_{n-l}, rhs x (m_{n+1} - m_{n-1}).
    LaurentPolynomial expected_lhs, expected_rhs;
    for (int l = 0; l < n; ++l) expected_lhs += moment(l) * moment(n - l);
    expected_rhs = (moment(n + 1) - moment(n - 1)).times_x_power(1);
    const LaurentPolynomial lhs = side(me.lhs), rhs = side(me.rhs);
    if (lhs == expected_lhs && rhs == expected_rhs && (lhs - rhs).is_zero()) {
      ++ok;
    } else if (first_problem.empty()) {
      first_problem = ", first failure at n=" + std::to_string(n);
    }
  }
  const double t = seconds_since(t0);
  return {ok == 6 && t < 1.0,
          std::to_string(ok) + "/6 equations reduce to zero" + first_problem + ", " + fmt(t) + " s"};
}

Outcome criterion3() {
  Job job = load_job(QUIVERLOOP_DATA_DIR "/two_vertex.json");
  const PlaquetteTable table = expand_action(job.quiver, ActionSpec({0, 0, 0, 0, 1}));
  const Quiver& q = job.quiver;
  auto g = [&](const std::string& w) { return table.coefficient(cyclic_canonical(q, q.parse_word(w))); };

  bool ok = true;
  // Every mixed class o_v^(+-1) e o_w^(+-1) e^-1 carries 4.
  for (const char* w : {"o_v+ e+ o_w+ e-", "o_v+ e+ o_w- e-", "o_v- e+ o_w+ e-", "o_v- e+ o_w- e-"}) {
    ok = ok && g(w) == 4;
  }
  // Self-loop classes follow q(u + 1/u) with q(z) = z^4 + 4 z^2 + 1.
  const auto expected = oracle::laurent_in_u({1, 0, 4, 0, 1});
  std::int64_t constant = 0;
  for (const char* loop : {"o_v", "o_w"}) {
    for (const auto& [j, c] : expected) {
      if (j == 0) {
        constant += c;
        continue;
      }
      std::string w;
      for (int i = 0; i < std::abs(j); ++i) w += std::string(loop) + (j > 0 ? "+ " : "- ");
      ok = ok && g(w) == c;
    }
  }
  ok = ok && table.constant() == constant;
  // No other classes.
  std::size_t classes = 4 + 2 * (expected.size() - 1);
  ok = ok && table.entries.size() == classes;
  return {ok, "mixed=" + to_string(g("o_v+ e+ o_w+ e-")) + ", o_v^4=" + to_string(g("o_v+ o_v+ o_v+ o_v+")) +
                  ", o_v^2=" + to_string(g("o_v+ o_v+")) + ", constant=" + to_string(table.constant()) +
                  "N, " + std::to_string(table.entries.size()) + " classes"};
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  auto check = [&](const Job& job, const ActionSpec& f) {
    const PlaquetteTable table = expand_action(job.quiver, f);
    for (std::uint64_t i = 0; i < 20; ++i) {
      const DiracSample s = sample_dirac(job.network, 2024, i);
      const double a = evaluate_action(table, s.unitaries, job.network.dimension());
      const double b = spectral_action_by_eigenvalues(assemble_dirac(job.network, s), f);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
  };
  check(load_job(QUIVERLOOP_DATA_DIR "/two_vertex.json"), ActionSpec({0, 0, 0, 0, 1}));
  check(triangle(5, Rational(1, 5)),
        ActionSpec({Rational(1), Rational(1, 2), Rational(-1, 3), Rational(1, 5), Rational(1, 7)}));
  const double t = seconds_since(t0);
  return {worst <= 1e-9 && t < 10.0, "max relative deviation " + fmt(worst) + ", " + fmt(t) + " s"};
}

Outcome criterion5() {
  std::mt19937_64 gen(5);
  std::size_t checks = 0, mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto rq = oracle::random_quiver(gen, 5, 8);
    const Quiver q = rq.build();
    for (std::size_t k = 0; k <= 8; ++k) {
      const auto expected = oracle::closed_walk_counts(rq.vertices, rq.edges, k);
      for (VertexIndex v = 0; v < rq.vertices; ++v) {
        std::int64_t count = 0;
        for_each_closed_walk(q, v, k, [&](const EdgeWord&) { ++count; });
        ++checks;
        if (count != expected[v]) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(checks - mismatches) + "/" + std::to_string(checks) +
                               " (quiver, vertex, length) counts match A^k"};
}

Outcome criterion6() {
  const auto t0 = Clock::now();
  double z0 = 0.0;
  for (int n = 1; n <= 8; ++n) z0 = std::max(z0, std::abs(partition_function(n, 0.0) - 1.0));
  double quad = 0.0;
  for (double x : uniform_grid(-2.0, 2.0, 81)) {
    const double ref = oracle::u1_quadrature(x);
    quad = std::max(quad, std::abs(partition_function(1, x) - ref) / ref);
  }
  double odd = 0.0;
  const std::vector<double> xs = uniform_grid(-3.0, 3.0, 301);
  for (int n = 1; n <= 6; ++n) {
    for (double x : xs) {
      if (x < 0) continue;
      odd = std::max(odd, std::abs(first_moment(n, x) + first_moment(n, -x)));
    }
  }
  const double t = seconds_since(t0);
  return {z0 <= 1e-12 && quad <= 1e-8 && odd <= 1e-9 && t < 5.0,
          "|Z_N(0)-1|=" + fmt(z0) + ", Z_1 vs quadrature " + fmt(quad) + ", oddness " + fmt(odd) +
              ", " + fmt(t) + " s"};
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  const Job job = triangle(3, Rational(1, 5));
  McOptions opt;
  opt.samples = 100000;
  opt.seed = 7;
  const EstimatorResult r = estimate_wilson(job.network, expand_action(job.quiver, job.action),
                                            zeta_power(job.quiver, 1), opt);
  const double exact = first_moment(3, 0.2);
  const double dev = std::abs(r.mean.real() - exact);
  const double t = seconds_since(t0);
  return {dev <= 3.0 * r.std_error && t < 180.0,
          "estimate " + fmt(r.mean.real(), 6) + " +- " + fmt(r.std_error, 2) + " vs y_3(0.2) = " +
              fmt(exact, 6) + " (" + fmt(dev / r.std_error, 2) + " stderr), ESS " +
              fmt(r.effective_samples, 5) + ", " + fmt(t) + " s"};
}

Outcome criterion8() {
  const auto t0 = Clock::now();
  const Job job = triangle(4, Rational(1, 5));
  const PlaquetteTable table = expand_action(job.quiver, job.action);
  McOptions opt;
  opt.samples = 100000;
  opt.seed = 8;
  bool ok = true;
  std::string detail;
  for (int n = 1; n <= 2; ++n) {
    const LoopEquation eq =
        generate_loop_equation(job.quiver, table, zeta_power(job.quiver, n), job.quiver.edge_index("e1"));
    const ResidualResult r = check_loop_equation(job.network, table, eq, opt);
    const double z = std::abs(r.residual.mean.real()) / r.residual.std_error;
    const double zi = std::abs(r.residual.mean.imag()) / r.residual.std_error_imag;
    ok = ok && z <= 5.0 && zi <= 5.0;
    detail += "zeta^" + std::to_string(n) + ": residual " + fmt(r.residual.mean.real(), 3) + " (" +
              fmt(z, 2) + " stderr); ";
  }
  const double t = seconds_since(t0);
  return {ok && t < 300.0, detail + fmt(t) + " s"};
}

Outcome criterion9() {
  const auto t0 = Clock::now();
  const GridSpec grid;  // [-3,3] x [-1.2,1.2], 300 x 300
  const FeasibilityMap full = scan_region(grid, 7, 1e-10, 1);
  const double scan_time = seconds_since(t0);

  // (a) the order-2 set is the stripe |y| <= 1.
  const FeasibilityMap two = scan_region(grid, 2, 1e-10, 1);
  std::size_t stripe_mismatch = 0;
  for (const auto& c : two.cells) {
    if (c.undefined) continue;
    const bool in_set = !c.first_failing_order.has_value();
    if (in_set != (std::abs(c.y) <= 1.0)) ++stripe_mismatch;
  }

  // (b) the feasible set shrinks with the order.
  std::vector<std::size_t> counts;
  bool monotone = true;
  for (std::size_t k = 2; k <= 7; ++k) {
    const std::size_t count = scan_region(grid, k, 1e-10, 1).count_feasible(k);
    if (!counts.empty() && count > counts.back()) monotone = false;
    counts.push_back(count);
  }
  const bool consistent = counts.back() == full.count_feasible(7);

  // (c) the N = 5 GWW curve stays inside the order-7 set.
  std::size_t checked = 0, outside = 0;
  for (std::size_t i = 0; i < grid.x_points; ++i) {
    const double x = grid.x_at(i);
    if (x == 0.0) continue;
    const GwwSample s = first_moment_sample(5, x);
    if (!s.ok || !(s.z_value > 0)) continue;
    ++checked;
    if (!feasible(x, s.y, 7, 1e-8).feasible) ++outside;
  }

  std::string count_text;
  for (auto c : counts) count_text += (count_text.empty() ? "" : ">=") + std::to_string(c);
  const bool ok = stripe_mismatch == 0 && monotone && consistent && outside == 0 && checked > 0 &&
                  scan_time < 30.0;
  return {ok, "(a) " + std::to_string(stripe_mismatch) + " cells off the stripe; (b) counts " + count_text +
                  "; (c) " + std::to_string(checked - outside) + "/" + std::to_string(checked) +
                  " curve points feasible; full scan " + fmt(scan_time) + " s"};
}

Outcome criterion10() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("quiverloop_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto run_pair = [&](const std::string& tag) {
    std::vector<std::string> common7 = {"quiverloop", "mc", "builtin:triangle", "--x", "0.2",
                                        "--dim-override", "3", "--loop", "e1+ e2+ e3+",
                                        "--samples", "100000", "--seed", "7", "--out"};
    std::vector<std::string> common8 = {"quiverloop", "mc", "builtin:triangle", "--x", "0.2",
                                        "--dim-override", "4", "--loop", "e1+ e2+ e3+ e1+ e2+ e3+",
                                        "--check-eq", "--root", "e1", "--samples", "100000",
                                        "--seed", "8", "--out"};
    std::ostringstream out, err;
    common7.push_back((dir / ("c7_" + tag + ".json")).string());
    common8.push_back((dir / ("c8_" + tag + ".json")).string());
    return cli::run(common7, out, err) == 0 && cli::run(common8, out, err) == 0;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const bool ran = run_pair("a") && run_pair("b");
  const bool same7 = ran && slurp(dir / "c7_a.json") == slurp(dir / "c7_b.json");
  const bool same8 = ran && slurp(dir / "c8_a.json") == slurp(dir / "c8_b.json");
  const auto bytes = ran ? fs::file_size(dir / "c7_a.json") + fs::file_size(dir / "c8_a.json") : 0;
  fs::remove_all(dir);
  return {ran && same7 && same8, std::string("criterion 7 output ") + (same7 ? "identical" : "DIFFERS") +
                                     ", criterion 8 output " + (same8 ? "identical" : "DIFFERS") + " (" +
                                     std::to_string(bytes) + " bytes compared)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"moment table matches the printed expressions", criterion1},
      {"large-N loop equations are symbolic identities", criterion2},
      {"two-vertex action expansion", criterion3},
      {"spectral action equals eigenvalue trace", criterion4},
      {"closed-walk counts equal adjacency powers", criterion5},
      {"GWW sanity", criterion6},
      {"Monte Carlo agrees with exact GWW moment", criterion7},
      {"finite-N loop-equation residual", criterion8},
      {"bootstrap region properties", criterion9},
      {"deterministic reruns", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
