#include <gtest/gtest.h>

#include "oracles.hpp"
#include "quiverloop/bootstrap.hpp"
#include "quiverloop/error.hpp"
#include "quiverloop/job.hpp"
#include "quiverloop/loop_equations.hpp"

using namespace quiverloop;

namespace {

struct Triangle {
  Job job = parse_job(builtin_triangle_json(3, Rational(1, 5)));
  PlaquetteTable table = expand_action(job.quiver, job.action);
  EdgeWord zeta = job.quiver.parse_word("e1+ e2+ e3+");
  CyclicWord zeta_class = cyclic_canonical(job.quiver, zeta);
  EdgeIndex root = job.quiver.edge_index("e1");

  EdgeWord power(int n) const {
    return n >= 0 ? zeta.power(n) : zeta.reversed().power(-n);
  }
};

// Substitutes m_k for every power of zeta and x for each coupling.
LaurentPolynomial side(const std::vector<MomentTerm>& terms, const CyclicWord& zeta) {
  LaurentPolynomial sum;
  for (const auto& t : terms) {
    EXPECT_EQ(denominator(t.coefficient), 1);
    LaurentPolynomial p = LaurentPolynomial::constant(BigInt(numerator(t.coefficient)));
    for (const auto& w : t.moments) {
      const auto k = power_index(w, zeta);
      EXPECT_TRUE(k.has_value());
      p = p * moment(static_cast<std::size_t>(std::abs(k.value_or(0))));
    }
    if (t.coupling) p = p.times_x_power(1);
    sum += p;
  }
  return sum;
}

}  // namespace

TEST(RootDecompose, TriangleLoop) {
  const Triangle t;
  const RootedDecomposition d = root_decompose(t.job.quiver, t.zeta, t.root);
  ASSERT_EQ(d.occurrences(), 1u);
  EXPECT_EQ(d.signs[0], Orientation::kForward);
  EXPECT_EQ(t.job.quiver.format(d.subwords[0]), "e2+ e3+");
  EXPECT_EQ(d.reassemble(), d.based);
}

TEST(RootDecompose, RotatesToFirstRootOccurrence) {
  const Triangle t;
  const EdgeWord rotated = t.zeta.power(2).rotated(2);  // starts at e3
  const RootedDecomposition d = root_decompose(t.job.quiver, rotated, t.root);
  EXPECT_EQ(d.occurrences(), 2u);
  EXPECT_EQ(d.based[0].edge, t.root);
}

TEST(RootDecompose, Errors) {
  const Job two = load_job(QUIVERLOOP_DATA_DIR "/two_vertex.json");
  const Quiver& q = two.quiver;
  EXPECT_THROW(root_decompose(q, q.parse_word("o_v+"), q.edge_index("o_v")), LoopEquationError);
  EXPECT_THROW(root_decompose(q, q.parse_word("e+"), q.edge_index("e")), LoopEquationError);
  EXPECT_THROW(root_decompose(q, q.parse_word("e+ e- o_v+"), q.edge_index("e")), LoopEquationError);
}

TEST(LoopEquation, FiniteNSingleCycle) {
  const Triangle t;
  const LoopEquation eq = generate_loop_equation(t.job.quiver, t.table, t.zeta, t.root);
  EXPECT_EQ(render(t.job.quiver, eq),
            "<tr1 tr[e1+ e2+ e3+]> = 1/5 <tr[e1+ e2+ e3+ e1+ e2+ e3+]> - 1/5 <tr1>");
}

TEST(LoopEquation, LargeNForwardPowersAreIdentities) {
  const Triangle t;
  for (int n = 1; n <= 6; ++n) {
    const auto eq = generate_loop_equation(t.job.quiver, t.table, t.power(n), t.root, LoopMode::kLargeN);
    const MomentEquation m = factorize_large_N(eq);
    LaurentPolynomial expected;
    for (int l = 0; l < n; ++l) expected += moment(l) * moment(n - l);
    EXPECT_EQ(side(m.lhs, t.zeta_class), expected) << n;
    EXPECT_EQ(side(m.rhs, t.zeta_class), (moment(n + 1) - moment(n - 1)).times_x_power(1)) << n;
  }
}

TEST(LoopEquation, LargeNReversedPowersAreIdentities) {
  const Triangle t;
  for (int n = 1; n <= 5; ++n) {
    const auto eq = generate_loop_equation(t.job.quiver, t.table, t.power(-n), t.root, LoopMode::kLargeN);
    const MomentEquation m = factorize_large_N(eq);
    EXPECT_TRUE((side(m.lhs, t.zeta_class) - side(m.rhs, t.zeta_class)).is_zero()) << n;
  }
}

TEST(LoopEquation, RotationInvariant) {
  const Triangle t;
  const EdgeWord beta = t.power(2);
  const std::string reference =
      render(t.job.quiver, generate_loop_equation(t.job.quiver, t.table, beta, t.root));
  for (std::size_t k = 1; k < beta.size(); ++k) {
    EXPECT_EQ(render(t.job.quiver, generate_loop_equation(t.job.quiver, t.table, beta.rotated(k), t.root)),
              reference);
  }
}

TEST(LoopEquation, AgreesWithExactU1AtNEqualsOne) {
  // At N = 1 every trace is a phase e^{i k theta}, so E[tr A tr B] is the
  // single moment of the combined winding: (-1)^k I_k(2x) / I_0(2x).
  const Triangle t;
  const double x = 0.2;
  auto mean = [&](std::int64_t winding) {
    const int k = static_cast<int>(std::abs(winding));
    return (k % 2 ? -1.0 : 1.0) * oracle::bessel_i_double(k, 2 * x) / oracle::bessel_i_double(0, 2 * x);
  };
  auto winding = [&](const CyclicWord& w) { return power_index(w, t.zeta_class).value(); };
  for (int n = -3; n <= 4; ++n) {
    if (n == 0) continue;
    const auto eq = generate_loop_equation(t.job.quiver, t.table, t.power(n), t.root);
    double lhs = 0.0, rhs = 0.0;
    for (const auto& term : eq.lhs) lhs += term.coefficient * mean(winding(term.first) + winding(term.second));
    for (const auto& term : eq.rhs) rhs += to_double(term.coefficient()) * mean(winding(term.word));
    EXPECT_NEAR(lhs, rhs, 1e-14) << "n = " << n;
  }
}

TEST(LoopEquation, LoopAvoidingRootWithoutRootPlaquettes) {
  const Job two = load_job(QUIVERLOOP_DATA_DIR "/two_vertex.json");
  const Quiver& q = two.quiver;
  // With f = z^2 no reduced plaquette crosses e.
  const PlaquetteTable table = expand_action(q, ActionSpec({0, 0, 1}));
  const LoopEquation eq = generate_loop_equation(q, table, q.parse_word("o_v+"), q.edge_index("e"));
  EXPECT_TRUE(eq.lhs.empty());
  EXPECT_TRUE(eq.rhs.empty());
  // A loop that never visits the source of the root has no basing.
  EXPECT_THROW(generate_loop_equation(q, table, q.parse_word("o_w+"), q.edge_index("e")),
               LoopEquationError);
}

TEST(LoopEquation, FactorizationNeedsLargeNMode) {
  const Triangle t;
  const auto eq = generate_loop_equation(t.job.quiver, t.table, t.zeta, t.root);
  EXPECT_THROW(factorize_large_N(eq), LoopEquationError);
}

TEST(PowerIndex, SignsAndEmpty) {
  const Triangle t;
  const Quiver& q = t.job.quiver;
  EXPECT_EQ(power_index(CyclicWord{}, t.zeta_class), 0);
  EXPECT_EQ(power_index(cyclic_canonical(q, t.power(3)), t.zeta_class), 3);
  EXPECT_EQ(power_index(cyclic_canonical(q, t.power(-2)), t.zeta_class), -2);
}
