#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quiverloop/action.hpp"
#include "quiverloop/quiver.hpp"
#include "quiverloop/rational.hpp"

namespace quiverloop {

// beta = root^{s_1} mu_1 root^{s_2} mu_2 ... root^{s_p} mu_p, where no
// mu_j contains the root edge in either orientation.
struct RootedDecomposition {
  EdgeIndex root = 0;
  std::vector<Orientation> signs;
  std::vector<EdgeWord> subwords;
  // The rotation of beta that the decomposition splits.
  EdgeWord based;

  std::size_t occurrences() const { return signs.size(); }
  EdgeWord reassemble() const;
};

// Throws LoopEquationError if beta is not closed and reduced, or if the
// root is a self-loop. p = 0 (empty lists) when beta avoids the root.
RootedDecomposition root_decompose(const Quiver& q, const EdgeWord& beta, EdgeIndex root);

enum class LoopMode { kFiniteN, kLargeN };

// coefficient * E[ tr(first) tr(second) ], tr = Tr / N. The pair is
// unordered and stored with first <= second.
struct DoubleTraceTerm {
  std::int64_t coefficient;
  CyclicWord first;
  CyclicWord second;
};

// multiplicity * g_plaquette * E[ tr(word) ].
struct SingleTraceTerm {
  std::int64_t multiplicity;
  CyclicWord plaquette;
  Rational coupling;  // g_plaquette as found in the table
  CyclicWord word;

  Rational coefficient() const { return coupling * multiplicity; }
};

// sum(lhs) = sum(rhs) with the expectation taken under exp(-N S) dD.
struct LoopEquation {
  EdgeIndex root = 0;
  EdgeWord loop;  // the based rotation of beta used to build the terms
  LoopMode mode = LoopMode::kFiniteN;
  std::vector<DoubleTraceTerm> lhs;
  std::vector<SingleTraceTerm> rhs;
};

// Makeenko-Migdal relation for the Wilson loop beta at the rooted edge.
//
// beta is based at the source of the root: at its first forward root
// occurrence if there is one, otherwise right after its first backward
// occurrence. Every forward occurrence at position k splits beta into the
// pair (beta[0,k), beta[k,end)) with sign +1, every backward one into
// (beta[0,k], beta[k+1,end)) with sign -1. On the right, every occurrence
// of the root in a plaquette gamma contributes +g tr(beta . gamma rotated
// to start there) for a forward step and -g tr(beta . gamma rotated to end
// there) for a backward step. Cyclically reduced inputs are first brought
// to canonical rotation, so all rotations of beta give the same equation.
LoopEquation generate_loop_equation(const Quiver& q, const PlaquetteTable& table,
                                    const EdgeWord& beta, EdgeIndex root,
                                    LoopMode mode = LoopMode::kFiniteN);

// One product of large-N moments: coefficient * [g] * prod m(word).
// Empty words stand for m_0 = 1 and are kept so the shape of the
// original equation stays visible.
struct MomentTerm {
  Rational coefficient;
  std::optional<CyclicWord> coupling;
  std::vector<CyclicWord> moments;
};

struct MomentEquation {
  std::vector<MomentTerm> lhs;
  std::vector<MomentTerm> rhs;
};

// Replaces E[tr A tr B] by m(A) m(B). Requires LoopMode::kLargeN.
MomentEquation factorize_large_N(const LoopEquation& eq);

// k if w is the class of generator^k (k < 0 meaning the reverse), 0 for
// the empty word, nullopt otherwise.
std::optional<std::int64_t> power_index(const CyclicWord& w, const CyclicWord& generator);

std::string render(const Quiver& q, const LoopEquation& eq);
// Moments that are powers of `generator` print as m_k, others as m[word].
std::string render(const Quiver& q, const MomentEquation& eq,
                   const std::optional<CyclicWord>& generator = std::nullopt);

}  // namespace quiverloop
