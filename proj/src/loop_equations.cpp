#include "quiverloop/loop_equations.hpp"

#include <map>
#include <sstream>
#include <tuple>

#include "quiverloop/error.hpp"

namespace quiverloop {
namespace {

void check_inputs(const Quiver& q, const EdgeWord& beta, EdgeIndex root) {
  if (root >= q.edge_count()) {
    throw LoopEquationError("unknown root edge index " + std::to_string(root));
  }
  if (q.edge(root).is_self_loop()) {
    throw LoopEquationError("root edge '" + q.edge(root).id + "' is a self-loop");
  }
  q.check_composable(beta);
  if (!q.is_closed(beta)) throw LoopEquationError("Wilson loop is not closed");
  if (!is_reduced(beta)) throw LoopEquationError("Wilson loop is not reduced");
}

// Cyclically reduced words are replaced by their canonical rotation; any
// other reduced closed word has no reduced rotation but itself.
EdgeWord normal_rotation(const EdgeWord& beta) {
  CyclicWord c = CyclicWord::from_closed(beta);
  return c.size() == beta.size() ? c.word() : beta;
}

std::optional<std::size_t> first_occurrence(const EdgeWord& w, EdgeIndex root, Orientation o) {
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k].edge == root && w[k].orientation == o) return k;
  }
  return std::nullopt;
}

// Rotation of beta whose basepoint is the source of the root edge.
EdgeWord base_at_root_source(const Quiver& q, const EdgeWord& beta, EdgeIndex root) {
  if (beta.empty()) return beta;
  if (auto k = first_occurrence(beta, root, Orientation::kForward)) return beta.rotated(*k);
  if (auto k = first_occurrence(beta, root, Orientation::kBackward)) return beta.rotated(*k + 1);
  const VertexIndex source = q.edge(root).source;
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (q.departure(beta[k]) == source) return beta.rotated(k);
  }
  throw LoopEquationError("Wilson loop avoids the root edge and never visits its source vertex '" +
                          q.vertex_id(source) + "'");
}

}  // namespace

EdgeWord RootedDecomposition::reassemble() const {
  EdgeWord out;
  for (std::size_t j = 0; j < signs.size(); ++j) {
    out += EdgeWord({Step{root, signs[j]}});
    out += subwords[j];
  }
  return out;
}

RootedDecomposition root_decompose(const Quiver& q, const EdgeWord& beta, EdgeIndex root) {
  check_inputs(q, beta, root);
  RootedDecomposition d;
  d.root = root;
  EdgeWord w = normal_rotation(beta);
  std::optional<std::size_t> start = first_occurrence(w, root, Orientation::kForward);
  if (!start) start = first_occurrence(w, root, Orientation::kBackward);
  if (!start) {
    d.based = w;
    return d;
  }
  d.based = w.rotated(*start);
  for (std::size_t k = 0; k < d.based.size(); ++k) {
    const Step& s = d.based[k];
    if (s.edge == root) {
      d.signs.push_back(s.orientation);
      d.subwords.emplace_back();
    } else {
      d.subwords.back() += EdgeWord({s});
    }
  }
  return d;
}

LoopEquation generate_loop_equation(const Quiver& q, const PlaquetteTable& table,
                                    const EdgeWord& beta, EdgeIndex root, LoopMode mode) {
  check_inputs(q, beta, root);
  LoopEquation eq;
  eq.root = root;
  eq.mode = mode;
  eq.loop = base_at_root_source(q, normal_rotation(beta), root);
  const EdgeWord& based = eq.loop;

  std::map<std::pair<CyclicWord, CyclicWord>, std::int64_t> lhs;
  for (std::size_t k = 0; k < based.size(); ++k) {
    if (based[k].edge != root) continue;
    const bool forward = based[k].orientation == Orientation::kForward;
    const std::size_t cut = forward ? k : k + 1;
    CyclicWord a = CyclicWord::from_closed(based.subword(0, cut));
    CyclicWord b = CyclicWord::from_closed(based.subword(cut, based.size()));
    if (b < a) std::swap(a, b);
    lhs[{a, b}] += forward ? 1 : -1;
  }
  for (auto& [pair, c] : lhs) {
    if (c != 0) eq.lhs.push_back({c, pair.first, pair.second});
  }

  std::map<std::pair<CyclicWord, CyclicWord>, std::int64_t> rhs;
  for (const auto& [gamma, g] : table.entries) {
    const EdgeWord& gw = gamma.word();
    for (std::size_t k = 0; k < gw.size(); ++k) {
      if (gw[k].edge != root) continue;
      const bool forward = gw[k].orientation == Orientation::kForward;
      EdgeWord inserted = based + gw.rotated(forward ? k : k + 1);
      rhs[{gamma, CyclicWord::from_closed(inserted)}] += forward ? 1 : -1;
    }
  }
  for (auto& [key, m] : rhs) {
    if (m != 0) eq.rhs.push_back({m, key.first, table.entries.at(key.first), key.second});
  }
  return eq;
}

MomentEquation factorize_large_N(const LoopEquation& eq) {
  if (eq.mode != LoopMode::kLargeN) {
    throw LoopEquationError("factorization needs an equation generated in large-N mode");
  }
  MomentEquation out;
  for (const auto& t : eq.lhs) {
    out.lhs.push_back({Rational(t.coefficient), std::nullopt, {t.first, t.second}});
  }
  for (const auto& t : eq.rhs) {
    out.rhs.push_back({Rational(t.multiplicity), t.plaquette, {t.word}});
  }
  return out;
}

std::optional<std::int64_t> power_index(const CyclicWord& w, const CyclicWord& generator) {
  if (w.empty()) return 0;
  if (generator.empty() || w.size() % generator.size() != 0) return std::nullopt;
  const std::size_t k = w.size() / generator.size();
  if (w == CyclicWord::from_closed(generator.word().power(k))) return static_cast<std::int64_t>(k);
  if (w == CyclicWord::from_closed(generator.word().reversed().power(k))) {
    return -static_cast<std::int64_t>(k);
  }
  return std::nullopt;
}

namespace {

std::string signed_prefix(const std::string& magnitude, bool negative, bool first) {
  if (first) return negative ? "-" + magnitude : magnitude;
  return (negative ? " - " : " + ") + magnitude;
}

std::string coefficient_text(const Rational& c) {
  Rational a = c < 0 ? Rational(-c) : c;
  return a == 1 ? std::string() : to_string(a) + " ";
}

}  // namespace

std::string render(const Quiver& q, const LoopEquation& eq) {
  auto word = [&](const CyclicWord& w) {
    return w.empty() ? std::string("1") : "[" + q.format(w.word()) + "]";
  };
  std::ostringstream out;
  bool first = true;
  for (const auto& t : eq.lhs) {
    out << signed_prefix(coefficient_text(Rational(t.coefficient)) + "<tr" + word(t.first) +
                             " tr" + word(t.second) + ">",
                         t.coefficient < 0, first);
    first = false;
  }
  if (first) out << "0";
  out << " = ";
  first = true;
  for (const auto& t : eq.rhs) {
    const Rational c = t.coefficient();
    out << signed_prefix(coefficient_text(c) + "<tr" + word(t.word) + ">", c < 0, first);
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

std::string render(const Quiver& q, const MomentEquation& eq,
                   const std::optional<CyclicWord>& generator) {
  auto moment = [&](const CyclicWord& w) {
    if (generator) {
      if (auto k = power_index(w, *generator)) return "m_" + std::to_string(*k);
    }
    return "m[" + q.format(w.word()) + "]";
  };
  auto side = [&](const std::vector<MomentTerm>& terms) {
    std::ostringstream out;
    bool first = true;
    for (const auto& t : terms) {
      std::string body = coefficient_text(t.coefficient);
      if (t.coupling) body += "g[" + q.format(t.coupling->word()) + "] ";
      for (std::size_t i = 0; i < t.moments.size(); ++i) {
        body += (i ? "*" : "") + moment(t.moments[i]);
      }
      out << signed_prefix(body, t.coefficient < 0, first);
      first = false;
    }
    if (first) out << "0";
    return out.str();
  };
  return side(eq.lhs) + " = " + side(eq.rhs);
}

}  // namespace quiverloop
