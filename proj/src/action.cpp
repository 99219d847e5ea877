#include "quiverloop/action.hpp"

#include "quiverloop/error.hpp"
#include "quiverloop/holonomy.hpp"

namespace quiverloop {

ActionSpec::ActionSpec(std::vector<Rational> coefficients) : f_(std::move(coefficients)) {
  while (!f_.empty() && f_.back() == 0) f_.pop_back();
}

Rational PlaquetteTable::constant() const {
  Rational sum = 0;
  for (const auto& c : constant_by_vertex) sum += c;
  return sum;
}

Rational PlaquetteTable::coefficient(const CyclicWord& gamma) const {
  auto it = entries.find(gamma);
  return it == entries.end() ? Rational(0) : it->second;
}

PlaquetteTable expand_action(const Quiver& q, const ActionSpec& f) {
  PlaquetteTable table;
  table.constant_by_vertex.assign(q.vertex_count(), Rational(0));
  std::map<CyclicWord, Rational> acc;
  for (std::size_t k = 0; k <= f.degree(); ++k) {
    const Rational fk = f.coefficient(k);
    if (fk == 0) continue;
    for (VertexIndex v = 0; v < q.vertex_count(); ++v) {
      for_each_closed_walk(q, v, k, [&](const EdgeWord& walk) {
        CyclicWord cls = CyclicWord::from_closed(walk);
        if (cls.empty()) {
          table.constant_by_vertex[v] += fk;
        } else {
          acc[cls] += fk;
        }
      });
    }
  }
  for (auto& [word, g] : acc) {
    if (g != 0) table.entries.emplace(word, g);
  }
  return table;
}

std::complex<double> evaluate_action_complex(const PlaquetteTable& table,
                                             std::span<const Eigen::MatrixXcd> unitaries,
                                             std::int64_t dim) {
  for (const auto& [gamma, g] : table.entries) {
    for (const Step& s : gamma.word().steps()) {
      if (s.edge >= unitaries.size() || unitaries[s.edge].size() == 0) {
        throw ActionError("no unitary assigned to edge index " + std::to_string(s.edge));
      }
    }
  }
  for (std::size_t e = 0; e < unitaries.size(); ++e) {
    const auto& u = unitaries[e];
    if (u.size() == 0) continue;
    if (u.rows() != dim || u.cols() != dim) {
      throw ActionError("unitary for edge index " + std::to_string(e) + " is not " +
                        std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (unitarity_defect(u) > 1e-8) {
      throw ActionError("matrix for edge index " + std::to_string(e) + " is not unitary");
    }
  }
  std::complex<double> total = to_double(table.constant()) * static_cast<double>(dim);
  for (const auto& [gamma, g] : table.entries) {
    total += to_double(g) * trace_holonomy(gamma.word(), unitaries, dim);
  }
  return total;
}

double evaluate_action(const PlaquetteTable& table, std::span<const Eigen::MatrixXcd> unitaries,
                       std::int64_t dim) {
  return evaluate_action_complex(table, unitaries, dim).real();
}

}  // namespace quiverloop
