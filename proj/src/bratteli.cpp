#include "quiverloop/bratteli.hpp"

#include <sstream>

#include "quiverloop/error.hpp"

namespace quiverloop {
namespace {

using Kind = NetworkError::Kind;

std::string tuple_string(const std::vector<std::int64_t>& v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ')';
  return out.str();
}

std::vector<std::int64_t> positive_tuple(const std::map<std::string, std::vector<std::int64_t>>& m,
                                         const std::string& vertex, const char* name) {
  auto it = m.find(vertex);
  if (it == m.end()) {
    throw NetworkError(Kind::kMissingData,
                       std::string("vertex '") + vertex + "' has no " + name + " tuple");
  }
  if (it->second.empty()) {
    throw NetworkError(Kind::kNonPositive,
                       std::string("vertex '") + vertex + "' has an empty " + name + " tuple");
  }
  for (auto x : it->second) {
    if (x <= 0) {
      throw NetworkError(Kind::kNonPositive, std::string("vertex '") + vertex + "': " + name +
                                                 " = " + tuple_string(it->second) +
                                                 " has a nonpositive entry");
    }
  }
  return it->second;
}

}  // namespace

BratteliNetwork validate_network(const Quiver& q, const RawNetwork& raw) {
  if (!q.connected()) {
    throw NetworkError(Kind::kDisconnected, "quiver is not connected");
  }
  BratteliNetwork b;
  b.quiver_ = q;
  for (VertexIndex v = 0; v < q.vertex_count(); ++v) {
    const std::string& id = q.vertex_id(v);
    auto n = positive_tuple(raw.n, id, "n");
    auto r = positive_tuple(raw.r, id, "r");
    std::int64_t l = static_cast<std::int64_t>(n.size());
    if (auto it = raw.l.find(id); it != raw.l.end()) {
      if (it->second <= 0) {
        throw NetworkError(Kind::kNonPositive, "vertex '" + id + "': l must be positive");
      }
      l = it->second;
    }
    if (static_cast<std::int64_t>(n.size()) != l || static_cast<std::int64_t>(r.size()) != l) {
      throw NetworkError(Kind::kShapeMismatch, "vertex '" + id + "': l = " + std::to_string(l) +
                                                   " but n has " + std::to_string(n.size()) +
                                                   " and r has " + std::to_string(r.size()) +
                                                   " entries");
    }
    b.n_.push_back(std::move(n));
    b.r_.push_back(std::move(r));
  }

  for (EdgeIndex e = 0; e < q.edge_count(); ++e) {
    const Edge& edge = q.edge(e);
    auto it = raw.C.find(edge.id);
    if (it == raw.C.end()) {
      throw NetworkError(Kind::kMissingData, "edge '" + edge.id + "' has no C matrix");
    }
    const IntMatrix& c = it->second;
    const auto& n_src = b.n_[edge.source];
    const auto& r_src = b.r_[edge.source];
    const auto& n_dst = b.n_[edge.target];
    const auto& r_dst = b.r_[edge.target];
    const std::size_t rows = n_src.size(), cols = n_dst.size();
    bool shape_ok = c.size() == rows;
    for (const auto& row : c) shape_ok = shape_ok && row.size() == cols;
    if (!shape_ok) {
      throw NetworkError(Kind::kShapeMismatch, "edge '" + edge.id + "': C must be " +
                                                   std::to_string(rows) + "x" +
                                                   std::to_string(cols));
    }
    for (const auto& row : c) {
      for (auto x : row) {
        if (x < 0) {
          throw NetworkError(Kind::kNonPositive,
                             "edge '" + edge.id + "': C has a negative entry");
        }
      }
    }
    std::vector<std::int64_t> c_r(rows, 0), ct_n(cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        c_r[i] += c[i][j] * r_dst[j];
        ct_n[j] += c[i][j] * n_src[i];
      }
    }
    if (c_r != r_src) {
      throw NetworkError(Kind::kSourceMultiplicity,
                         "edge '" + edge.id + "': r_s(e) = " + tuple_string(r_src) +
                             " but C_e r_t(e) = " + tuple_string(c_r));
    }
    if (ct_n != n_dst) {
      throw NetworkError(Kind::kTargetBlockSizes,
                         "edge '" + edge.id + "': n_t(e) = " + tuple_string(n_dst) +
                             " but C_e^T n_s(e) = " + tuple_string(ct_n));
    }
    b.c_.push_back(c);
  }

  for (VertexIndex v = 0; v < q.vertex_count(); ++v) {
    std::int64_t pairing = 0;
    for (std::size_t j = 0; j < b.n_[v].size(); ++j) pairing += b.n_[v][j] * b.r_[v][j];
    if (v == 0) {
      b.dimension_ = pairing;
    } else if (pairing != b.dimension_) {
      throw NetworkError(Kind::kNonConstantDimension,
                         "<n, r> = " + std::to_string(pairing) + " at vertex '" + q.vertex_id(v) +
                             "' but " + std::to_string(b.dimension_) + " at vertex '" +
                             q.vertex_id(0) + "'");
    }
  }
  return b;
}

std::int64_t representation_dimension(const BratteliNetwork& b) { return b.dimension(); }

EnsembleDescriptor dirac_ensemble(const BratteliNetwork& b) {
  EnsembleDescriptor out;
  const Quiver& q = b.quiver();
  for (EdgeIndex e = 0; e < q.edge_count(); ++e) {
    const VertexIndex t = q.edge(e).target;
    std::vector<BlockSpec> blocks;
    for (std::size_t j = 0; j < b.summands(t); ++j) {
      blocks.push_back({b.block_sizes(t)[j], b.multiplicities(t)[j]});
    }
    out.edges.push_back(std::move(blocks));
  }
  return out;
}

RawNetwork uniform_network(const Quiver& q, std::int64_t dim) {
  RawNetwork raw;
  for (VertexIndex v = 0; v < q.vertex_count(); ++v) {
    raw.l[q.vertex_id(v)] = 1;
    raw.n[q.vertex_id(v)] = {dim};
    raw.r[q.vertex_id(v)] = {1};
  }
  for (const Edge& e : q.edges()) raw.C[e.id] = {{1}};
  return raw;
}

}  // namespace quiverloop
