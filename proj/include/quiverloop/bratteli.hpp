#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quiverloop/quiver.hpp"

namespace quiverloop {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

// Unvalidated network data keyed by the quiver's string ids. `l` may be
// omitted per vertex, in which case it is read off the tuple lengths.
struct RawNetwork {
  std::map<std::string, std::int64_t> l;
  std::map<std::string, std::vector<std::int64_t>> n;
  std::map<std::string, std::vector<std::int64_t>> r;
  // Row-major, rows indexed by summands of the source vertex.
  std::map<std::string, IntMatrix> C;
};

// One unitary-group factor U(size), repeated `multiplicity` times along
// the diagonal of the edge unitary.
struct BlockSpec {
  std::int64_t size;
  std::int64_t multiplicity;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

// Per edge, in edge-index order.
struct EnsembleDescriptor {
  std::vector<std::vector<BlockSpec>> edges;
};

class BratteliNetwork {
 public:
  const Quiver& quiver() const { return quiver_; }
  std::size_t summands(VertexIndex v) const { return n_.at(v).size(); }
  const std::vector<std::int64_t>& block_sizes(VertexIndex v) const { return n_.at(v); }
  const std::vector<std::int64_t>& multiplicities(VertexIndex v) const { return r_.at(v); }
  const IntMatrix& transition(EdgeIndex e) const { return c_.at(e); }
  std::int64_t dimension() const { return dimension_; }

 private:
  friend BratteliNetwork validate_network(const Quiver&, const RawNetwork&);

  Quiver quiver_;
  std::vector<std::vector<std::int64_t>> n_;
  std::vector<std::vector<std::int64_t>> r_;
  std::vector<IntMatrix> c_;
  std::int64_t dimension_ = 0;
};

// Checks both transition equations on every edge and that <n_v, r_v> is
// the same at every vertex. Throws NetworkError.
BratteliNetwork validate_network(const Quiver& q, const RawNetwork& raw);

std::int64_t representation_dimension(const BratteliNetwork& b);

EnsembleDescriptor dirac_ensemble(const BratteliNetwork& b);

// l = 1, n = (dim), r = (1), C_e = (1) everywhere: one full U(dim) per edge.
RawNetwork uniform_network(const Quiver& q, std::int64_t dim);

}  // namespace quiverloop
