#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace quiverloop {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

// Edge as given in the job file: opaque string ids.
struct EdgeSpec {
  std::string id;
  std::string source;
  std::string target;
};

struct Edge {
  std::string id;
  VertexIndex source;
  VertexIndex target;

  bool is_self_loop() const { return source == target; }
};

enum class Orientation : std::int8_t { kForward = 1, kBackward = -1 };

inline Orientation flip(Orientation o) {
  return o == Orientation::kForward ? Orientation::kBackward : Orientation::kForward;
}

// One traversal of an edge of the underlying graph. Ordered by edge index,
// then forward before backward; this is the order used for canonical
// rotations.
struct Step {
  EdgeIndex edge = 0;
  Orientation orientation = Orientation::kForward;

  Step inverse() const { return {edge, flip(orientation)}; }
  bool cancels(const Step& next) const {
    return edge == next.edge && orientation != next.orientation;
  }

  friend bool operator==(const Step&, const Step&) = default;
  friend std::strong_ordering operator<=>(const Step& a, const Step& b) {
    if (auto c = a.edge <=> b.edge; c != 0) return c;
    auto rank = [](Orientation o) { return o == Orientation::kForward ? 0 : 1; };
    return rank(a.orientation) <=> rank(b.orientation);
  }
};

// A sequence of steps. Composability depends on the quiver, so it is
// checked by Quiver::check_composable rather than on construction.
class EdgeWord {
 public:
  EdgeWord() = default;
  explicit EdgeWord(std::vector<Step> steps) : steps_(std::move(steps)) {}

  std::span<const Step> steps() const { return steps_; }
  const Step& operator[](std::size_t i) const { return steps_[i]; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  // Reverse order, every orientation flipped. Holonomy becomes the adjoint.
  EdgeWord reversed() const;
  // Cyclic rotation so that step k comes first.
  EdgeWord rotated(std::size_t k) const;
  EdgeWord subword(std::size_t begin, std::size_t end) const;
  EdgeWord power(std::size_t exponent) const;

  EdgeWord& operator+=(const EdgeWord& other);
  friend EdgeWord operator+(EdgeWord a, const EdgeWord& b) { return a += b; }

  friend bool operator==(const EdgeWord&, const EdgeWord&) = default;
  friend std::strong_ordering operator<=>(const EdgeWord& a, const EdgeWord& b) {
    return std::lexicographical_compare_three_way(a.steps_.begin(), a.steps_.end(),
                                                  b.steps_.begin(), b.steps_.end());
  }

 private:
  std::vector<Step> steps_;
};

// Directed multigraph. Vertex and edge ids are opaque strings mapped to
// dense indices in declaration order. Immutable after construction.
class Quiver {
 public:
  struct Move {
    Step step;
    VertexIndex destination;
  };

  Quiver() = default;
  // Throws QuiverError on unknown endpoints or duplicate ids.
  Quiver(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& vertex_id(VertexIndex v) const { return vertices_.at(v); }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool connected() const { return connected_; }

  std::optional<VertexIndex> find_vertex(std::string_view id) const;
  std::optional<EdgeIndex> find_edge(std::string_view id) const;
  VertexIndex vertex(std::string_view id) const;  // throws QuiverError
  EdgeIndex edge_index(std::string_view id) const;  // throws QuiverError

  VertexIndex departure(const Step& s) const;
  VertexIndex arrival(const Step& s) const;

  // Moves available from v on the underlying graph. A self-loop shows up
  // twice, once per orientation.
  std::span<const Move> moves(VertexIndex v) const { return moves_.at(v); }

  // Throws WordError naming the first step that does not continue from
  // its predecessor.
  void check_composable(const EdgeWord& w) const;
  // Empty words count as closed.
  bool is_closed(const EdgeWord& w) const;

  // Whitespace-separated tokens "<edge-id>+" / "<edge-id>-". Checks
  // composability and reports the failing token position.
  EdgeWord parse_word(std::string_view text) const;
  std::string format(const EdgeWord& w) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, VertexIndex> vertex_lookup_;
  std::unordered_map<std::string, EdgeIndex> edge_lookup_;
  std::vector<std::vector<Move>> moves_;
  bool connected_ = false;
};

// Free reduction: repeatedly drop adjacent (e,+)(e,-) and (e,-)(e,+).
EdgeWord reduce_word(const EdgeWord& w);
bool is_reduced(const EdgeWord& w);

// Free reduction followed by cancellation across the wrap-around.
EdgeWord cyclically_reduce(const EdgeWord& w);

// Traced-loop class: cyclically reduced, minimal rotation.
class CyclicWord {
 public:
  CyclicWord() = default;

  // Precondition: w is closed on its quiver. Use cyclic_canonical for the
  // checked entry point.
  static CyclicWord from_closed(const EdgeWord& w);

  const EdgeWord& word() const { return canonical_; }
  std::size_t size() const { return canonical_.size(); }
  bool empty() const { return canonical_.empty(); }
  CyclicWord reversed() const { return from_closed(canonical_.reversed()); }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend std::strong_ordering operator<=>(const CyclicWord&, const CyclicWord&) = default;

 private:
  EdgeWord canonical_;
};

// Throws WordError if w is not closed.
CyclicWord cyclic_canonical(const Quiver& q, const EdgeWord& w);

// Every length-k closed walk at v on the underlying graph, in depth-first
// order. Throws QuiverError for an unknown vertex.
std::vector<EdgeWord> enumerate_closed_walks(const Quiver& q, VertexIndex v, std::size_t length);

// Same walks, streamed; avoids materialising the list.
void for_each_closed_walk(const Quiver& q, VertexIndex v, std::size_t length,
                          const std::function<void(const EdgeWord&)>& visit);

}  // namespace quiverloop
