#include "quiverloop/quiver.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "quiverloop/error.hpp"

namespace quiverloop {

EdgeWord EdgeWord::reversed() const {
  std::vector<Step> out;
  out.reserve(steps_.size());
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) out.push_back(it->inverse());
  return EdgeWord(std::move(out));
}

EdgeWord EdgeWord::rotated(std::size_t k) const {
  if (steps_.empty()) return *this;
  std::vector<Step> out(steps_);
  std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k % out.size()), out.end());
  return EdgeWord(std::move(out));
}

EdgeWord EdgeWord::subword(std::size_t begin, std::size_t end) const {
  return EdgeWord(std::vector<Step>(steps_.begin() + static_cast<std::ptrdiff_t>(begin),
                                    steps_.begin() + static_cast<std::ptrdiff_t>(end)));
}

EdgeWord EdgeWord::power(std::size_t exponent) const {
  EdgeWord out;
  for (std::size_t i = 0; i < exponent; ++i) out += *this;
  return out;
}

EdgeWord& EdgeWord::operator+=(const EdgeWord& other) {
  steps_.insert(steps_.end(), other.steps_.begin(), other.steps_.end());
  return *this;
}

Quiver::Quiver(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges)
    : vertices_(std::move(vertices)) {
  for (VertexIndex v = 0; v < vertices_.size(); ++v) {
    if (!vertex_lookup_.emplace(vertices_[v], v).second) {
      throw QuiverError("duplicate vertex id '" + vertices_[v] + "'");
    }
  }
  moves_.resize(vertices_.size());
  for (const EdgeSpec& spec : edges) {
    auto src = find_vertex(spec.source);
    auto dst = find_vertex(spec.target);
    if (!src) {
      throw QuiverError("edge '" + spec.id + "' has unknown source vertex '" + spec.source + "'");
    }
    if (!dst) {
      throw QuiverError("edge '" + spec.id + "' has unknown target vertex '" + spec.target + "'");
    }
    const EdgeIndex e = edges_.size();
    if (!edge_lookup_.emplace(spec.id, e).second) {
      throw QuiverError("duplicate edge id '" + spec.id + "'");
    }
    edges_.push_back({spec.id, *src, *dst});
    moves_[*src].push_back({{e, Orientation::kForward}, *dst});
    moves_[*dst].push_back({{e, Orientation::kBackward}, *src});
  }

  // Union-find on the underlying graph.
  std::vector<VertexIndex> parent(vertices_.size());
  std::iota(parent.begin(), parent.end(), VertexIndex{0});
  auto root = [&](VertexIndex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::size_t components = vertices_.size();
  for (const Edge& e : edges_) {
    auto a = root(e.source), b = root(e.target);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  connected_ = components == 1;
}

std::optional<VertexIndex> Quiver::find_vertex(std::string_view id) const {
  auto it = vertex_lookup_.find(std::string(id));
  if (it == vertex_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> Quiver::find_edge(std::string_view id) const {
  auto it = edge_lookup_.find(std::string(id));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

VertexIndex Quiver::vertex(std::string_view id) const {
  if (auto v = find_vertex(id)) return *v;
  throw QuiverError("unknown vertex '" + std::string(id) + "'");
}

EdgeIndex Quiver::edge_index(std::string_view id) const {
  if (auto e = find_edge(id)) return *e;
  throw QuiverError("unknown edge '" + std::string(id) + "'");
}

VertexIndex Quiver::departure(const Step& s) const {
  const Edge& e = edges_.at(s.edge);
  return s.orientation == Orientation::kForward ? e.source : e.target;
}

VertexIndex Quiver::arrival(const Step& s) const {
  const Edge& e = edges_.at(s.edge);
  return s.orientation == Orientation::kForward ? e.target : e.source;
}

void Quiver::check_composable(const EdgeWord& w) const {
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k].edge >= edges_.size()) {
      throw WordError("step " + std::to_string(k) + " references an unknown edge", k);
    }
    if (k > 0 && arrival(w[k - 1]) != departure(w[k])) {
      throw WordError("step " + std::to_string(k) + " (" + format(EdgeWord({w[k]})) +
                          ") does not start where step " + std::to_string(k - 1) + " ends",
                      k);
    }
  }
}

bool Quiver::is_closed(const EdgeWord& w) const {
  return w.empty() || departure(w[0]) == arrival(w[w.size() - 1]);
}

EdgeWord Quiver::parse_word(std::string_view text) const {
  std::istringstream in{std::string(text)};
  std::vector<Step> steps;
  std::string token;
  std::size_t position = 0;
  while (in >> token) {
    const char sign = token.back();
    if (token.size() < 2 || (sign != '+' && sign != '-')) {
      throw WordError("token " + std::to_string(position) + " '" + token +
                          "' must be an edge id followed by '+' or '-'",
                      position);
    }
    auto e = find_edge(std::string_view(token).substr(0, token.size() - 1));
    if (!e) {
      throw WordError("token " + std::to_string(position) + " '" + token +
                          "' references an unknown edge",
                      position);
    }
    steps.push_back({*e, sign == '+' ? Orientation::kForward : Orientation::kBackward});
    ++position;
  }
  EdgeWord w(std::move(steps));
  check_composable(w);
  return w;
}

std::string Quiver::format(const EdgeWord& w) const {
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0) out += ' ';
    out += edges_.at(w[k].edge).id;
    out += w[k].orientation == Orientation::kForward ? '+' : '-';
  }
  return out;
}

EdgeWord reduce_word(const EdgeWord& w) {
  std::vector<Step> stack;
  stack.reserve(w.size());
  for (const Step& s : w.steps()) {
    if (!stack.empty() && stack.back().cancels(s)) {
      stack.pop_back();
    } else {
      stack.push_back(s);
    }
  }
  return EdgeWord(std::move(stack));
}

bool is_reduced(const EdgeWord& w) {
  for (std::size_t k = 1; k < w.size(); ++k) {
    if (w[k - 1].cancels(w[k])) return false;
  }
  return true;
}

EdgeWord cyclically_reduce(const EdgeWord& w) {
  EdgeWord reduced = reduce_word(w);
  std::size_t begin = 0, end = reduced.size();
  while (end - begin >= 2 && reduced[end - 1].cancels(reduced[begin])) {
    ++begin;
    --end;
  }
  return reduced.subword(begin, end);
}

CyclicWord CyclicWord::from_closed(const EdgeWord& w) {
  EdgeWord r = cyclically_reduce(w);
  CyclicWord out;
  if (r.empty()) return out;
  std::size_t best = 0;
  const std::size_t n = r.size();
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const Step& a = r[(k + i) % n];
      const Step& b = r[(best + i) % n];
      if (a < b) {
        best = k;
        break;
      }
      if (b < a) break;
    }
  }
  out.canonical_ = r.rotated(best);
  return out;
}

CyclicWord cyclic_canonical(const Quiver& q, const EdgeWord& w) {
  q.check_composable(w);
  if (!q.is_closed(w)) throw WordError("word is not closed", w.size() - 1);
  return CyclicWord::from_closed(w);
}

void for_each_closed_walk(const Quiver& q, VertexIndex v, std::size_t length,
                          const std::function<void(const EdgeWord&)>& visit) {
  if (v >= q.vertex_count()) {
    throw QuiverError("unknown vertex index " + std::to_string(v));
  }
  if (length == 0) {
    visit(EdgeWord{});
    return;
  }
  // Explicit stack of (depth, next move index); the current walk lives in
  // `path` and `at` tracks the vertex reached after each step.
  std::vector<Step> path;
  std::vector<VertexIndex> at{v};
  std::vector<std::size_t> cursor{0};
  path.reserve(length);
  while (!cursor.empty()) {
    const VertexIndex here = at.back();
    const auto moves = q.moves(here);
    std::size_t& next = cursor.back();
    if (next == moves.size()) {
      cursor.pop_back();
      at.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    const Quiver::Move& m = moves[next++];
    if (path.size() + 1 == length) {
      if (m.destination == v) {
        path.push_back(m.step);
        visit(EdgeWord(path));
        path.pop_back();
      }
      continue;
    }
    path.push_back(m.step);
    at.push_back(m.destination);
    cursor.push_back(0);
  }
}

std::vector<EdgeWord> enumerate_closed_walks(const Quiver& q, VertexIndex v, std::size_t length) {
  std::vector<EdgeWord> out;
  for_each_closed_walk(q, v, length, [&](const EdgeWord& w) { out.push_back(w); });
  return out;
}

}  // namespace quiverloop
