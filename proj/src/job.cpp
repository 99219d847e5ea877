#include "quiverloop/job.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "quiverloop/error.hpp"

namespace quiverloop {

using nlohmann::json;

namespace {

// Line and column of every value in a document that nlohmann has already
// accepted, keyed by JSON pointer. nlohmann keeps no source positions, so
// this second pass exists only to anchor schema errors.
class Locator {
 public:
  explicit Locator(std::string_view text) { scan(text); }

  std::string where(std::string pointer) const {
    for (;;) {
      auto it = positions_.find(pointer);
      if (it != positions_.end()) {
        return std::to_string(it->second.first) + ":" + std::to_string(it->second.second);
      }
      if (pointer.empty()) return "1:1";
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  struct Frame {
    bool object;
    std::string key;
    std::size_t index = 0;
  };

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  std::string pointer() const {
    std::string p;
    for (const Frame& f : stack_) p += "/" + (f.object ? escape(f.key) : std::to_string(f.index));
    return p;
  }

  void scan(std::string_view t) {
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&] {
      if (t[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(t[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    };
    auto read_string = [&] {
      std::string s;
      advance();  // opening quote
      while (i < t.size() && t[i] != '"') {
        if (t[i] == '\\') {
          advance();
          // Escapes only matter for key matching; keep the escaped char.
        }
        if (i < t.size()) {
          s += t[i];
          advance();
        }
      }
      if (i < t.size()) advance();
      return s;
    };
    bool expect_key = false;
    while (i < t.size()) {
      const char c = t[i];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ':') {
        advance();
      } else if (c == ',') {
        if (!stack_.empty()) {
          if (stack_.back().object) expect_key = true;
          else ++stack_.back().index;
        }
        advance();
      } else if (c == '}' || c == ']') {
        if (!stack_.empty()) stack_.pop_back();
        expect_key = false;
        advance();
      } else if (expect_key && c == '"') {
        stack_.back().key = read_string();
        expect_key = false;
      } else {
        positions_.emplace(pointer(), std::make_pair(line, col));
        if (c == '{') {
          stack_.push_back({true, ""});
          expect_key = true;
          advance();
        } else if (c == '[') {
          stack_.push_back({false, ""});
          advance();
        } else if (c == '"') {
          read_string();
        } else {
          while (i < t.size() && std::string_view(" \t\r\n,]}").find(t[i]) == std::string_view::npos) {
            advance();
          }
        }
      }
    }
  }

  std::vector<Frame> stack_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> positions_;
};

class Reader {
 public:
  Reader(std::string_view text, std::string_view source) : locator_(text), source_(source) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw JobError(prefix(pointer) + message);
  }

  std::string prefix(const std::string& pointer) const {
    return source_ + ":" + locator_.where(pointer) + ": ";
  }

  const json& member(const json& obj, const std::string& base, const char* key) const {
    if (!obj.is_object()) fail(base, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(base, std::string("missing \"") + key + "\"");
    return *it;
  }

  std::string string(const json& v, const std::string& pointer) const {
    if (!v.is_string()) fail(pointer, "expected a string");
    return v.get<std::string>();
  }

  std::int64_t integer(const json& v, const std::string& pointer) const {
    if (v.is_number_integer()) {
      if (v.is_number_unsigned() &&
          v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        fail(pointer, "integer out of range");
      }
      return v.get<std::int64_t>();
    }
    fail(pointer, "expected an integer");
  }

  std::vector<std::int64_t> integers(const json& v, const std::string& pointer) const {
    if (!v.is_array()) fail(pointer, "expected an array of integers");
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], pointer + "/" + std::to_string(i)));
    return out;
  }

  Rational rational(const json& v, const std::string& pointer) const {
    try {
      if (v.is_number_integer()) return Rational(integer(v, pointer));
      if (v.is_number_float()) return parse_rational(format_double(v.get<double>()));
      if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const JobError&) {
      throw;
    } catch (const Error& e) {
      fail(pointer, e.what());
    }
    fail(pointer, "expected a number or a \"p/q\" string");
  }

  template <class F>
  auto located(const std::string& pointer, F&& body) const {
    try {
      return body();
    } catch (const NetworkError& e) {
      throw NetworkError(e.kind(), prefix(pointer) + e.what());
    } catch (const WordError& e) {
      throw WordError(prefix(pointer) + e.what(), e.position());
    } catch (const QuiverError& e) {
      throw QuiverError(prefix(pointer) + e.what());
    }
  }

 private:
  Locator locator_;
  std::string source_;
};

std::string key_pointer(const std::string& base, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return base + "/" + escaped;
}

json rational_json(const Rational& r) { return to_string(r); }

json word_json(const Quiver& q, const CyclicWord& w) { return q.format(w.word()); }

}  // namespace

Job parse_job(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw JobError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                   ": malformed JSON: " + what);
  }

  Reader rd(text, source);
  if (!root.is_object()) rd.fail("", "job file must be a JSON object");

  Job job;
  job.source = source;

  // Quiver.
  std::string qbase;
  const json* qobj = &root;
  if (root.contains("quiver")) {
    qbase = "/quiver";
    qobj = &root["quiver"];
  }
  const json& vertices = rd.member(*qobj, qbase, "vertices");
  if (!vertices.is_array()) rd.fail(qbase + "/vertices", "expected an array of vertex ids");
  std::vector<std::string> vids;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    vids.push_back(rd.string(vertices[i], qbase + "/vertices/" + std::to_string(i)));
  }
  const json& edges = rd.member(*qobj, qbase, "edges");
  if (!edges.is_array()) rd.fail(qbase + "/edges", "expected an array of edges");
  std::vector<EdgeSpec> especs;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = qbase + "/edges/" + std::to_string(i);
    EdgeSpec s;
    s.id = rd.string(rd.member(edges[i], p, "id"), p + "/id");
    s.source = rd.string(rd.member(edges[i], p, "src"), p + "/src");
    s.target = rd.string(rd.member(edges[i], p, "dst"), p + "/dst");
    if (std::find(vids.begin(), vids.end(), s.source) == vids.end()) {
      rd.fail(p + "/src", "unknown vertex '" + s.source + "'");
    }
    if (std::find(vids.begin(), vids.end(), s.target) == vids.end()) {
      rd.fail(p + "/dst", "unknown vertex '" + s.target + "'");
    }
    especs.push_back(std::move(s));
  }
  job.quiver = rd.located(qbase.empty() ? "/edges" : qbase, [&] { return Quiver(vids, especs); });

  // Network.
  const json& net = rd.member(root, "", "network");
  if (!net.is_object()) rd.fail("/network", "expected an object");
  RawNetwork raw;
  auto section = [&](const char* key, bool required) -> const json* {
    auto it = net.find(key);
    if (it == net.end()) {
      if (required) rd.fail("/network", std::string("missing \"") + key + "\"");
      return nullptr;
    }
    if (!it->is_object()) rd.fail(std::string("/network/") + key, "expected an object keyed by id");
    return &*it;
  };
  if (const json* l = section("l", false)) {
    for (const auto& [k, v] : l->items()) raw.l[k] = rd.integer(v, key_pointer("/network/l", k));
  }
  for (const auto& [k, v] : section("n", true)->items()) {
    raw.n[k] = rd.integers(v, key_pointer("/network/n", k));
  }
  for (const auto& [k, v] : section("r", true)->items()) {
    raw.r[k] = rd.integers(v, key_pointer("/network/r", k));
  }
  for (const auto& [k, v] : section("C", true)->items()) {
    const std::string p = key_pointer("/network/C", k);
    if (!v.is_array()) rd.fail(p, "expected a matrix (array of rows)");
    IntMatrix m;
    for (std::size_t i = 0; i < v.size(); ++i) m.push_back(rd.integers(v[i], p + "/" + std::to_string(i)));
    raw.C[k] = std::move(m);
  }
  job.network = rd.located("/network", [&] { return validate_network(job.quiver, raw); });

  // Action.
  const json& action = rd.member(root, "", "action");
  const json& f = rd.member(action, "/action", "f");
  if (!f.is_array() || f.empty()) rd.fail("/action/f", "expected a nonempty coefficient array");
  std::vector<Rational> coeffs;
  for (std::size_t i = 0; i < f.size(); ++i) coeffs.push_back(rd.rational(f[i], "/action/f/" + std::to_string(i)));
  job.action = ActionSpec(std::move(coeffs));

  // Wilson loops.
  if (auto it = root.find("loops"); it != root.end()) {
    if (!it->is_array()) rd.fail("/loops", "expected an array of words");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = "/loops/" + std::to_string(i);
      const std::string text_word = rd.string((*it)[i], p);
      job.loops.push_back(rd.located(p, [&] {
        EdgeWord w = job.quiver.parse_word(text_word);
        if (!job.quiver.is_closed(w)) throw WordError("loop is not closed", w.size() - 1);
        return w;
      }));
    }
  }
  return job;
}

std::string builtin_triangle_json(std::int64_t dim, const Rational& x) {
  json j;
  j["vertices"] = {"v1", "v2", "v3"};
  j["edges"] = json::array({{{"id", "e1"}, {"src", "v1"}, {"dst", "v2"}},
                            {{"id", "e2"}, {"src", "v2"}, {"dst", "v3"}},
                            {{"id", "e3"}, {"src", "v3"}, {"dst", "v1"}}});
  json n, r, c, l;
  for (const char* v : {"v1", "v2", "v3"}) {
    l[v] = 1;
    n[v] = {dim};
    r[v] = {1};
  }
  for (const char* e : {"e1", "e2", "e3"}) c[e] = {{1}};
  j["network"] = {{"l", l}, {"n", n}, {"r", r}, {"C", c}};
  j["action"] = {{"f", {0, 0, 0, to_string(Rational(x / 3))}}};
  j["loops"] = {"e1+ e2+ e3+", "e1+ e2+ e3+ e1+ e2+ e3+"};
  return j.dump(2) + "\n";
}

Job load_job(const std::string& path_or_builtin) {
  if (path_or_builtin == "builtin:triangle") {
    return parse_job(builtin_triangle_json(), path_or_builtin);
  }
  if (path_or_builtin.rfind("builtin:", 0) == 0) {
    throw JobError("unknown builtin job '" + path_or_builtin + "' (available: builtin:triangle)");
  }
  std::ifstream in(path_or_builtin, std::ios::binary);
  if (!in) throw JobError("cannot open job file '" + path_or_builtin + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_job(buf.str(), path_or_builtin);
}

void override_dimension(Job& job, std::int64_t dim) {
  if (dim < 1) throw JobError("dimension override must be at least 1");
  const Quiver& q = job.quiver;
  for (VertexIndex v = 0; v < q.vertex_count(); ++v) {
    if (job.network.summands(v) != 1 || job.network.multiplicities(v).front() != 1) {
      throw JobError("dimension override needs l = 1 and r = (1) at every vertex; vertex '" +
                     q.vertex_id(v) + "' does not qualify");
    }
  }
  job.network = validate_network(q, uniform_network(q, dim));
}

json to_json(const Quiver& q, const PlaquetteTable& table) {
  json j;
  j["constant"] = rational_json(table.constant());
  json per_vertex = json::object();
  for (VertexIndex v = 0; v < table.constant_by_vertex.size(); ++v) {
    per_vertex[q.vertex_id(v)] = rational_json(table.constant_by_vertex[v]);
  }
  j["constant_by_vertex"] = per_vertex;
  json entries = json::array();
  for (const auto& [gamma, g] : table.entries) {
    entries.push_back({{"word", word_json(q, gamma)}, {"length", gamma.size()}, {"coefficient", rational_json(g)}});
  }
  j["entries"] = entries;
  return j;
}

json to_json(const Quiver& q, const LoopEquation& eq) {
  json j;
  j["root"] = q.edge(eq.root).id;
  j["loop"] = q.format(eq.loop);
  j["mode"] = eq.mode == LoopMode::kLargeN ? "large-n" : "finite-n";
  json lhs = json::array(), rhs = json::array();
  for (const auto& t : eq.lhs) {
    lhs.push_back({{"coefficient", t.coefficient},
                   {"words", {word_json(q, t.first), word_json(q, t.second)}}});
  }
  for (const auto& t : eq.rhs) {
    rhs.push_back({{"coefficient", rational_json(t.coefficient())},
                   {"multiplicity", t.multiplicity},
                   {"plaquette", word_json(q, t.plaquette)},
                   {"words", {word_json(q, t.word)}}});
  }
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  return j;
}

json to_json(const Quiver& q, const MomentEquation& eq) {
  auto side = [&](const std::vector<MomentTerm>& terms) {
    json out = json::array();
    for (const auto& t : terms) {
      json m = json::array();
      for (const auto& w : t.moments) m.push_back(word_json(q, w));
      json term = {{"coefficient", rational_json(t.coefficient)}, {"moments", m}};
      term["coupling"] = t.coupling ? json(word_json(q, *t.coupling)) : json(nullptr);
      out.push_back(term);
    }
    return out;
  };
  return {{"lhs", side(eq.lhs)}, {"rhs", side(eq.rhs)}};
}

json moment_table_json(std::size_t count) {
  json out = json::array();
  for (std::size_t n = 0; n < count; ++n) {
    json terms = json::array();
    const LaurentPolynomial m = moment(n);
    for (const auto& [mono, c] : m.terms()) {
      json cj;
      if (c >= std::numeric_limits<std::int64_t>::min() && c <= std::numeric_limits<std::int64_t>::max()) {
        cj = static_cast<std::int64_t>(c);
      } else {
        cj = c.str();
      }
      terms.push_back({{"c", cj}, {"a", mono.y_power}, {"b", mono.inverse_x_power}});
    }
    out.push_back({{"n", n}, {"terms", terms}});
  }
  return out;
}

json to_json(const EstimatorResult& r) {
  json j;
  j["mean"] = {r.mean.real(), r.mean.imag()};
  j["stderr"] = r.std_error;
  j["stderr_imag"] = r.std_error_imag;
  j["samples"] = r.samples;
  j["effective_samples"] = r.effective_samples;
  j["acceptance"] = r.acceptance ? json(*r.acceptance) : json(nullptr);
  j["step_size"] = r.step_size ? json(*r.step_size) : json(nullptr);
  return j;
}

json to_json(const EnsembleDescriptor& d, const Quiver& q) {
  json out = json::array();
  for (EdgeIndex e = 0; e < d.edges.size(); ++e) {
    json blocks = json::array();
    for (const auto& b : d.edges[e]) blocks.push_back({{"size", b.size}, {"multiplicity", b.multiplicity}});
    out.push_back({{"edge", q.edge(e).id}, {"blocks", blocks}});
  }
  return out;
}

}  // namespace quiverloop
