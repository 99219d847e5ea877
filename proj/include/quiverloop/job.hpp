#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "quiverloop/action.hpp"
#include "quiverloop/bratteli.hpp"
#include "quiverloop/bootstrap.hpp"
#include "quiverloop/haar_mc.hpp"
#include "quiverloop/loop_equations.hpp"
#include "quiverloop/quiver.hpp"

namespace quiverloop {

// A parsed and validated job file:
//
//   {"vertices": [...], "edges": [{"id", "src", "dst"}, ...],
//    "network": {"l": {...}, "n": {...}, "r": {...}, "C": {...}},
//    "action": {"f": [f0, f1, ...]},
//    "loops": ["e1+ e2+ e3+", ...]}
//
// The quiver keys may also sit inside a "quiver" object. Coefficients are
// integers, decimals or "p/q" strings.
struct Job {
  Quiver quiver;
  BratteliNetwork network;
  ActionSpec action;
  std::vector<EdgeWord> loops;
  std::string source;
};

// Throws JobError with "source:line:column: message" for malformed JSON
// or schema errors, and passes domain errors (QuiverError, NetworkError,
// WordError) through with the same location prefix.
Job parse_job(std::string_view text, std::string_view source = "<job>");

// A path, or "builtin:triangle".
Job load_job(const std::string& path_or_builtin);

// The triangle quiver v1 -> v2 -> v3 -> v1 with one U(dim) per edge and
// f(t) = (x/3) t^3, so that the 3-cycle and its reverse both carry x.
std::string builtin_triangle_json(std::int64_t dim = 3, const Rational& x = Rational(1, 5));

// Replaces the network by one full U(dim) per edge. Only allowed when the
// job's network already has l = 1 and r = (1) everywhere.
void override_dimension(Job& job, std::int64_t dim);

nlohmann::json to_json(const Quiver& q, const PlaquetteTable& table);
nlohmann::json to_json(const Quiver& q, const LoopEquation& eq);
nlohmann::json to_json(const Quiver& q, const MomentEquation& eq);
nlohmann::json moment_table_json(std::size_t count);
nlohmann::json to_json(const EstimatorResult& r);
nlohmann::json to_json(const EnsembleDescriptor& d, const Quiver& q);

}  // namespace quiverloop
