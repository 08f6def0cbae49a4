#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "structura/axioms.hpp"
#include "structura/core.hpp"

namespace structura::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// A defect in an input file. `code()` distinguishes malformed JSON from
/// structural violations so callers can report precisely.
class ParseError : public Error {
 public:
  enum class Code {
    io_error,        // file could not be read or written
    bad_json,        // text is not valid JSON
    bad_type,        // a field has the wrong JSON type
    missing_field,   // a required field is absent
    duplicate_point, // a point name occurs twice where it may not
    unknown_point,   // a referenced point is not in `points`
    bad_rational,    // a rational literal failed to parse
    negative_weight, // a weight is negative
    bad_eta,         // eta lies outside [0, 1]
    bad_budget,      // E0 is not positive
    overlapping_sets,// R and I share a point
    duplicate_pair,  // a relation pair is listed twice
    bad_map,         // the retraction maps a point outside R
  };

  ParseError(Code c, const std::string& msg) : Error("parse error: " + msg), code_(c) {}
  [[nodiscard]] Code code() const { return code_; }

 private:
  Code code_;
};

namespace detail {

inline const json& require_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end())
    throw ParseError(ParseError::Code::missing_field,
                     std::string("missing required field '") + name + "'");
  return *it;
}

inline std::string require_string(const json& j, const std::string& where) {
  if (!j.is_string())
    throw ParseError(ParseError::Code::bad_type, where + " must be a JSON string");
  return j.get<std::string>();
}

inline Rational parse_rational_field(const json& j, const std::string& where) {
  std::string text = require_string(j, where);
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(ParseError::Code::bad_rational,
                     where + ": '" + text + "' is not a rational literal (" + e.what() + ")");
  }
}

inline std::size_t require_point(const Universe& u, const json& j, const std::string& where) {
  std::string label = require_string(j, where);
  auto idx = u.find(label);
  if (!idx)
    throw ParseError(ParseError::Code::unknown_point,
                     where + ": unknown point '" + label + "'");
  return *idx;
}

}  // namespace detail

/// Builds a datum from its JSON object form. Field order is irrelevant on
/// input; see `datum_to_json` for the canonical output order. `weights` and
/// `pi` may be sparse: omitted weights default to 0 and omitted map entries
/// default to the identity.
inline Datum datum_from_json(const json& j) {
  using Code = ParseError::Code;
  if (!j.is_object()) throw ParseError(Code::bad_type, "top level must be a JSON object");

  const json& jpoints = detail::require_field(j, "points");
  if (!jpoints.is_array() || jpoints.empty())
    throw ParseError(Code::bad_type, "'points' must be a non-empty array of names");
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& p : jpoints) {
    std::string label = detail::require_string(p, "entry of 'points'");
    if (!seen.insert(label).second)
      throw ParseError(Code::duplicate_point, "point '" + label + "' listed twice in 'points'");
    labels.push_back(std::move(label));
  }
  auto u = Universe::make(labels);

  const json& jweights = detail::require_field(j, "weights");
  if (!jweights.is_object()) throw ParseError(Code::bad_type, "'weights' must be an object");
  std::vector<Rational> w(u->size(), Rational(0));
  for (const auto& [key, val] : jweights.items()) {
    auto idx = u->find(key);
    if (!idx)
      throw ParseError(Code::unknown_point, "'weights' names unknown point '" + key + "'");
    Rational r = detail::parse_rational_field(val, "weight of '" + key + "'");
    if (r.is_negative())
      throw ParseError(Code::negative_weight, "weight of '" + key + "' is negative");
    w[*idx] = std::move(r);
  }

  auto read_point_list = [&](const char* name) {
    const json& arr = detail::require_field(j, name);
    if (!arr.is_array())
      throw ParseError(Code::bad_type, std::string("'") + name + "' must be an array of names");
    std::vector<bool> mask(u->size(), false);
    for (const auto& p : arr) {
      std::size_t idx = detail::require_point(*u, p, std::string("entry of '") + name + "'");
      if (mask[idx])
        throw ParseError(Code::duplicate_point, "point '" + u->label(idx) +
                                                    "' listed twice in '" + name + "'");
      mask[idx] = true;
    }
    return Subset(u, mask);
  };
  Subset r = read_point_list("R");
  Subset i = read_point_list("I");
  Subset overlap = r.intersect(i);
  if (!overlap.empty())
    throw ParseError(Code::overlapping_sets,
                     "point '" + u->label(overlap.members().front()) + "' is in both R and I");

  const json& jpi = detail::require_field(j, "pi");
  if (!jpi.is_object()) throw ParseError(Code::bad_type, "'pi' must be an object");
  std::vector<std::size_t> map(u->size());
  for (std::size_t k = 0; k < map.size(); ++k) map[k] = k;
  for (const auto& [key, val] : jpi.items()) {
    auto src = u->find(key);
    if (!src) throw ParseError(Code::unknown_point, "'pi' names unknown point '" + key + "'");
    map[*src] = detail::require_point(*u, val, "image of '" + key + "' under pi");
  }
  for (std::size_t x = 0; x < map.size(); ++x)
    if (!r.contains(map[x]))
      throw ParseError(Code::bad_map, "pi maps '" + u->label(x) + "' to '" + u->label(map[x]) +
                                          "', which is outside R");

  const json& jg = detail::require_field(j, "G");
  if (!jg.is_array()) throw ParseError(Code::bad_type, "'G' must be an array of pairs");
  Relation g(u);
  for (const auto& pr : jg) {
    if (!pr.is_array() || pr.size() != 2)
      throw ParseError(Code::bad_type, "each entry of 'G' must be a two-element array");
    std::size_t a = detail::require_point(*u, pr[0], "first member of a 'G' pair");
    std::size_t b = detail::require_point(*u, pr[1], "second member of a 'G' pair");
    if (g.contains(a, b))
      throw ParseError(Code::duplicate_pair, "pair (" + u->label(a) + ", " + u->label(b) +
                                                 ") listed twice in 'G'");
    g.set(a, b, true);
  }

  Rational eta = detail::parse_rational_field(detail::require_field(j, "eta"), "'eta'");
  if (eta.is_negative() || eta > 1)
    throw ParseError(Code::bad_eta, "'eta' must lie in [0, 1], got " + eta.str());
  Rational e0 = detail::parse_rational_field(detail::require_field(j, "E0"), "'E0'");
  if (!e0.is_positive())
    throw ParseError(Code::bad_budget, "'E0' must be positive, got " + e0.str());

  return Datum(u, Charge(u, std::move(w)), r, i, Retraction(u, r, std::move(map)), g,
               std::move(e0), std::move(eta));
}

/// Canonical JSON form: fields in the order points, weights, R, I, pi, G,
/// eta, E0; every point carries an explicit weight and map entry; relation
/// pairs in row-major point order. `datum_from_json` inverts this exactly.
inline json datum_to_json(const Datum& d) {
  const Universe& u = *d.universe();
  json j = json::object();
  j["points"] = json::array();
  for (const auto& label : u.labels()) j["points"].push_back(label);
  j["weights"] = json::object();
  for (std::size_t i = 0; i < u.size(); ++i) j["weights"][u.label(i)] = d.mu().weight(i).str();
  j["R"] = d.R().member_labels();
  j["I"] = d.I().member_labels();
  j["pi"] = json::object();
  for (std::size_t i = 0; i < u.size(); ++i) j["pi"][u.label(i)] = u.label(d.pi().map(i));
  j["G"] = json::array();
  for (auto [a, b] : d.G().pairs()) j["G"].push_back(json::array({u.label(a), u.label(b)}));
  j["eta"] = d.eta().str();
  j["E0"] = d.E0().str();
  return j;
}

inline Datum parse_datum(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseError::Code::bad_json, e.what());
  }
  return datum_from_json(j);
}

inline std::string serialize_datum(const Datum& d) { return datum_to_json(d).dump(2) + "\n"; }

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(ParseError::Code::io_error, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ParseError(ParseError::Code::io_error, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ParseError(ParseError::Code::io_error, "write to '" + path + "' failed");
}

inline Datum read_datum(const std::string& path) { return parse_datum(read_text_file(path)); }

inline void write_datum(const Datum& d, const std::string& path) {
  write_text_file(path, serialize_datum(d));
}

/// FNV-1a 64-bit content digest, rendered as 16 hex digits. Reports embed it
/// so a verdict can be matched to the exact input bytes it was computed from.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

inline json verdict_to_json(const Verdict& v, const Universe& u) {
  json j = json::object();
  j["holds"] = v.holds;
  if (v.witness.kind != Witness::Kind::none) j["witness"] = v.witness.describe(u);
  if (v.lhs) j["lhs"] = v.lhs->str();
  if (v.rhs) j["rhs"] = v.rhs->str();
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

/// Full check report for one datum: tool identity, input digest, the five
/// per-law verdicts, and the combined admissibility flag.
inline json report_to_json(const axioms::AxiomReport& rep, const Universe& u,
                           std::string_view input_bytes) {
  json j = json::object();
  j["tool"] = "structura";
  j["version"] = kToolVersion;
  j["input_digest"] = "fnv1a64:" + hex64(fnv1a64(input_bytes));
  json v = json::object();
  v["law_I"] = verdict_to_json(rep.axiom_I, u);
  v["law_II"] = verdict_to_json(rep.axiom_II, u);
  v["law_III_a"] = verdict_to_json(rep.axiom_III_a, u);
  v["law_III_b"] = verdict_to_json(rep.axiom_III_b, u);
  v["law_III_c"] = verdict_to_json(rep.axiom_III_c, u);
  j["verdicts"] = std::move(v);
  j["admissible"] = rep.admissible;
  return j;
}

/// Point map file for morphisms: a flat JSON object sending every source
/// point name to a target point name. Totality is required.
inline std::vector<std::size_t> parse_point_map(const std::string& text, const Universe& src,
                                                const Universe& dst) {
  using Code = ParseError::Code;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(Code::bad_json, e.what());
  }
  if (!j.is_object()) throw ParseError(Code::bad_type, "point map must be a JSON object");
  std::vector<std::size_t> map(src.size());
  std::vector<bool> assigned(src.size(), false);
  for (const auto& [key, val] : j.items()) {
    auto s = src.find(key);
    if (!s) throw ParseError(Code::unknown_point, "map names unknown source point '" + key + "'");
    map[*s] = detail::require_point(dst, val, "image of '" + key + "'");
    assigned[*s] = true;
  }
  for (std::size_t i = 0; i < assigned.size(); ++i)
    if (!assigned[i])
      throw ParseError(Code::missing_field,
                       "map gives no image for source point '" + src.label(i) + "'");
  return map;
}

}  // namespace structura::io
