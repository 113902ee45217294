#pragma once

// JSON surfaces. Rationals always travel as "p/q" strings; numbers are
// rejected so no value ever passes through floating point.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rccs/admissibility.hpp"
#include "rccs/constructor.hpp"
#include "rccs/extender.hpp"
#include "rccs/forks.hpp"
#include "rccs/oracle.hpp"
#include "rccs/prob_space.hpp"

namespace rccs::io {

using nlohmann::json;
using rccs::to_string;

inline json to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const json& j, const std::string& where) {
  if (!j.is_string())
    throw Error(ErrorCode::ParseError, where + ": rationals must be \"p/q\" strings");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
}

inline json to_json(const std::vector<Rational>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

inline std::vector<Rational> rationals_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, where + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

/// A space plus named events, as read from or written to the space schema.
struct SpaceDocument {
  ProbSpace space;
  std::vector<std::pair<std::string, Event>> events;

  const Event& event(const std::string& name) const {
    for (const auto& [n, e] : events)
      if (n == name) return e;
    throw Error(ErrorCode::ParseError, "no event named \"" + name + "\"");
  }
};

inline json labels_to_json(const Event& e) {
  json out = json::array();
  for (const auto& l : e.labels()) out.push_back(l);
  return out;
}

inline json space_to_json(const ProbSpace& space,
                          const std::vector<std::pair<std::string, Event>>& events = {}) {
  json atoms = json::array();
  for (const auto& a : space.atoms()) atoms.push_back({{"label", a.label}, {"weight", to_string(a.weight)}});
  json ev = json::object();
  for (const auto& [name, e] : events) ev[name] = labels_to_json(e);
  return {{"atoms", std::move(atoms)}, {"events", std::move(ev)}};
}

inline SpaceDocument space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
    throw Error(ErrorCode::ParseError, "space document needs an \"atoms\" array");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
    const auto& a = j["atoms"][i];
    const std::string where = "atoms[" + std::to_string(i) + "]";
    if (!a.is_object() || !a.contains("label") || !a["label"].is_string() || !a.contains("weight"))
      throw Error(ErrorCode::ParseError, where + ": needs \"label\" and \"weight\"");
    atoms.push_back({a["label"].get<std::string>(), rational_from_json(a["weight"], where)});
  }
  std::optional<ProbSpace> space;
  try {
    space.emplace(std::move(atoms));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  SpaceDocument doc{*space, {}};
  if (j.contains("events")) {
    if (!j["events"].is_object()) throw Error(ErrorCode::ParseError, "\"events\" must be an object");
    for (const auto& [name, members] : j["events"].items()) {
      if (!members.is_array()) throw Error(ErrorCode::ParseError, "event " + name + " must be an array");
      std::vector<std::string> labels;
      for (const auto& m : members) {
        if (!m.is_string() || !doc.space.has_atom(m.get<std::string>()))
          throw Error(ErrorCode::ParseError, "event " + name + " names an unknown atom");
        labels.push_back(m.get<std::string>());
      }
      doc.events.emplace_back(name, doc.space.event(labels));
    }
  }
  return doc;
}

inline json to_json(const CorrelationSummary& s) {
  return {{"a", to_string(s.a)},
          {"b", to_string(s.b)},
          {"pAB", to_string(s.pAB)},
          {"gamma", to_string(s.gamma)},
          {"quadrants",
           {{"AB", to_string(s.quadrants[0])},
            {"AnB", to_string(s.quadrants[1])},
            {"nAB", to_string(s.quadrants[2])},
            {"nAnB", to_string(s.quadrants[3])}}},
          {"positive", s.positive()}};
}

/// Targets are given by a, b and pAB; gamma and quadrants are derived.
inline CorrelationSummary target_from_json(const json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b") || !j.contains("pAB"))
    throw Error(ErrorCode::ParseError, "target needs \"a\", \"b\" and \"pAB\"");
  try {
    return CorrelationSummary::from_marginals(rational_from_json(j["a"], "target.a"),
                                              rational_from_json(j["b"], "target.b"),
                                              rational_from_json(j["pAB"], "target.pAB"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline json optional_to_json(const std::optional<Rational>& r) {
  return r ? json(to_string(*r)) : json(nullptr);
}

inline json to_json(const ForkReport& r) {
  json conditions = json::object();
  for (std::size_t i = 0; i < 5; ++i) conditions[ForkReport::kConditionIds[i]] = r.conditions[i];
  return {{"conditions", std::move(conditions)},
          {"residuals",
           {{"screening_cause", to_string(r.screening_cause)},
            {"screening_complement", to_string(r.screening_complement)},
            {"difference_a", to_string(r.difference_a)},
            {"difference_b", to_string(r.difference_b)}}},
          {"verdict", r.verdict}};
}

inline json to_json(const RccsReport& r) {
  json screening = json::array(), ordering = json::array();
  for (const auto& x : r.screening_residuals) screening.push_back(optional_to_json(x));
  for (std::size_t i = 0; i < r.n; ++i)
    for (std::size_t j = i + 1; j < r.n; ++j)
      ordering.push_back({{"i", i + 1}, {"j", j + 1},
                          {"product", optional_to_json(r.ordering_products[r.pair_index(i, j)])}});
  auto all = [](const std::vector<bool>& v) {
    for (bool b : v)
      if (!b) return false;
    return true;
  };
  bool screens = true, comonotone = true;
  for (const auto& x : r.screening_residuals) screens = screens && x && is_zero(*x);
  for (const auto& x : r.ordering_products) comonotone = comonotone && x && is_positive(*x);
  return {{"n", r.n},
          {"conditions",
           {{"positivity", all(r.positivity)},
            {"screening", screens},
            {"ordering", comonotone},
            {"interior", all(r.interior)}}},
          {"positivity", r.positivity},
          {"screening_residuals", std::move(screening)},
          {"ordering_products", std::move(ordering)},
          {"interior", r.interior},
          {"definition_verdict", r.definition_verdict},
          {"verdict", r.verdict}};
}

inline json to_json(const CorrelationDecomposition& d) {
  return {{"pair_covariance", to_string(d.pair_covariance)},
          {"comonotone_sum", to_string(d.comonotone_sum)},
          {"defect_sum", to_string(d.defect_sum)},
          {"identity_holds", is_zero(d.residual())},
          {"note", "defect term enters with coefficient 1; a coefficient of 1/2 fails for the "
                   "single-cell partition"}};
}

inline json to_json(const AdmissibilityReport& r) {
  json conditions = json::array();
  for (const auto& c : r.conditions) {
    json entry{{"id", c.id}, {"holds", c.holds}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    conditions.push_back(std::move(entry));
  }
  return {{"conditions", std::move(conditions)},
          {"sum_ac", to_string(r.sum_ac)},
          {"sum_bc", to_string(r.sum_bc)},
          {"sum_c", to_string(r.sum_c)},
          {"joint_sum", to_string(r.joint_sum)},
          {"joint_sum_matches", r.joint_sum_matches},
          {"verdict", r.verdict}};
}

inline json to_json(const AdmissibleStarSet& s) {
  return {{"n", s.n()},
          {"a", to_json(s.a)},
          {"b", to_json(s.b)},
          {"c", to_json(s.c)},
          {"d", to_json(s.d)},
          {"target", {{"a", to_string(s.target.a)}, {"b", to_string(s.target.b)}, {"pAB", to_string(s.target.pAB)}}}};
}

inline AdmissibleStarSet admissible_star_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "admissible* set must be an object");
  for (const char* key : {"a", "b", "c", "d", "target"})
    if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing \"") + key + "\"");
  AdmissibleStarSet s{rationals_from_json(j["a"], "a"), rationals_from_json(j["b"], "b"),
                      rationals_from_json(j["c"], "c"), rationals_from_json(j["d"], "d"),
                      target_from_json(j["target"])};
  if (j.contains("n") && (!j["n"].is_number_unsigned() || j["n"].get<std::size_t>() != s.n()))
    throw Error(ErrorCode::ParseError, "\"n\" disagrees with the list lengths");
  return s;
}

inline json to_json(const DiagnosisReport& r) {
  return {{"residuals", to_json(r.residuals)},
          {"weighted_defects", to_json(r.weighted_defects)},
          {"defect_sum", to_string(r.defect_sum)},
          {"admissible", to_json(r.admissible)},
          {"admissible_verdict", r.admissible_verdict},
          {"screening_verdict", r.screening_verdict},
          {"cancellation", r.cancellation()}};
}

inline const char* to_string(ConstructionMode m) {
  return m == ConstructionMode::Literal ? "literal" : "realizable";
}

inline ConstructionMode mode_from_string(const std::string& s) {
  if (s == "literal") return ConstructionMode::Literal;
  if (s == "realizable") return ConstructionMode::Realizable;
  throw Error(ErrorCode::ParseError, "mode must be \"literal\" or \"realizable\", got \"" + s + "\"");
}

/// {"target":{...}, "n":5, "mode":"realizable",
///  "schedule":{"epsilon":"1/64","shrink":"1/2","max_retries":64}}
inline ConstructionRequest request_from_json(const json& j) {
  if (!j.is_object() || !j.contains("target") || !j.contains("n"))
    throw Error(ErrorCode::ParseError, "request needs \"target\" and \"n\"");
  ConstructionRequest req;
  req.target = target_from_json(j["target"]);
  if (!j["n"].is_number_integer()) throw Error(ErrorCode::ParseError, "\"n\" must be an integer");
  const auto n = j["n"].get<long long>();
  req.n = n < 0 ? 0 : static_cast<std::size_t>(n);
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw Error(ErrorCode::ParseError, "\"mode\" must be a string");
    req.mode = mode_from_string(j["mode"].get<std::string>());
  }
  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    if (s.contains("epsilon")) req.schedule.epsilon = rational_from_json(s["epsilon"], "schedule.epsilon");
    if (s.contains("shrink")) req.schedule.shrink = rational_from_json(s["shrink"], "schedule.shrink");
    if (s.contains("max_retries")) {
      if (!s["max_retries"].is_number_integer())
        throw Error(ErrorCode::ParseError, "schedule.max_retries must be an integer");
      req.schedule.max_retries = s["max_retries"].get<int>();
    }
  }
  return req;
}

inline json to_json(const ConstructionRequest& req) {
  return {{"target", {{"a", to_string(req.target.a)}, {"b", to_string(req.target.b)}, {"pAB", to_string(req.target.pAB)}}},
          {"n", req.n},
          {"mode", to_string(req.mode)},
          {"schedule",
           {{"epsilon", to_string(req.schedule.epsilon)},
            {"shrink", to_string(req.schedule.shrink)},
            {"max_retries", req.schedule.max_retries}}}};
}

inline constexpr const char* kQuadrantNames[4] = {"AB", "AnB", "nAB", "nAnB"};

/// The extension is written in the space schema (so it can be fed straight
/// back to `verify`) with extra keys for the embedding. `named` are original
/// events whose images are stored under the same names; the cells are stored
/// as C1..Cn.
inline json extension_to_json(const ExtensionResult& ext, const ProbSpace& original,
                              const std::vector<std::pair<std::string, Event>>& named) {
  std::vector<std::pair<std::string, Event>> events;
  for (const auto& [name, e] : named) events.emplace_back(name, ext.lift(e));
  json partition = json::array();
  for (std::size_t i = 0; i < ext.rccs.size(); ++i) {
    const std::string name = "C" + std::to_string(i + 1);
    events.emplace_back(name, ext.rccs[i]);
    partition.push_back(name);
  }
  json out = space_to_json(ext.new_space, events);
  json parents = json::object();
  for (std::size_t j = 0; j < ext.parent_of.size(); ++j)
    parents[ext.new_space.atom(j).label] = original.atom(ext.parent_of[j]).label;
  out["parent_of"] = std::move(parents);
  out["partition"] = std::move(partition);
  json weights = json::object();
  for (std::size_t k = 0; k < 4; ++k) weights[kQuadrantNames[k]] = to_json(ext.weights.r[k]);
  out["weights"] = std::move(weights);
  return out;
}

inline json to_json(const HomomorphismReport& r) {
  json out{{"parent_map_valid", r.parent_map_valid},
           {"injective", r.injective},
           {"preserves_complement", r.preserves_complement},
           {"preserves_meet", r.preserves_meet},
           {"preserves_join", r.preserves_join},
           {"preserves_measure", r.preserves_measure},
           {"exhaustive", r.exhaustive},
           {"events_checked", r.events_checked},
           {"verdict", r.verdict}};
  if (!r.first_failure.empty()) out["first_failure"] = r.first_failure;
  return out;
}

inline json partition_to_json(const Partition& p) {
  json out = json::array();
  for (const auto& cell : p) out.push_back(labels_to_json(cell));
  return out;
}

}  // namespace rccs::io
