#pragma once

#include <string>

#include "json.hpp"

#include "qdilog/derivation.hpp"
#include "qdilog/verifier.hpp"

namespace qdilog {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json nullable(int v, bool present) { return present ? Json(v) : Json(nullptr); }

inline Json to_json(const MonomialOutcome& o, int sites) {
  return Json{{"relation", o.relation}, {"target", o.target.to_string(sites)}, {"lhs", o.lhs}, {"rhs", o.rhs},
              {"match", o.match}};
}

inline Json params_json(int N, int n, std::optional<int> W, std::optional<int> P, std::optional<int> K) {
  auto opt = [](std::optional<int> v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"N", N}, {"n", n > 0 ? Json(n) : Json(nullptr)}, {"W", opt(W)}, {"P", opt(P)}, {"K", opt(K)}};
}

inline Json to_json(const VerificationReport& r) {
  const int N = r.params.sites;
  Json per = Json::array();
  for (const auto& o : r.per_monomial) per.push_back(to_json(o, N));
  Json rels = Json::array();
  for (const auto& s : r.relations) {
    Json j{{"relation", s.label}, {"backend", s.backend}, {"status", s.pass() ? "PASS" : "FAIL"},
           {"targets", s.targets}, {"mismatches", s.mismatches}, {"max_index", s.max_index}, {"tuples", s.tuples}};
    if (!s.lhs_minors.empty()) j["lhs_gram_minors"] = s.lhs_minors;
    if (!s.rhs_minors.empty()) j["rhs_gram_minors"] = s.rhs_minors;
    j["first_mismatch"] = s.first_mismatch ? to_json(*s.first_mismatch, N) : Json(nullptr);
    rels.push_back(std::move(j));
  }
  Json notes = Json::object();
  for (const auto& [k, v] : r.notes) notes[k] = v;
  const bool exact = r.backend == "exact";
  return Json{
      {"schema_version", kSchemaVersion},
      {"identity", to_string(r.identity)},
      {"params", params_json(N, r.params.site, r.params.window, exact ? std::nullopt : std::optional(r.params.precision),
                             r.depth)},
      {"status", r.pass ? "PASS" : "FAIL"},
      {"per_monomial", per},
      {"certificate_summary",
       Json{{"backend", r.backend},
            {"first_mismatch", r.first_mismatch ? to_json(r.per_monomial[*r.first_mismatch], N) : Json(nullptr)},
            {"relations", rels},
            {"notes", notes}}},
      {"elapsed_ms", r.elapsed_ms ? Json(*r.elapsed_ms) : Json(nullptr)},
  };
}

inline Json to_json(const std::string& name, const DerivationScript& s, const ReplayReport& r) {
  return Json{{"script", name},
              {"start", render(s.start)},
              {"end", render(s.end)},
              {"steps", s.steps.size()},
              {"status", r.pass ? "PASS" : "FAIL"},
              {"failed_step", r.failed_step ? Json(*r.failed_step) : Json(nullptr)},
              {"message", r.message}};
}

}  // namespace qdilog
