#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qdilog/report.hpp"
#include "qdilog/scripts.hpp"
#include "qdilog/verifier.hpp"
#include "qdilog/word_image.hpp"

namespace qdilog {

struct RunConfig {
  std::vector<std::string> items;
  int sites = 0;
  int site = 0;
  int window = -1;
  int precision = -1;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string output;
  std::string format = "text";
  Backend backend = Backend::Auto;
  bool timings = false;
};

inline void validate(const RunConfig& c) {
  if (c.sites != 0 && (c.sites < 2 || c.sites > 32)) throw InvalidParams("--sites must be in 2..32");
  if (c.window != -1 && (c.window < 0 || c.window > 8)) throw InvalidParams("--window must be in 0..8");
  if (c.precision != -1 && (c.precision < 1 || c.precision > 64)) throw InvalidParams("--precision must be in 1..64");
  if (c.site < 0) throw InvalidParams("--site must be positive");
  if (c.jobs < 1 || c.jobs > 256) throw InvalidParams("--jobs must be in 1..256");
  if (c.format != "text" && c.format != "structured") throw InvalidParams("--format must be text or structured");
}

// ---------------------------------------------------------------------------
// Script items

struct ScriptItem {
  const char* name;
  const char* display;
  int sites;
  std::function<std::vector<std::pair<std::string, DerivationScript>>(int)> generate;
};

namespace detail {

using ScriptList = std::vector<std::pair<std::string, DerivationScript>>;

inline std::string args(std::initializer_list<int> xs) {
  std::string s = "(";
  bool first = true;
  for (int x : xs) {
    s += (first ? "" : ",") + std::to_string(x);
    first = false;
  }
  return s + ")";
}

inline ScriptList translations(TranslationKind kind, int sites) {
  ScriptList out;
  const bool sigma = kind == TranslationKind::SigmaFwd || kind == TranslationKind::SigmaRev;
  const int top = sigma ? sites - 1 : sites;
  for (int m = 1; m <= top; ++m)
    for (int n = m + 1; n <= std::min(top, m + 6); ++n) {
      const auto [lo, hi] = translation_range(kind, m, n);
      for (int k = lo; k <= hi; ++k)
        out.emplace_back(to_string(kind) + args({m, n, k}), translation_script(kind, m, n, k));
    }
  return out;
}

}  // namespace detail

inline const std::vector<ScriptItem>& script_catalog() {
  using detail::args;
  using detail::ScriptList;
  static const std::vector<ScriptItem> catalog = {
      {"braid_derivation", "b_n b_{n+1} b_n = b_{n+1} b_n b_{n+1} from the lattice relations, b_n = s_n^+ s_n^-", 8,
       [](int N) {
         ScriptList out;
         for (int n = 1; n + 1 <= N; ++n) out.emplace_back("braid" + args({n}), braid_script(n));
         return out;
       }},
      {"braid_commute", "b_m b_n = b_n b_m for |m-n| > 1 by letter swaps", 8,
       [](int N) {
         ScriptList out;
         for (int m = 1; m <= N; ++m)
           for (int n = 1; n <= N; ++n)
             if (std::abs(m - n) > 1) out.emplace_back("braid_commute" + args({m, n}), braid_commute_script(m, n));
         return out;
       }},
      {"sigma_rel1", "c_{n+1} c_{n-1} c_n c_{n+1} = c_{n-1} c_{n+1} c_n, c_n = s_n^- s_{n+1}^+", 8,
       [](int N) {
         ScriptList out;
         for (int n = 2; n + 1 <= N - 1; ++n) out.emplace_back("sigma_rel1" + args({n}), sigma_rel1_script(n));
         return out;
       }},
      {"sigma_rel2", "c_{n-1} c_n c_{n+1} c_{n-1} = c_n c_{n-1} c_{n+1}", 8,
       [](int N) {
         ScriptList out;
         for (int n = 2; n + 1 <= N - 1; ++n) out.emplace_back("sigma_rel2" + args({n}), sigma_rel2_script(n));
         return out;
       }},
      {"sigma_commute", "c_m c_n = c_n c_m for |m-n| > 2 by letter swaps", 8,
       [](int N) {
         ScriptList out;
         for (int m = 1; m <= N - 1; ++m)
           for (int n = 1; n <= N - 1; ++n)
             if (std::abs(m - n) > 2) out.emplace_back("sigma_commute" + args({m, n}), sigma_commute_script(m, n));
         return out;
       }},
      {"seven_term_derivation", "s(v)s(u^-1)s(u)s(v) = s(u^-1)s(v)s(u) from the pentagon", 8,
       [](int N) {
         ScriptList out;
         for (int n = 1; n + 1 <= N; ++n) out.emplace_back("seven_term" + args({n}), seven_term_script(n));
         return out;
       }},
      {"pentagon_derivation", "s(v)s(u) = s(u)s(-qvu)s(v) from the multiplication rules", 8,
       [](int N) {
         ScriptList out;
         for (int n = 1; n + 1 <= N; ++n) out.emplace_back("pentagon" + args({n}), pentagon_script(n));
         return out;
       }},
      {"braid_fwd", "(b_m ... b_n) b_k = b_{k+1} (b_m ... b_n), m <= k <= n-1", 8,
       [](int N) { return detail::translations(TranslationKind::BraidFwd, N); }},
      {"braid_rev", "(b_n ... b_m) b_{k+1} = b_k (b_n ... b_m), m <= k <= n-1", 8,
       [](int N) { return detail::translations(TranslationKind::BraidRev, N); }},
      {"sigma_fwd", "(c_m ... c_n) c_k = c_{k+1} (c_m ... c_n), m+1 <= k <= n-2", 8,
       [](int N) { return detail::translations(TranslationKind::SigmaFwd, N); }},
      {"sigma_rev",
       "(c_n ... c_m) c_{k+1} = c_{k-1} (c_n ... c_m), m+1 <= k <= n-1; a translation by two steps at once", 8,
       [](int N) { return detail::translations(TranslationKind::SigmaRev, N); }},
  };
  return catalog;
}

inline const ScriptItem* find_script_item(const std::string& name) {
  for (const auto& s : script_catalog())
    if (name == s.name) return &s;
  return nullptr;
}

inline constexpr const char* kWalkItem = "rewrite_walk";
inline constexpr const char* kWalkDisplay = "50 random lattice-relation rewrites; the word image must not change";

inline std::vector<std::string> all_items() {
  std::vector<std::string> out;
  for (const auto& i : identity_catalog()) out.emplace_back(i.name);
  for (const auto& s : script_catalog()) out.emplace_back(s.name);
  out.emplace_back(kWalkItem);
  return out;
}

// ---------------------------------------------------------------------------
// Running items

struct ItemResult {
  Json report;
  int code = 0;  // 0 pass, 1 fail, 2 error
};

namespace detail {

inline Json item_shell(const std::string& name, Json params) {
  return Json{{"schema_version", kSchemaVersion}, {"identity", name}, {"params", std::move(params)},
              {"status", "ERROR"}, {"per_monomial", Json::array()}, {"certificate_summary", Json::object()},
              {"elapsed_ms", nullptr}};
}

inline ItemResult run_scripts(const ScriptItem& item, const RunConfig& c) {
  const int N = c.sites > 0 ? c.sites : item.sites;
  ItemResult res{item_shell(item.name, params_json(N, 0, std::nullopt, std::nullopt, std::nullopt))};
  Json scripts = Json::array();
  bool pass = true;
  for (const auto& [label, script] : item.generate(N)) {
    const auto text = render(script);
    const auto parsed = parse_script(text);
    auto rep = replay(parsed, N);
    if (rep.pass && render(parsed) != text) {
      rep.pass = false;
      rep.message = "script text does not round-trip";
    }
    pass &= rep.pass;
    scripts.push_back(to_json(label, script, rep));
  }
  Json summary{{"scripts", scripts}, {"count", scripts.size()}};
  if (std::string(item.name) == "sigma_commute") {
    bool rejected = false;
    try {
      sigma_commute_script(1, 3);
    } catch (const InvalidParams&) {
      rejected = true;
    }
    summary["distance2_rejected"] = rejected;
    pass &= rejected;
  }
  res.report["certificate_summary"] = summary;
  res.report["status"] = pass ? "PASS" : "FAIL";
  res.code = pass ? 0 : 1;
  return res;
}

inline ItemResult run_walk(const RunConfig& c) {
  const int N = c.sites > 0 ? c.sites : 4;
  const int W = c.window >= 0 ? c.window : 1;
  const int P = c.precision > 0 ? c.precision : 8;
  const std::size_t steps = 50;
  ItemResult res{item_shell(kWalkItem, params_json(N, 0, W, P, std::nullopt))};
  const auto walk = rewrite_walk(c.seed, N, steps, W, P);
  res.report["certificate_summary"] =
      Json{{"seed", c.seed},
           {"steps", walk.steps.size()},
           {"nontrivial_steps", walk.nontrivial},
           {"restarts", walk.stuck},
           {"final_word", render(walk.words.back())},
           {"first_change", walk.first_change ? Json(*walk.first_change) : Json(nullptr)}};
  res.report["status"] = walk.pass ? "PASS" : "FAIL";
  res.code = walk.pass ? 0 : 1;
  return res;
}

}  // namespace detail

inline ItemResult run_item(const std::string& name, const RunConfig& c, int inner_jobs) {
  const auto start = std::chrono::steady_clock::now();
  ItemResult res;
  try {
    if (const auto* s = find_script_item(name)) {
      res = detail::run_scripts(*s, c);
    } else if (name == kWalkItem) {
      res = detail::run_walk(c);
    } else {
      const IdentityId id = parse_identity(name);
      IdentityParams p;
      p.sites = c.sites;
      p.site = c.site;
      p.window = c.window;
      p.precision = c.precision;
      p.backend = c.backend;
      p.jobs = inner_jobs;
      const auto rep = verify_identity(id, p);
      res.report = to_json(rep);
      res.code = rep.pass ? 0 : 1;
    }
  } catch (const Error& e) {
    res.report = detail::item_shell(name, Json(nullptr));
    res.report["certificate_summary"] = Json{{"error", e.what()}};
    res.code = 2;
  }
  if (c.timings)
    res.report["elapsed_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  else
    res.report["elapsed_ms"] = nullptr;
  return res;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string text_line(const Json& r) {
  std::ostringstream os;
  os << std::left << std::setw(6) << r["status"].get<std::string>() << std::setw(24) << r["identity"].get<std::string>();
  const auto& p = r["params"];
  if (!p.is_null()) {
    for (const char* k : {"N", "n", "W", "P", "K"})
      if (!p[k].is_null()) os << " " << k << "=" << p[k].dump();
  }
  const auto& cs = r["certificate_summary"];
  if (!r["per_monomial"].empty()) os << "  monomials=" << r["per_monomial"].size();
  if (cs.contains("backend")) os << "  backend=" << cs["backend"].get<std::string>();
  if (cs.contains("count")) os << "  scripts=" << cs["count"].dump();
  if (cs.contains("nontrivial_steps"))
    os << "  steps=" << cs["steps"].dump() << " nontrivial=" << cs["nontrivial_steps"].dump()
       << " final=" << cs["final_word"].get<std::string>();
  if (!r["elapsed_ms"].is_null()) os << "  " << std::fixed << std::setprecision(1) << r["elapsed_ms"].get<double>() << "ms";
  os << "\n";
  if (cs.contains("error")) os << "      error: " << cs["error"].get<std::string>() << "\n";
  if (cs.contains("notes"))
    for (const auto& [k, v] : cs["notes"].items()) os << "      " << k << ": " << v.get<std::string>() << "\n";
  if (cs.contains("first_mismatch") && !cs["first_mismatch"].is_null()) {
    const auto& m = cs["first_mismatch"];
    os << "      first mismatch: " << m["relation"].get<std::string>() << " at " << m["target"].get<std::string>()
       << "\n        lhs " << m["lhs"].get<std::string>() << "\n        rhs " << m["rhs"].get<std::string>() << "\n";
  }
  if (cs.contains("scripts"))
    for (const auto& s : cs["scripts"])
      if (s["status"] != "PASS")
        os << "      " << s["script"].get<std::string>() << ": " << s["message"].get<std::string>() << "\n";
  if (cs.contains("distance2_rejected"))
    os << "      distance-2 commutation rejected: " << (cs["distance2_rejected"].get<bool>() ? "yes" : "no") << "\n";
  return os.str();
}

inline Json summary_json(const std::vector<ItemResult>& results) {
  int passed = 0, failed = 0, errors = 0;
  Json items = Json::array();
  for (const auto& r : results) {
    (r.code == 0 ? passed : r.code == 1 ? failed : errors)++;
    items.push_back(Json{{"identity", r.report["identity"]}, {"status", r.report["status"]}});
  }
  return Json{{"items", items},
              {"passed", passed},
              {"failed", failed},
              {"errors", errors},
              {"status", errors ? "ERROR" : failed ? "FAIL" : "PASS"}};
}

inline int exit_code(const std::vector<ItemResult>& results) {
  int code = 0;
  for (const auto& r : results) code = std::max(code, r.code);
  return code;
}

inline int emit(const RunConfig& c, const std::string& text, std::ostream& out, std::ostream& err) {
  if (c.output.empty()) {
    out << text;
    return 0;
  }
  std::ofstream f(c.output, std::ios::binary);
  f << text;
  if (!f) {
    err << "error: cannot write " << c.output << "\n";
    return 2;
  }
  return 0;
}

inline std::string render_results(const RunConfig& c, const std::vector<ItemResult>& results) {
  if (c.format == "structured") {
    Json reports = Json::array();
    for (const auto& r : results) reports.push_back(r.report);
    return Json{{"schema_version", kSchemaVersion}, {"reports", reports}, {"summary", summary_json(results)}}.dump(2) +
           "\n";
  }
  std::string text;
  for (const auto& r : results) text += text_line(r.report);
  const auto s = summary_json(results);
  text += "summary: " + s["status"].get<std::string>() + " (" + s["passed"].dump() + " passed, " + s["failed"].dump() +
          " failed, " + s["errors"].dump() + " errors)\n";
  return text;
}

inline int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<std::string> items;
  for (const auto& name : c.items) {
    if (name == "all") {
      for (auto& i : all_items()) items.push_back(i);
      continue;
    }
    if (!find_script_item(name) && name != kWalkItem) parse_identity(name);
    items.push_back(name);
  }
  if (items.empty()) throw InvalidParams("no items selected; use --identity all or see `list`");
  std::vector<ItemResult> results(items.size());
  const int inner = items.size() == 1 ? c.jobs : 1;
  detail::parallel_for(items.size(), items.size() == 1 ? 1 : c.jobs,
                       [&](std::size_t i, int) { results[i] = run_item(items[i], c, inner); });
  if (const int e = emit(c, render_results(c, results), out, err)) return e;
  return exit_code(results);
}

inline int run_replay(const RunConfig& c, const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot read " << path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  const auto start = std::chrono::steady_clock::now();
  const auto script = parse_script(buf.str());
  const auto rep = replay(script, c.sites > 0 ? std::optional<int>(c.sites) : std::nullopt);
  ItemResult res{detail::item_shell("replay", Json(nullptr))};
  Json words = Json::array();
  for (const auto& w : rep.words) words.push_back(render(w));
  res.report["params"] = c.sites > 0 ? params_json(c.sites, 0, std::nullopt, std::nullopt, std::nullopt) : Json(nullptr);
  res.report["status"] = rep.pass ? "PASS" : "FAIL";
  res.report["certificate_summary"] = Json{{"scripts", Json::array({to_json(path, script, rep)})}, {"words", words}};
  res.report["elapsed_ms"] =
      c.timings ? Json(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count())
                : Json(nullptr);
  res.code = rep.pass ? 0 : 1;
  std::vector<ItemResult> results{res};
  std::string text = render_results(c, results);
  if (c.format == "text") {
    std::string trace;
    for (std::size_t i = 0; i < rep.words.size(); ++i)
      trace += (i ? "  " + render(script.steps[i - 1]) + "\n    " : "    ") + render(rep.words[i]) + "\n";
    if (!rep.pass) trace += "  failed: " + rep.message + "\n";
    text = trace + text;
  }
  if (const int e = emit(c, text, out, err)) return e;
  return res.code;
}

inline int run_list(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.format == "structured") {
    Json ids = Json::array(), scripts = Json::array();
    for (const auto& i : identity_catalog())
      ids.push_back(Json{{"name", i.name},
                         {"display", i.display},
                         {"defaults", Json{{"N", i.sites}, {"W", i.window}, {"P", i.precision ? Json(i.precision) : Json(nullptr)}}}});
    for (const auto& s : script_catalog())
      scripts.push_back(Json{{"name", s.name}, {"display", s.display}, {"defaults", Json{{"N", s.sites}}}});
    scripts.push_back(Json{{"name", kWalkItem}, {"display", kWalkDisplay}, {"defaults", Json{{"N", 4}, {"W", 1}, {"P", 8}}}});
    return emit(c, Json{{"schema_version", kSchemaVersion}, {"identities", ids}, {"scripts", scripts}}.dump(2) + "\n",
                out, err);
  }
  std::ostringstream os;
  os << "identities:\n";
  for (const auto& i : identity_catalog()) {
    os << "  " << std::left << std::setw(24) << i.name << i.display << "\n" << std::setw(26) << ""
       << "defaults N=" << i.sites << " W=" << i.window << " "
       << (i.precision ? "P=" + std::to_string(i.precision) : std::string("exact")) << "\n";
  }
  os << "scripts:\n";
  for (const auto& s : script_catalog())
    os << "  " << std::left << std::setw(24) << s.name << s.display << "\n" << std::setw(26) << "" << "defaults N=" << s.sites << "\n";
  os << "  " << std::left << std::setw(24) << kWalkItem << kWalkDisplay << "\n"
     << std::setw(26) << "" << "defaults N=4 W=1 P=8\n";
  return emit(c, os.str(), out, err);
}

/// Command-line entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Verifies q-exponential identities and replays derivations in the lattice presentations", "qdilog"};
  app.require_subcommand(1);
  RunConfig c;
  std::string backend = "auto";
  std::string script_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--sites", c.sites, "lattice size N (2..32)");
    sub->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    sub->add_option("--output", c.output, "write the report to this file");
  };
  auto* verify = app.add_subcommand("verify", "verify identities and replay derivation scripts");
  verify->add_option("--identity", c.items, "items to run (see `list`), or all")->delimiter(',')->required();
  verify->add_option("--site", c.site, "restrict lattice identities to one site n");
  verify->add_option("--window", c.window, "monomial window W (0..8)");
  verify->add_option("--precision", c.precision, "q-adic precision P (1..64)");
  verify->add_option("--seed", c.seed, "seed for randomized items");
  verify->add_option("--jobs", c.jobs, "worker threads");
  verify->add_option("--backend", backend, "auto, exact or truncated")
      ->check(CLI::IsMember({"auto", "exact", "truncated"}));
  verify->add_flag("--timings", c.timings, "record elapsed_ms (reports are then not byte-reproducible)");
  common(verify);
  auto* list = app.add_subcommand("list", "list identities and script generators");
  common(list);
  auto* rp = app.add_subcommand("replay", "replay a derivation script file");
  rp->add_option("script", script_path, "script file")->required();
  rp->add_flag("--timings", c.timings, "record elapsed_ms");
  common(rp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    c.backend = parse_backend(backend);
    validate(c);
    if (*verify) return run_verify(c, out, err);
    if (*list) return run_list(c, out, err);
    return run_replay(c, script_path, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qdilog
