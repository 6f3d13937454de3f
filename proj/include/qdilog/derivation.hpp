#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qdilog/errors.hpp"
#include "qdilog/relations.hpp"
#include "qdilog/words.hpp"

namespace qdilog {

/// A relation instance usable as a two-sided rewrite rule.
struct Rule {
  std::string id;
  std::vector<std::string> bindings;
  Word lhs;
  Word rhs;
};

/// One positioned rewrite: `@pos id[bindings] fwd|rev`.
struct Step {
  std::size_t position = 0;
  std::string rule;
  std::vector<std::string> bindings;
  bool forward = true;

  friend bool operator==(const Step&, const Step&) = default;
};

struct DerivationScript {
  Word start;
  std::vector<Step> steps;
  Word end;
};

namespace detail {

inline int binding_int(const std::vector<std::string>& b, std::size_t i) { return parse_int(b.at(i), "binding"); }

inline int binding_sign(const std::string& s) {
  if (s == "+") return 1;
  if (s == "-") return -1;
  throw ParseError("expected + or -, got '" + s + "'");
}

/// `3+` -> (3, +1)
inline std::pair<int, int> binding_sfactor(const std::string& s) {
  if (s.size() < 2) throw ParseError("bad binding '" + s + "'");
  return {parse_int(std::string_view(s).substr(0, s.size() - 1), s), binding_sign(s.substr(s.size() - 1))};
}

inline void expect_arity(const std::string& id, const std::vector<std::string>& b, std::size_t n) {
  if (b.size() != n)
    throw ParseError(id + " takes " + std::to_string(n) + " binding" + (n == 1 ? "" : "s") + ", got " +
                     std::to_string(b.size()));
}

inline void need_positive(int site) {
  if (site < 1) throw InvalidParams("site indices start at 1");
}

inline Rule from_s(const std::string& id, const std::vector<std::string>& b, const SRelation& r) {
  return {id, b, to_word(r.lhs), to_word(r.rhs)};
}

inline Word letters(std::initializer_list<Generator> g) { return Word(g); }

inline Element<RationalQ> scaled_q(const Element<RationalQ>& x, int p, int c) {
  return x.scaled(RationalQ::q_power(p, Integer(c)));
}

/// a b = q^2 b a
inline bool weyl_pair(const Element<RationalQ>& a, const Element<RationalQ>& b) {
  return normal_mul(a, b) == scaled_q(normal_mul(b, a), 2, 1);
}

}  // namespace detail

/// Instantiates rule `id` with its bindings. Unknown ids and invalid
/// bindings throw; the rule sides are nonempty words.
inline Rule make_rule(const std::string& id, const std::vector<std::string>& b) {
  using detail::binding_int;
  if (id == "r1" || id == "r2" || id == "r3" || id == "r4") {
    detail::expect_arity(id, b, 1);
    const int n = binding_int(b, 0);
    detail::need_positive(n);
    return detail::from_s(id, b, rel::two_site(id[1] - '0', n));
  }
  if (id == "loc") {
    detail::expect_arity(id, b, 1);
    const int n = binding_int(b, 0);
    detail::need_positive(n);
    return detail::from_s(id, b, rel::local_commute(n));
  }
  if (id == "fam1" || id == "fam2") {
    detail::expect_arity(id, b, 2);
    const int n = binding_int(b, 0);
    detail::need_positive(n);
    const int e = detail::binding_sign(b[1]);
    return detail::from_s(id, b, id == "fam1" ? rel::family1(n, e) : rel::family2(n, e));
  }
  if (id == "comm") {
    detail::expect_arity(id, b, 2);
    const auto [m, a] = detail::binding_sfactor(b[0]);
    const auto [n, c] = detail::binding_sfactor(b[1]);
    detail::need_positive(m);
    detail::need_positive(n);
    return detail::from_s(id, b, rel::commute(m, a, n, c));
  }
  if (id == "defb" || id == "defc") {
    detail::expect_arity(id, b, 1);
    const int n = binding_int(b, 0);
    detail::need_positive(n);
    const Generator g = id == "defb" ? Generator::b(n) : Generator::c(n);
    return {id, b, {g}, expand_composite({g})};
  }
  if (id == "artin") {
    detail::expect_arity(id, b, 1);
    const int n = binding_int(b, 0);
    detail::need_positive(n);
    using G = Generator;
    return {id, b, {G::b(n), G::b(n + 1), G::b(n)}, {G::b(n + 1), G::b(n), G::b(n + 1)}};
  }
  if (id == "bcomm" || id == "scomm") {
    detail::expect_arity(id, b, 2);
    const int m = binding_int(b, 0), n = binding_int(b, 1);
    detail::need_positive(m);
    detail::need_positive(n);
    const bool braid = id == "bcomm";
    if (std::abs(m - n) <= (braid ? 1 : 2))
      throw InvalidParams(id + " needs |m-n| > " + std::string(braid ? "1" : "2"));
    auto g = [braid](int k) { return braid ? Generator::b(k) : Generator::c(k); };
    return {id, b, {g(m), g(n)}, {g(n), g(m)}};
  }
  if (id == "sig1" || id == "sig2") {
    detail::expect_arity(id, b, 1);
    const int n = binding_int(b, 0);
    if (n < 2) throw InvalidParams(id + " needs n >= 2");
    using G = Generator;
    if (id == "sig1")
      return {id, b, {G::c(n + 1), G::c(n - 1), G::c(n), G::c(n + 1)}, {G::c(n - 1), G::c(n + 1), G::c(n)}};
    return {id, b, {G::c(n - 1), G::c(n), G::c(n + 1), G::c(n - 1)}, {G::c(n), G::c(n - 1), G::c(n + 1)}};
  }
  if (id == "mult1" || id == "mult2" || id == "pent") {
    detail::expect_arity(id, b, 2);
    const auto a = parse_arg(b[0]);
    const auto c = parse_arg(b[1]);
    if (!detail::weyl_pair(a, c)) throw InvalidParams(id + " needs a Weyl pair ab = q^2 ba");
    using G = Generator;
    const auto mqba = detail::scaled_q(normal_mul(c, a), 1, -1);  // -q ba
    if (id == "mult1") return {id, b, {G::ext(a), G::ext(c)}, {G::ext(a + c)}};
    if (id == "mult2") return {id, b, {G::ext(c), G::ext(a)}, {G::ext(a + c + mqba)}};
    return {id, b, {G::ext(c), G::ext(a)}, {G::ext(a), G::ext(mqba), G::ext(c)}};
  }
  throw ParseError("unknown rule '" + id + "'");
}

inline Rule make_rule(const Step& s) { return make_rule(s.rule, s.bindings); }

/// Replaces the rule side at `position` by the other side.
inline Word apply_step(const Word& w, const Step& step) {
  const Rule r = make_rule(step);
  const Word& from = step.forward ? r.lhs : r.rhs;
  const Word& to = step.forward ? r.rhs : r.lhs;
  const bool fits = step.position + from.size() <= w.size();
  if (!fits || !std::equal(from.begin(), from.end(), w.begin() + static_cast<std::ptrdiff_t>(step.position))) {
    Word found;
    for (std::size_t i = step.position; i < std::min(w.size(), step.position + from.size()); ++i) found.push_back(w[i]);
    throw NoMatch("expected " + render(from) + " at " + std::to_string(step.position) + ", found " +
                  (found.empty() ? std::string("end of word") : render(found)));
  }
  Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(step.position));
  out.insert(out.end(), to.begin(), to.end());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(step.position + from.size()), w.end());
  return out;
}

struct ReplayReport {
  bool pass = false;
  std::vector<Word> words;  // start, then the word after each successful step
  std::optional<std::size_t> failed_step;
  std::string message;
};

/// Applies every step in order and checks the final word against `end`.
/// With `sites`, every intermediate word must also fit the lattice.
inline ReplayReport replay(const DerivationScript& script, std::optional<int> sites = std::nullopt) {
  ReplayReport rep;
  Word w = script.start;
  try {
    if (sites) validate(w, *sites);
  } catch (const Error& e) {
    rep.message = std::string("start: ") + e.what();
    return rep;
  }
  rep.words.push_back(w);
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    try {
      w = apply_step(w, script.steps[i]);
      if (sites) validate(w, *sites);
    } catch (const Error& e) {
      rep.failed_step = i;
      rep.message = e.what();
      return rep;
    }
    rep.words.push_back(w);
  }
  if (!(w == script.end)) {
    rep.message = "expected end " + render(script.end) + ", found " + render(w);
    return rep;
  }
  rep.pass = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Script text format

inline std::string render(const Step& s) {
  std::string b;
  for (std::size_t i = 0; i < s.bindings.size(); ++i) b += (i ? "," : "") + s.bindings[i];
  return "@" + std::to_string(s.position) + " " + s.rule + "[" + b + "] " + (s.forward ? "fwd" : "rev");
}

inline std::string render(const DerivationScript& s) {
  std::string out = "start: " + render(s.start) + "\n";
  for (const auto& st : s.steps) out += render(st) + "\n";
  out += "end: " + render(s.end) + "\n";
  return out;
}

inline Step parse_step(std::string_view line) {
  if (line.empty() || line[0] != '@') throw ParseError("step must start with '@'");
  const std::size_t sp1 = line.find(' ');
  if (sp1 == std::string_view::npos) throw ParseError("step needs a rule");
  Step s;
  const int pos = detail::parse_int(line.substr(1, sp1 - 1), "position");
  if (pos < 0 || line[1] == '+' || line[1] == '-') throw ParseError("position must be a plain nonnegative integer");
  s.position = static_cast<std::size_t>(pos);
  const std::size_t open = line.find('[', sp1);
  const std::size_t close = line.find(']', sp1);
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw ParseError("rule needs [bindings]");
  s.rule = std::string(line.substr(sp1 + 1, open - sp1 - 1));
  if (s.rule.empty()) throw ParseError("empty rule id");
  const auto inner = line.substr(open + 1, close - open - 1);
  std::size_t p = 0;
  while (p <= inner.size() && !inner.empty()) {
    const std::size_t comma = inner.find(',', p);
    s.bindings.emplace_back(inner.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p));
    if (s.bindings.back().empty()) throw ParseError("empty binding");
    if (comma == std::string_view::npos) break;
    p = comma + 1;
  }
  const auto dir = line.substr(close + 1);
  if (dir == " fwd")
    s.forward = true;
  else if (dir == " rev")
    s.forward = false;
  else
    throw ParseError("direction must be ' fwd' or ' rev'");
  return s;
}

inline DerivationScript parse_script(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t p = 0;
  while (p < text.size()) {
    const std::size_t nl = text.find('\n', p);
    lines.push_back(text.substr(p, nl == std::string_view::npos ? std::string_view::npos : nl - p));
    if (nl == std::string_view::npos) break;
    p = nl + 1;
  }
  auto fail = [](std::size_t line, const std::string& msg) -> ParseError {
    return ParseError("line " + std::to_string(line + 1) + ": " + msg);
  };
  if (lines.size() < 2) throw ParseError("script needs start: and end: lines");
  DerivationScript s;
  auto header = [&](std::size_t i, std::string_view tag) {
    if (!lines[i].starts_with(tag)) throw fail(i, "expected '" + std::string(tag) + "'");
    try {
      return parse_word(lines[i].substr(tag.size()));
    } catch (const ParseError& e) {
      throw fail(i, e.what());
    } catch (const InvalidParams& e) {
      throw fail(i, e.what());
    }
  };
  s.start = header(0, "start: ");
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    try {
      s.steps.push_back(parse_step(lines[i]));
    } catch (const ParseError& e) {
      throw fail(i, e.what());
    }
  }
  s.end = header(lines.size() - 1, "end: ");
  return s;
}

}  // namespace qdilog
