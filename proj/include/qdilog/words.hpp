#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "qdilog/errors.hpp"
#include "qdilog/qexp.hpp"
#include "qdilog/torus.hpp"

namespace qdilog {

/// s_n^+- (S), b_n (B), c_n (Sigma), or s(X) for a composite argument (Ext).
enum class GenKind { S, B, Sigma, Ext };

struct Generator {
  GenKind kind = GenKind::S;
  int site = 1;
  int sign = 1;
  Element<RationalQ> arg;  // Ext only

  static Generator s(int site, int sign) { return {GenKind::S, site, sign, {}}; }
  static Generator b(int site) { return {GenKind::B, site, 1, {}}; }
  static Generator c(int site) { return {GenKind::Sigma, site, 1, {}}; }

  /// s(arg); single unit generators w_n^+-1 become S letters.
  static Generator ext(Element<RationalQ> arg) {
    if (arg.size() == 1) {
      const auto& [e, c] = *arg.terms().begin();
      if (e.entries().size() == 1 && std::abs(e.entries()[0].second) == 1 && c == RationalQ(Integer(1)))
        return s(e.entries()[0].first, e.entries()[0].second);
    }
    if (arg.is_zero()) throw InvalidParams("s(0) is not a letter");
    return {GenKind::Ext, 0, 1, std::move(arg)};
  }

  /// Argument of the q-exponential this letter stands for (S and Ext only).
  Element<RationalQ> argument() const {
    if (kind == GenKind::S) return exact_generator(site, sign);
    if (kind == GenKind::Ext) return arg;
    throw InvalidParams("composite letters have no single argument; expand first");
  }

  friend bool operator==(const Generator& a, const Generator& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == GenKind::Ext) return a.arg == b.arg;
    return a.site == b.site && (a.kind != GenKind::S || a.sign == b.sign);
  }
};

using Word = std::vector<Generator>;

// ---------------------------------------------------------------------------
// Argument syntax: terms like `w1`, `-q^-1*w1*w2`, `2*q^3*w2^-1`.

inline std::string render_arg(const Element<RationalQ>& x) {
  if (x.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : x.terms()) {
    const auto lm = c.as_laurent_monomial();
    if (!lm) throw InvalidParams("letter arguments need monomial coefficients c*q^p");
    const bool negative = lm->first < 0;
    const Integer mag = negative ? Integer(-lm->first) : lm->first;
    if (negative)
      out += "-";
    else if (!first)
      out += "+";
    first = false;
    std::vector<std::string> parts;
    if (mag != 1 || (lm->second == 0 && e.is_identity())) parts.push_back(mag.str());
    if (lm->second != 0) parts.push_back("q^" + std::to_string(lm->second));
    for (const auto& [site, exp] : e.entries())
      parts.push_back("w" + std::to_string(site) + (exp == 1 ? "" : "^" + std::to_string(exp)));
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
  }
  return out;
}

namespace detail {

inline int parse_int(std::string_view s, std::string_view what) {
  if (s.empty()) throw ParseError("missing integer in " + std::string(what));
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) throw ParseError("bad integer '" + std::string(s) + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw ParseError("bad integer '" + std::string(s) + "'");
  try {
    return std::stoi(std::string(s));
  } catch (const std::out_of_range&) {
    throw ParseError("integer out of range '" + std::string(s) + "'");
  }
}

inline void parse_term(std::string_view t, bool negative, Element<RationalQ>& out) {
  if (t.empty()) throw ParseError("empty term");
  Integer coeff = 1;
  int qp = 0;
  ExponentVector e;
  std::size_t pos = 0;
  while (pos <= t.size()) {
    const std::size_t star = t.find('*', pos);
    const std::string_view tok = t.substr(pos, star == std::string_view::npos ? std::string_view::npos : star - pos);
    if (tok.empty()) throw ParseError("empty factor in '" + std::string(t) + "'");
    if (tok[0] == 'w') {
      const std::size_t caret = tok.find('^');
      const int site = parse_int(tok.substr(1, caret == std::string_view::npos ? std::string_view::npos : caret - 1), tok);
      if (site < 1) throw ParseError("site indices start at 1");
      e.add(site, caret == std::string_view::npos ? 1 : parse_int(tok.substr(caret + 1), tok));
    } else if (tok[0] == 'q') {
      if (tok == "q")
        qp += 1;
      else if (tok.size() > 2 && tok[1] == '^')
        qp += parse_int(tok.substr(2), tok);
      else
        throw ParseError("bad q-power '" + std::string(tok) + "'");
    } else {
      for (char ch : tok)
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw ParseError("bad factor '" + std::string(tok) + "'");
      coeff *= Integer(std::string(tok));
    }
    if (star == std::string_view::npos) break;
    pos = star + 1;
  }
  out.add_term(e, RationalQ::q_power(qp, negative ? Integer(-coeff) : coeff));
}

}  // namespace detail

inline Element<RationalQ> parse_arg(std::string_view s) {
  if (s.empty()) throw ParseError("empty argument");
  Element<RationalQ> out;
  std::size_t start = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    start = 1;
  }
  for (std::size_t i = start; i <= s.size(); ++i) {
    const bool end = i == s.size();
    if (end || ((s[i] == '+' || s[i] == '-') && i > start && s[i - 1] != '^')) {
      detail::parse_term(s.substr(start, i - start), negative, out);
      if (!end) {
        negative = s[i] == '-';
        start = i + 1;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Letters and words

inline std::string render(const Generator& g) {
  switch (g.kind) {
    case GenKind::S: return "s" + std::to_string(g.site) + (g.sign > 0 ? "+" : "-");
    case GenKind::B: return "b" + std::to_string(g.site);
    case GenKind::Sigma: return "c" + std::to_string(g.site);
    case GenKind::Ext: return "s(" + render_arg(g.arg) + ")";
  }
  return {};
}

inline std::string render(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) out += (i ? " " : "") + render(w[i]);
  return out;
}

inline Generator parse_letter(std::string_view s) {
  if (s.size() >= 2 && s[0] == 's' && s[1] == '(') {
    if (s.back() != ')') throw ParseError("unterminated letter '" + std::string(s) + "'");
    return Generator::ext(parse_arg(s.substr(2, s.size() - 3)));
  }
  if (s.size() < 2) throw ParseError("bad letter '" + std::string(s) + "'");
  switch (s[0]) {
    case 's': {
      const char sign = s.back();
      if (sign != '+' && sign != '-') throw ParseError("S letter needs a sign: '" + std::string(s) + "'");
      const int site = detail::parse_int(s.substr(1, s.size() - 2), s);
      if (site < 1) throw ParseError("site indices start at 1");
      return Generator::s(site, sign == '+' ? 1 : -1);
    }
    case 'b':
    case 'c': {
      const int site = detail::parse_int(s.substr(1), s);
      if (site < 1) throw ParseError("site indices start at 1");
      return s[0] == 'b' ? Generator::b(site) : Generator::c(site);
    }
    default: throw ParseError("bad letter '" + std::string(s) + "'");
  }
}

inline Word parse_word(std::string_view s) {
  Word w;
  if (s == "1") return w;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] == ' ') throw ParseError("words are separated by single spaces");
    const std::size_t sp = s.find(' ', pos);
    const auto tok = s.substr(pos, sp == std::string_view::npos ? std::string_view::npos : sp - pos);
    w.push_back(parse_letter(tok));
    if (sp == std::string_view::npos) break;
    pos = sp + 1;
    if (pos == s.size()) throw ParseError("trailing space in word");
  }
  if (w.empty()) throw ParseError("empty word; write 1");
  return w;
}

/// b_n -> s_n^+ s_n^-, c_n -> s_n^- s_{n+1}^+; other letters unchanged.
inline Word expand_composite(const Word& w) {
  Word out;
  for (const auto& g : w) {
    if (g.kind == GenKind::B) {
      out.push_back(Generator::s(g.site, 1));
      out.push_back(Generator::s(g.site, -1));
    } else if (g.kind == GenKind::Sigma) {
      out.push_back(Generator::s(g.site, -1));
      out.push_back(Generator::s(g.site + 1, 1));
    } else {
      out.push_back(g);
    }
  }
  return out;
}

inline Word to_word(const FactorProduct& p) {
  Word w;
  for (const auto& f : p) w.push_back(Generator::s(f.site, f.sign));
  return w;
}

inline GeneralProduct to_product(const Word& w) {
  GeneralProduct p;
  for (const auto& g : expand_composite(w)) p.push_back(Factor{g.argument()});
  return p;
}

/// Checks letter sites against a lattice of `sites` sites.
inline void validate(const Word& w, int sites) {
  for (const auto& g : w) {
    const int hi = g.kind == GenKind::Sigma ? sites - 1 : sites;
    if (g.kind == GenKind::Ext) {
      if (g.arg.max_site() > sites) throw InvalidParams("letter " + render(g) + " outside the lattice");
    } else if (g.site < 1 || g.site > hi) {
      throw InvalidParams("letter " + render(g) + " outside the lattice");
    }
  }
}

}  // namespace qdilog
