#pragma once

#include <string>
#include <vector>

#include "qdilog/derivation.hpp"
#include "qdilog/errors.hpp"
#include "qdilog/words.hpp"

namespace qdilog {

namespace detail {

inline std::string sfactor_binding(const Generator& g) { return std::to_string(g.site) + (g.sign > 0 ? "+" : "-"); }

/// Records steps while applying them, so every generated script is checked
/// as it is built.
class ScriptBuilder {
 public:
  explicit ScriptBuilder(Word start) : word_(start) { script_.start = std::move(start); }

  const Word& word() const { return word_; }

  void step(std::size_t pos, std::string rule, std::vector<std::string> bindings, bool forward = true) {
    Step s{pos, std::move(rule), std::move(bindings), forward};
    word_ = apply_step(word_, s);
    script_.steps.push_back(std::move(s));
  }

  /// Exchanges the letters at pos and pos+1 with the matching commutation.
  void swap(std::size_t pos) {
    const Generator& a = word_.at(pos);
    const Generator& b = word_.at(pos + 1);
    if (a.kind != b.kind) throw InvalidParams("cannot swap letters of different kinds");
    switch (a.kind) {
      case GenKind::S:
        if (a.site == b.site && a.sign != b.sign)
          step(pos, "loc", {std::to_string(a.site)}, a.sign > 0);
        else
          step(pos, "comm", {sfactor_binding(a), sfactor_binding(b)});
        return;
      case GenKind::B: step(pos, "bcomm", {std::to_string(a.site), std::to_string(b.site)}); return;
      case GenKind::Sigma: step(pos, "scomm", {std::to_string(a.site), std::to_string(b.site)}); return;
      case GenKind::Ext: break;
    }
    throw InvalidParams("no commutation rule for composite-argument letters");
  }

  /// Moves the letter at `from` to `to` by adjacent swaps.
  void move(std::size_t from, std::size_t to) {
    while (from > to) swap(--from);
    while (from < to) swap(from++);
  }

  void expand_all(const std::string& rule) {
    for (std::size_t i = 0; i < word_.size(); ++i)
      if (word_[i].kind == GenKind::B || word_[i].kind == GenKind::Sigma) {
        step(i, rule, {std::to_string(word_[i].site)});
        ++i;
      }
  }

  DerivationScript finish(const Word& expected_end) {
    if (!(word_ == expected_end))
      throw InvalidParams("script generator ended at " + render(word_) + " instead of " + render(expected_end));
    script_.end = word_;
    return script_;
  }

 private:
  Word word_;
  DerivationScript script_;
};

inline Word b_word(std::initializer_list<int> idx) {
  Word w;
  for (int i : idx) w.push_back(Generator::b(i));
  return w;
}

inline Word c_word(std::initializer_list<int> idx) {
  Word w;
  for (int i : idx) w.push_back(Generator::c(i));
  return w;
}

inline Word c_range(int from, int to) {
  Word w;
  for (int i = from; from <= to ? i <= to : i >= to; i += from <= to ? 1 : -1) w.push_back(Generator::c(i));
  return w;
}

inline Word b_range(int from, int to) {
  Word w;
  for (int i = from; from <= to ? i <= to : i >= to; i += from <= to ? 1 : -1) w.push_back(Generator::b(i));
  return w;
}

inline std::size_t find_letter(const Word& w, const Generator& g, std::size_t from = 0) {
  for (std::size_t i = from; i < w.size(); ++i)
    if (w[i] == g) return i;
  throw InvalidParams("letter " + render(g) + " not found");
}

inline void collapse(ScriptBuilder& sb, const std::string& rule, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) sb.step(i, rule, {std::to_string(sb.word()[i].site)}, false);
}

inline void need(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParams(msg);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Proofs

/// b_n b_{n+1} b_n => b_{n+1} b_n b_{n+1}
inline DerivationScript braid_script(int n) {
  detail::need(n >= 1, "braid(n) needs n >= 1");
  const auto N = std::to_string(n);
  const auto N1 = std::to_string(n + 1);
  detail::ScriptBuilder sb(detail::b_word({n, n + 1, n}));
  sb.expand_all("defb");
  sb.step(0, "loc", {N});         // s_n^- s_n^+ s_{n+1}^+ s_{n+1}^- s_n^+ s_n^-
  sb.step(1, "r3", {N});          // s_n^- s_{n+1}^+ s_n^+ s_{n+1}^- s_n^-
  sb.step(0, "r1", {N}, false);   // s_{n+1}^+ s_n^- s_n^+ s_{n+1}^+ s_{n+1}^- s_n^-
  sb.step(1, "loc", {N}, false);  // s_{n+1}^+ s_n^+ s_n^- s_{n+1}^+ s_{n+1}^- s_n^-
  sb.step(3, "loc", {N1});        // s_{n+1}^+ s_n^+ s_n^- s_{n+1}^- s_{n+1}^+ s_n^-
  sb.step(2, "r4", {N});          // s_{n+1}^+ s_n^+ s_{n+1}^- s_n^- s_{n+1}^+
  sb.step(1, "r2", {N}, false);   // s_{n+1}^+ s_{n+1}^- s_n^+ s_n^- s_{n+1}^- s_{n+1}^+
  sb.step(4, "loc", {N1}, false);
  detail::collapse(sb, "defb", 3);
  return sb.finish(detail::b_word({n + 1, n, n + 1}));
}

/// b_m b_n => b_n b_m, |m-n| > 1, through S-letter swaps.
inline DerivationScript braid_commute_script(int m, int n) {
  detail::need(m >= 1 && n >= 1 && std::abs(m - n) > 1, "braid_commute(m,n) needs |m-n| > 1");
  detail::ScriptBuilder sb(detail::b_word({m, n}));
  sb.expand_all("defb");
  sb.move(2, 0);
  sb.move(3, 1);
  detail::collapse(sb, "defb", 2);
  return sb.finish(detail::b_word({n, m}));
}

/// c_{n+1} c_{n-1} c_n c_{n+1} => c_{n-1} c_{n+1} c_n
inline DerivationScript sigma_rel1_script(int n) {
  detail::need(n >= 2, "sigma_rel1(n) needs n >= 2");
  using G = Generator;
  detail::ScriptBuilder sb(detail::c_word({n + 1, n - 1, n, n + 1}));
  sb.expand_all("defc");
  // s_{n+1}^- s_{n+2}^+ s_{n-1}^- s_n^+ s_n^- s_{n+1}^+ s_{n+1}^- s_{n+2}^+
  sb.move(1, 4);
  sb.step(5, "loc", {std::to_string(n + 1)});
  sb.step(4, "r1", {std::to_string(n + 1)});
  // s_{n+1}^- s_{n-1}^- s_n^+ s_n^- s_{n+1}^- s_{n+2}^+ s_{n+1}^+
  sb.move(0, 1);
  sb.step(1, "r2", {std::to_string(n)});
  // s_{n-1}^- s_n^+ s_{n+1}^- s_n^- s_{n+2}^+ s_{n+1}^+
  sb.move(detail::find_letter(sb.word(), G::s(n, -1)), 4);
  detail::collapse(sb, "defc", 3);
  return sb.finish(detail::c_word({n - 1, n + 1, n}));
}

/// c_{n-1} c_n c_{n+1} c_{n-1} => c_n c_{n-1} c_{n+1}
inline DerivationScript sigma_rel2_script(int n) {
  detail::need(n >= 2, "sigma_rel2(n) needs n >= 2");
  detail::ScriptBuilder sb(detail::c_word({n - 1, n, n + 1, n - 1}));
  sb.expand_all("defc");
  // s_{n-1}^- s_n^+ s_n^- s_{n+1}^+ s_{n+1}^- s_{n+2}^+ s_{n-1}^- s_n^+
  sb.move(6, 3);
  sb.step(1, "loc", {std::to_string(n)});
  sb.step(0, "r4", {std::to_string(n - 1)});
  // s_n^- s_{n-1}^- s_n^+ s_{n+1}^+ s_{n+1}^- s_{n+2}^+ s_n^+
  sb.move(6, 5);
  sb.step(2, "r3", {std::to_string(n)});
  // s_n^- s_{n-1}^- s_{n+1}^+ s_n^+ s_{n+1}^- s_{n+2}^+
  sb.move(1, 2);
  detail::collapse(sb, "defc", 3);
  return sb.finish(detail::c_word({n, n - 1, n + 1}));
}

/// c_m c_n => c_n c_m, |m-n| > 2, through S-letter swaps.
inline DerivationScript sigma_commute_script(int m, int n) {
  detail::need(m >= 1 && n >= 1, "sigma_commute(m,n) needs positive indices");
  detail::need(std::abs(m - n) > 2, "sigma_commute(m,n) needs |m-n| > 2");
  detail::ScriptBuilder sb(detail::c_word({m, n}));
  sb.expand_all("defc");
  sb.move(2, 0);
  sb.move(3, 1);
  detail::collapse(sb, "defc", 2);
  return sb.finish(detail::c_word({n, m}));
}

/// s(v)s(u^-1)s(u)s(v) => s(u^-1)s(v)s(u) from the pentagon, u = w_n, v = w_{n+1}.
inline DerivationScript seven_term_script(int n = 1) {
  detail::need(n >= 1, "seven_term needs n >= 1");
  using G = Generator;
  const std::string u = "w" + std::to_string(n), v = "w" + std::to_string(n + 1);
  const std::string x = "-q^-1*" + u + "*" + v;
  detail::ScriptBuilder sb({G::s(n + 1, 1), G::s(n, -1), G::s(n, 1), G::s(n + 1, 1)});
  sb.step(1, "loc", {std::to_string(n)}, false);  // s(v) s(u) s(u^-1) s(v)
  sb.step(0, "pent", {u, v});                       // s(u) s(X) s(v) s(u^-1) s(v)
  sb.step(1, "pent", {x, u + "^-1"}, false);        // s(u) s(u^-1) s(X) s(v)
  sb.step(0, "loc", {std::to_string(n)});          // s(u^-1) s(u) s(X) s(v)
  sb.step(1, "pent", {u, v}, false);
  return sb.finish({G::s(n, -1), G::s(n + 1, 1), G::s(n, 1)});
}

/// s(v)s(u) => s(u)s(-qvu)s(v) from the two multiplication rules.
inline DerivationScript pentagon_script(int n = 1) {
  detail::need(n >= 1, "pentagon needs n >= 1");
  using G = Generator;
  const std::string u = "w" + std::to_string(n), v = "w" + std::to_string(n + 1);
  const std::string x = "-q^-1*" + u + "*" + v;
  detail::ScriptBuilder sb({G::s(n + 1, 1), G::s(n, 1)});
  sb.step(0, "mult2", {u, v});                                     // s(u+v-qvu)
  sb.step(0, "mult1", {u, render_arg(parse_arg(v + x))}, false);  // s(u) s(v-qvu)
  sb.step(1, "mult1", {x, v}, false);                             // s(u) s(-qvu) s(v)
  return sb.finish({G::s(n, 1), G::ext(parse_arg(x)), G::s(n + 1, 1)});
}

// ---------------------------------------------------------------------------
// Translation lemmas

enum class TranslationKind { BraidFwd, BraidRev, SigmaFwd, SigmaRev };

inline std::string to_string(TranslationKind k) {
  switch (k) {
    case TranslationKind::BraidFwd: return "braid_fwd";
    case TranslationKind::BraidRev: return "braid_rev";
    case TranslationKind::SigmaFwd: return "sigma_fwd";
    case TranslationKind::SigmaRev: return "sigma_rev";
  }
  return {};
}

inline TranslationKind parse_translation(const std::string& s) {
  for (auto k : {TranslationKind::BraidFwd, TranslationKind::BraidRev, TranslationKind::SigmaFwd,
                 TranslationKind::SigmaRev})
    if (to_string(k) == s) return k;
  throw InvalidParams("unknown translation kind '" + s + "'");
}

/// Admissible k for (m, n): braid kinds m <= k <= n-1, sigma_fwd
/// m+1 <= k <= n-2, sigma_rev m+1 <= k <= n-1.
inline std::pair<int, int> translation_range(TranslationKind kind, int m, int n) {
  switch (kind) {
    case TranslationKind::BraidFwd:
    case TranslationKind::BraidRev: return {m, n - 1};
    case TranslationKind::SigmaFwd: return {m + 1, n - 2};
    case TranslationKind::SigmaRev: return {m + 1, n - 1};
  }
  return {1, 0};
}

inline DerivationScript translation_script(TranslationKind kind, int m, int n, int k) {
  detail::need(m >= 1 && m < n, "translation lemmas need 1 <= m < n");
  const auto [lo, hi] = translation_range(kind, m, n);
  detail::need(lo <= k && k <= hi, to_string(kind) + " needs " + std::to_string(lo) + " <= k <= " + std::to_string(hi));
  using G = Generator;
  const auto K = std::to_string(k);
  switch (kind) {
    case TranslationKind::BraidFwd: {
      // (b_m ... b_n) b_k => b_{k+1} (b_m ... b_n)
      Word start = detail::b_range(m, n);
      start.push_back(G::b(k));
      detail::ScriptBuilder sb(start);
      const auto pk = static_cast<std::size_t>(k - m);
      sb.move(sb.word().size() - 1, pk + 2);
      sb.step(pk, "artin", {K});
      sb.move(pk, 0);
      Word end{G::b(k + 1)};
      for (const auto& g : detail::b_range(m, n)) end.push_back(g);
      return sb.finish(end);
    }
    case TranslationKind::BraidRev: {
      // (b_n ... b_m) b_{k+1} => b_k (b_n ... b_m)
      Word start = detail::b_range(n, m);
      start.push_back(G::b(k + 1));
      detail::ScriptBuilder sb(start);
      const auto pk1 = static_cast<std::size_t>(n - k - 1);  // position of b_{k+1}
      sb.move(sb.word().size() - 1, pk1 + 2);
      sb.step(pk1, "artin", {K}, false);
      sb.move(pk1, 0);
      Word end{G::b(k)};
      for (const auto& g : detail::b_range(n, m)) end.push_back(g);
      return sb.finish(end);
    }
    case TranslationKind::SigmaFwd: {
      // (c_m ... c_n) c_k => c_{k+1} (c_m ... c_n)
      Word start = detail::c_range(m, n);
      start.push_back(G::c(k));
      detail::ScriptBuilder sb(start);
      const auto pk = static_cast<std::size_t>(k - m);
      sb.move(sb.word().size() - 1, pk + 3);                      // c_k c_{k+1} c_{k+2} c_k
      sb.step(pk, "sig2", {std::to_string(k + 1)});               // c_{k+1} c_k c_{k+2}
      sb.step(pk - 1, "sig1", {K}, false);                        // c_{k+1} c_{k-1} c_k c_{k+1}
      sb.move(pk - 1, 0);
      Word end{G::c(k + 1)};
      for (const auto& g : detail::c_range(m, n)) end.push_back(g);
      return sb.finish(end);
    }
    case TranslationKind::SigmaRev: {
      // (c_n ... c_m) c_{k+1} => c_{k-1} (c_n ... c_m)
      Word start = detail::c_range(n, m);
      start.push_back(G::c(k + 1));
      detail::ScriptBuilder sb(start);
      const auto pk1 = static_cast<std::size_t>(n - k - 1);       // position of c_{k+1}
      sb.move(sb.word().size() - 1, pk1 + 3);                     // c_{k+1} c_k c_{k-1} c_{k+1}
      sb.step(pk1 + 1, "sig2", {K}, false);                       // c_{k+1} c_{k-1} c_k c_{k+1} c_{k-1}
      sb.step(pk1, "sig1", {K});                                  // c_{k-1} c_{k+1} c_k c_{k-1}
      sb.move(pk1, 0);
      Word end{G::c(k - 1)};
      for (const auto& g : detail::c_range(n, m)) end.push_back(g);
      return sb.finish(end);
    }
  }
  throw InvalidParams("unknown translation kind");
}

}  // namespace qdilog
