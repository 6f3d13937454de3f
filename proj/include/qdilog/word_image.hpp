#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "qdilog/derivation.hpp"
#include "qdilog/verifier.hpp"
#include "qdilog/words.hpp"

namespace qdilog {

/// Image of a word in the lattice algebra: every coefficient mod q^P on the
/// monomials with |exponent| <= W over the sites the word touches. Terms
/// that vanish mod q^P are omitted, so images compare with ==.
inline Element<Series> word_image(const Word& w, int sites, int window, int precision, EulerCache& cache) {
  if (precision < 1) throw InvalidParams("precision must be at least 1");
  validate(w, sites);
  const GeneralProduct p = to_product(w);
  const Window win = Window::symmetric(detail::sites_of(p), window);
  Element<Series> out;
  if (const auto shape = monomial_shape(p)) {
    for (const auto& t : win.targets()) {
      const Series c = certified_coefficient(*shape, enumerate_tuples(*shape, t, precision), cache);
      if (!c.is_zero()) out.add_term(t, c);
    }
    return out;
  }
  if (finitely_supported(p)) {
    const auto exact = exact_product(p, win);
    for (const auto& [e, c] : exact.terms()) {
      const Series s = rq_expand(c, precision);
      if (!s.is_zero()) out.add_term(e, s);
    }
    return out;
  }
  const auto truncated = truncated_product(p, win, precision);
  for (const auto& [e, c] : truncated.terms())
    if (!c.is_zero()) out.add_term(e, c);
  return out;
}

inline Element<Series> word_image(const Word& w, int sites, int window, int precision) {
  EulerCache cache;
  return word_image(w, sites, window, precision, cache);
}

/// Every S-level rule instance on a lattice of `sites` sites.
inline std::vector<Rule> s_rules(int sites) {
  std::vector<Rule> out;
  const auto str = [](int i) { return std::to_string(i); };
  for (int n = 1; n < sites; ++n) {
    for (const char* id : {"r1", "r2", "r3", "r4"}) out.push_back(make_rule(id, {str(n)}));
    for (const char* e : {"+", "-"}) {
      out.push_back(make_rule("fam1", {str(n), e}));
      out.push_back(make_rule("fam2", {str(n), e}));
    }
  }
  for (int n = 1; n <= sites; ++n) out.push_back(make_rule("loc", {str(n)}));
  for (int m = 1; m <= sites; ++m)
    for (int n = 1; n <= sites; ++n)
      if (std::abs(m - n) > 1)
        for (const char* a : {"+", "-"})
          for (const char* b : {"+", "-"}) out.push_back(make_rule("comm", {str(m) + a, str(n) + b}));
  return out;
}

/// All steps from `rules` that apply somewhere in `w`, in a fixed order.
inline std::vector<Step> applicable_steps(const Word& w, const std::vector<Rule>& rules) {
  std::vector<Step> out;
  for (const auto& r : rules)
    for (bool fwd : {true, false}) {
      const Word& side = fwd ? r.lhs : r.rhs;
      for (std::size_t pos = 0; pos + side.size() <= w.size(); ++pos)
        if (std::equal(side.begin(), side.end(), w.begin() + static_cast<std::ptrdiff_t>(pos)))
          out.push_back({pos, r.id, r.bindings, fwd});
    }
  return out;
}

inline Word random_s_word(std::mt19937_64& rng, int sites, std::size_t length) {
  Word w;
  for (std::size_t i = 0; i < length; ++i) {
    const int site = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(sites));
    w.push_back(Generator::s(site, rng() % 2 ? 1 : -1));
  }
  return w;
}

struct WalkReport {
  bool pass = true;
  std::vector<Word> words;
  std::vector<Step> steps;
  std::size_t stuck = 0;  // restarts: no rule applied, or only swaps for five steps
  std::size_t nontrivial = 0;  // steps using r1..r4, fam1, fam2
  std::optional<std::size_t> first_change;
};

/// Seeded random rewrite walk checking that the word image never changes.
/// Walks start from a random relation side padded with random letters, and
/// restart that way whenever no rule applies or only swaps have applied for
/// five steps. Half of the steps prefer a nontrivial rule when one applies.
inline WalkReport rewrite_walk(std::uint64_t seed, int sites, std::size_t steps, int window, int precision,
                               std::size_t max_length = 9) {
  std::mt19937_64 rng(seed);
  const auto rules = s_rules(sites);
  EulerCache cache;
  WalkReport rep;
  auto fresh = [&] {
    const Rule& r = rules[rng() % rules.size()];
    Word w = rng() % 2 ? r.lhs : r.rhs;
    const Word pad = random_s_word(rng, sites, 2);
    w.insert(rng() % 2 ? w.begin() : w.end(), pad.begin(), pad.end());
    return w;
  };
  Word w = fresh();
  std::size_t idle = 0;
  auto image = word_image(w, sites, window, precision, cache);
  rep.words.push_back(w);
  for (std::size_t i = 0; i < steps; ++i) {
    auto options = applicable_steps(w, rules);
    std::erase_if(options, [&](const Step& s) {
      const Rule r = make_rule(s);
      return w.size() - (s.forward ? r.lhs : r.rhs).size() + (s.forward ? r.rhs : r.lhs).size() > max_length;
    });
    const auto nontrivial = [](const Step& s) { return s.rule != "loc" && s.rule != "comm"; };
    std::vector<Step> moves;
    std::copy_if(options.begin(), options.end(), std::back_inserter(moves), nontrivial);
    idle = moves.empty() ? idle + 1 : 0;
    while (options.empty() || idle > 4) {
      ++rep.stuck;
      idle = 0;
      w = fresh();
      image = word_image(w, sites, window, precision, cache);
      rep.words.push_back(w);
      options = applicable_steps(w, rules);
      moves.clear();
      std::copy_if(options.begin(), options.end(), std::back_inserter(moves), nontrivial);
    }
    if (moves.empty() || rng() % 2) moves = std::move(options);
    const Step s = moves[rng() % moves.size()];
    w = apply_step(w, s);
    const auto next = word_image(w, sites, window, precision, cache);
    rep.steps.push_back(s);
    if (nontrivial(s)) ++rep.nontrivial;
    rep.words.push_back(w);
    if (!(next == image)) {
      rep.pass = false;
      if (!rep.first_change) rep.first_change = i;
    }
    image = next;
  }
  return rep;
}

}  // namespace qdilog
