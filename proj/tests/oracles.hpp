#pragma once

// Independent reference computations used only by the tests.

#include <cstdint>
#include <map>
#include <vector>

#include "qdilog/qexp.hpp"
#include "qdilog/torus.hpp"

namespace oracle {

using qdilog::ExponentVector;
using qdilog::Integer;
using qdilog::Series;

/// q-exponent of w^a w^b by moving single letters w_n^{+-1} past each other
/// with w_{n+1}^e w_n^f = q^{-2ef} w_n^f w_{n+1}^e and distant letters
/// commuting.
inline int rewrite_phase(const ExponentVector& a, const ExponentVector& b) {
  std::vector<std::pair<int, int>> letters;  // (site, +-1)
  for (const auto* v : {&a, &b})
    for (const auto& [site, e] : v->entries())
      for (int i = 0; i < std::abs(e); ++i) letters.emplace_back(site, e > 0 ? 1 : -1);
  int phase = 0;
  for (std::size_t pass = 0; pass < letters.size(); ++pass)
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
      auto& l = letters[i];
      auto& r = letters[i + 1];
      if (l.first <= r.first) continue;
      if (l.first == r.first + 1) phase += -2 * l.second * r.second;
      std::swap(l, r);
    }
  return phase;
}

/// Coefficient of x^k in prod_{n < factors} (1 - x q^(2n+1)) mod q^P,
/// expanded as a commutative polynomial in x and q.
inline Series euler_from_product(int k, int precision, int factors = -1) {
  if (factors < 0) factors = (precision + 1) / 2;
  std::vector<std::map<int, Integer>> poly(1);  // poly[j] = coefficient of x^j
  poly[0][0] = 1;
  for (int n = 0; n < factors; ++n) {
    std::vector<std::map<int, Integer>> next(poly.size() + 1);
    for (std::size_t j = 0; j < poly.size(); ++j)
      for (const auto& [e, c] : poly[j]) {
        next[j][e] += c;
        if (e + 2 * n + 1 < precision) next[j + 1][e + 2 * n + 1] -= c;
      }
    poly = std::move(next);
  }
  std::map<int, Integer> out;
  if (k < static_cast<int>(poly.size()))
    for (const auto& [e, c] : poly[static_cast<std::size_t>(k)])
      if (c != 0) out[e] = c;
  return Series::from_terms(out, precision);
}

/// Coefficient of `target` in prod_l s(w_{site_l}^{sign_l}) mod q^P by
/// scanning every tuple with 0 <= k_l <= kmax.
inline Series brute_coefficient(const qdilog::FactorProduct& p, const ExponentVector& target, int precision,
                                int kmax = 12) {
  const std::size_t L = p.size();
  std::map<std::pair<int, int>, Series> c;
  auto euler = [&](int k, int prec) -> const Series& {
    auto it = c.find({k, prec});
    if (it == c.end()) it = c.emplace(std::pair{k, prec}, euler_from_product(k, prec, prec)).first;
    return it->second;
  };
  Series total(Integer(0), precision);
  std::vector<int> k(L, 0);
  while (true) {
    ExponentVector acc;
    for (std::size_t l = 0; l < L; ++l) acc.add(p[l].site, k[l] * p[l].sign);
    if (acc == target) {
      ExponentVector cur;
      int phase = 0;
      for (std::size_t l = 0; l < L; ++l)
        for (int i = 0; i < k[l]; ++i) {
          const auto letter = ExponentVector::unit(p[l].site, p[l].sign);
          phase += rewrite_phase(cur, letter);
          cur = cur + letter;
        }
      int squares = 0;
      for (int kl : k) squares += kl * kl;
      if (squares + phase < precision) {
        const int need = std::max(precision, precision - phase);
        Series term(Integer(1), need);
        for (std::size_t l = 0; l < L; ++l) term = term * euler(k[l], need);
        total += term.shifted(phase).truncated(precision);
      }
    }
    std::size_t j = 0;
    while (j < L && ++k[j] > kmax) k[j++] = 0;
    if (j == L) break;
  }
  return total;
}

/// Brute-force tuple set for a product, all tuples with valuation < P.
inline std::vector<std::vector<int>> brute_tuples(const qdilog::FactorProduct& p, const ExponentVector& target,
                                                  int precision, int kmax = 12) {
  std::vector<std::vector<int>> out;
  const std::size_t L = p.size();
  std::vector<int> k(L, 0);
  while (true) {
    ExponentVector acc;
    for (std::size_t l = 0; l < L; ++l) acc.add(p[l].site, k[l] * p[l].sign);
    if (acc == target) {
      ExponentVector cur;
      long v = 0;
      for (std::size_t l = 0; l < L; ++l) {
        v += static_cast<long>(k[l]) * k[l];
        for (int i = 0; i < k[l]; ++i) {
          const auto letter = ExponentVector::unit(p[l].site, p[l].sign);
          v += rewrite_phase(cur, letter);
          cur = cur + letter;
        }
      }
      if (v < precision) out.push_back(k);
    }
    std::size_t j = 0;
    while (j < L && ++k[j] > kmax) k[j++] = 0;
    if (j == L) break;
  }
  return out;
}

}  // namespace oracle
