#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdilog/errors.hpp"
#include "qdilog/integer.hpp"
#include "qdilog/rational.hpp"
#include "qdilog/series.hpp"

namespace qdilog {

/// Lattice of `sites` generators w_1..w_N on a path: neighbours form Weyl
/// pairs w_n w_{n+1} = q^2 w_{n+1} w_n, all other pairs commute.
struct AlgebraConfig {
  int sites = 2;

  explicit AlgebraConfig(int n = 2) : sites(n) {
    if (n < 2) throw InvalidParams("a lattice needs at least two sites");
  }
};

/// Exponents of a normal-ordered monomial w_1^a_1 ... w_N^a_N, stored
/// sparsely as (site, exponent) pairs sorted by site with no zero entries.
class ExponentVector {
 public:
  ExponentVector() = default;

  /// From (site, exponent) pairs in any order; zero exponents are dropped
  /// and repeated sites summed.
  ExponentVector(std::initializer_list<std::pair<int, int>> entries) {
    for (const auto& [site, e] : entries) add(site, e);
  }

  static ExponentVector unit(int site, int exponent = 1) {
    ExponentVector v;
    v.add(site, exponent);
    return v;
  }

  /// Dense constructor: exps[0] is the exponent of w_1.
  static ExponentVector dense(const std::vector<int>& exps) {
    ExponentVector v;
    for (std::size_t i = 0; i < exps.size(); ++i) v.add(static_cast<int>(i) + 1, exps[i]);
    return v;
  }

  int at(int site) const {
    auto it = std::lower_bound(e_.begin(), e_.end(), site,
                               [](const auto& p, int s) { return p.first < s; });
    return it != e_.end() && it->first == site ? it->second : 0;
  }

  void add(int site, int exponent) {
    if (site < 1) throw InvalidParams("site indices start at 1");
    auto it = std::lower_bound(e_.begin(), e_.end(), site,
                               [](const auto& p, int s) { return p.first < s; });
    if (it != e_.end() && it->first == site) {
      it->second = checked_add(it->second, exponent);
      if (it->second == 0) e_.erase(it);
    } else if (exponent != 0) {
      e_.insert(it, {site, exponent});
    }
  }

  const std::vector<std::pair<int, int>>& entries() const { return e_; }
  bool is_identity() const { return e_.empty(); }
  int max_site() const { return e_.empty() ? 0 : e_.back().first; }

  friend ExponentVector operator+(const ExponentVector& a, const ExponentVector& b) {
    ExponentVector r = a;
    for (const auto& [s, e] : b.e_) r.add(s, e);
    return r;
  }

  ExponentVector operator-() const {
    ExponentVector r = *this;
    for (auto& p : r.e_) p.second = -p.second;
    return r;
  }

  ExponentVector scaled(int k) const {
    if (k == 0) return {};
    ExponentVector r = *this;
    for (auto& p : r.e_) p.second = checked_mul(p.second, k);
    return r;
  }

  friend bool operator==(const ExponentVector& a, const ExponentVector& b) { return a.e_ == b.e_; }

  /// Lexicographic order of the dense vectors (a_1, a_2, ...).
  friend bool operator<(const ExponentVector& a, const ExponentVector& b) {
    std::size_t i = 0, j = 0;
    while (i < a.e_.size() || j < b.e_.size()) {
      const int sa = i < a.e_.size() ? a.e_[i].first : std::numeric_limits<int>::max();
      const int sb = j < b.e_.size() ? b.e_[j].first : std::numeric_limits<int>::max();
      const int site = std::min(sa, sb);
      const int ea = sa == site ? a.e_[i].second : 0;
      const int eb = sb == site ? b.e_[j].second : 0;
      if (ea != eb) return ea < eb;
      if (sa == site) ++i;
      if (sb == site) ++j;
    }
    return false;
  }

  /// Dense rendering over sites 1..n, e.g. `w1^0*w2^1`.
  std::string to_string(int n) const {
    std::ostringstream os;
    for (int s = 1; s <= n; ++s) os << (s > 1 ? "*" : "") << "w" << s << "^" << at(s);
    return os.str();
  }

  /// Rendering over the stored sites only, e.g. `w2^1`, `1` for identity.
  std::string to_string() const {
    if (e_.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < e_.size(); ++i)
      os << (i ? "*" : "") << "w" << e_[i].first << "^" << e_[i].second;
    return os.str();
  }

 private:
  std::vector<std::pair<int, int>> e_;
};

inline void validate(const AlgebraConfig& cfg, const ExponentVector& v) {
  if (v.max_site() > cfg.sites) throw InvalidParams("site index outside the lattice");
}

/// q-exponent picked up when w^a * w^b is brought to normal order:
/// w^a w^b = q^phase(a,b) w^(a+b), phase(a,b) = -2 sum_i a_{i+1} b_i.
inline int phase_exponent(const ExponentVector& a, const ExponentVector& b) {
  long acc = 0;
  for (const auto& [site, eb] : b.entries()) {
    const int ea = a.at(site + 1);
    if (ea != 0) acc += static_cast<long>(ea) * eb;
  }
  acc *= -2;
  if (acc > std::numeric_limits<int>::max() || acc < std::numeric_limits<int>::min())
    throw std::overflow_error("phase overflow");
  return static_cast<int>(acc);
}

inline Series mul_q_power(const Series& c, int k) { return c.shifted(k); }
inline RationalQ mul_q_power(const RationalQ& c, int k) { return c.shifted(k); }

/// Only exact zeros are dropped from elements: a truncated `0 (mod q^p)`
/// still records how far the coefficient is known.
inline bool is_exact_zero(const Series& c) { return c.is_zero() && c.is_exact(); }
inline bool is_exact_zero(const RationalQ& c) { return c.is_zero(); }

inline std::string coeff_to_string(const Series& c) { return c.to_string(); }
inline std::string coeff_to_string(const RationalQ& c) { return c.to_string(); }

/// Coefficient types usable in Element: exact rational functions or
/// truncated series, never mixed within one element.
template <typename C>
concept Coefficient = requires(const C& a, const C& b, int k) {
  { a + b } -> std::convertible_to<C>;
  { a * b } -> std::convertible_to<C>;
  { is_exact_zero(a) } -> std::convertible_to<bool>;
  { mul_q_power(a, k) } -> std::convertible_to<C>;
};

/// Sparse linear combination of normal-ordered monomials.
template <Coefficient C>
class Element {
 public:
  using Terms = std::map<ExponentVector, C>;

  Element() = default;

  static Element monomial(const ExponentVector& exps, C coeff) {
    Element e;
    e.add_term(exps, std::move(coeff));
    return e;
  }

  static Element scalar(C coeff) { return monomial(ExponentVector{}, std::move(coeff)); }

  /// Single generator w_site^exponent with coefficient `one`.
  static Element generator(int site, int exponent, C one) {
    return monomial(ExponentVector::unit(site, exponent), std::move(one));
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  C coefficient(const ExponentVector& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? C{} : it->second;
  }

  void add_term(const ExponentVector& exps, C coeff) {
    if (is_exact_zero(coeff)) return;
    auto [it, inserted] = terms_.try_emplace(exps, coeff);
    if (!inserted) {
      it->second = it->second + coeff;
      if (is_exact_zero(it->second)) terms_.erase(it);
    }
  }

  int max_site() const {
    int m = 0;
    for (const auto& [e, c] : terms_) m = std::max(m, e.max_site());
    return m;
  }

  friend Element operator+(Element a, const Element& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }

  Element operator-() const {
    Element r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  friend Element operator-(const Element& a, const Element& b) { return a + (-b); }

  /// Left multiplication by a central scalar.
  Element scaled(const C& k) const {
    Element r;
    for (const auto& [e, c] : terms_) r.add_term(e, k * c);
    return r;
  }

  Element times_q_power(int k) const {
    Element r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, mul_q_power(c, k));
    return r;
  }

  friend bool operator==(const Element& a, const Element& b) { return a.terms_ == b.terms_; }

  /// Per-term rendering `coeff * w1^a1*...*wN^aN`, terms in lexicographic
  /// order of their exponent vectors.
  std::string to_string(int n) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << coeff_to_string(c) << ") * " << e.to_string(n);
    }
    return os.str();
  }

 private:
  Terms terms_;
};

/// Exact product in normal form: each term pair (a, b) contributes
/// coeff_a * coeff_b * q^phase(a,b) at a + b.
template <Coefficient C>
Element<C> normal_mul(const Element<C>& x, const Element<C>& y) {
  Element<C> r;
  for (const auto& [a, ca] : x.terms())
    for (const auto& [b, cb] : y.terms()) r.add_term(a + b, mul_q_power(ca * cb, phase_exponent(a, b)));
  return r;
}

template <Coefficient C>
Element<C> power(const Element<C>& x, int k, const C& one) {
  Element<C> r = Element<C>::scalar(one);
  for (int i = 0; i < k; ++i) r = normal_mul(r, x);
  return r;
}

/// Keeps the terms whose exponents lie in [-W, W] on every site and whose
/// support is inside `support`.
template <Coefficient C>
Element<C> restrict_window(const Element<C>& x, int window, const std::set<int>& support) {
  if (window < 0) throw InvalidParams("window must be nonnegative");
  Element<C> r;
  for (const auto& [e, c] : x.terms()) {
    bool keep = true;
    for (const auto& [site, exp] : e.entries())
      if (std::abs(exp) > window || !support.contains(site)) {
        keep = false;
        break;
      }
    if (keep) r.add_term(e, c);
  }
  return r;
}

/// Per-site exponent ranges [lo, hi]; sites not listed must have exponent 0.
struct Window {
  std::map<int, std::pair<int, int>> ranges;

  static Window symmetric(const std::set<int>& sites, int w) {
    Window win;
    for (int s : sites) win.ranges[s] = {-w, w};
    return win;
  }

  bool contains(const ExponentVector& e) const {
    for (const auto& [site, exp] : e.entries()) {
      auto it = ranges.find(site);
      if (it == ranges.end() || exp < it->second.first || exp > it->second.second) return false;
    }
    return true;
  }

  /// Every exponent vector in the box, in lexicographic order.
  std::vector<ExponentVector> targets() const {
    std::vector<ExponentVector> out{ExponentVector{}};
    for (const auto& [site, range] : ranges) {
      std::vector<ExponentVector> next;
      for (const auto& base : out)
        for (int e = range.first; e <= range.second; ++e) {
          ExponentVector v = base;
          v.add(site, e);
          next.push_back(std::move(v));
        }
      out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

template <Coefficient C>
Element<C> restrict_window(const Element<C>& x, const Window& window) {
  Element<C> r;
  for (const auto& [e, c] : x.terms())
    if (window.contains(e)) r.add_term(e, c);
  return r;
}

}  // namespace qdilog
