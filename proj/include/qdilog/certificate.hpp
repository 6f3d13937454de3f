#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdilog/errors.hpp"
#include "qdilog/integer.hpp"
#include "qdilog/qexp.hpp"
#include "qdilog/series.hpp"
#include "qdilog/torus.hpp"

namespace qdilog {

namespace detail {

using RMatrix = std::vector<std::vector<Rational>>;

inline Integer lcm(const Integer& a, const Integer& b) { return a / boost::multiprecision::gcd(a, b) * b; }

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
inline Integer bareiss_det(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

inline RMatrix invert(RMatrix a) {
  const std::size_t n = a.size();
  RMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw NoCertificate("singular Gram matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const Rational piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

inline Integer floor_rational(const Rational& x) {
  Integer n = numerator(x), d = denominator(x);
  Integer q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

}  // namespace detail

/// Valuation data for a product of q-exponentials of monomial arguments
/// s(sign_l q^p_l w^a_l). The index tuple k contributes
///   prod_l (-sign_l)^k_l * q^V(k) * prod_l e_{k_l} * w^(sum k_l a_l)
/// with V(k) = k^T M k + lin . k, M integer symmetric.
///
/// On the solution set of sum_l k_l a_l = target the free indices f
/// parametrize k = k0(target) + D f, and V becomes f^T G f + b f + c0 with
/// G = D^T M D independent of the target. G positive definite makes every
/// sublevel set {V < P} finite; that is what the certificate records.
class ValuationShape {
 public:
  explicit ValuationShape(std::vector<MonomialArg> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw InvalidParams("empty factor product");
    build_form();
    build_constraints();
    build_gram();
  }

  const std::vector<MonomialArg>& factors() const { return factors_; }
  std::size_t length() const { return factors_.size(); }
  const std::vector<int>& sites() const { return sites_; }
  const std::vector<std::size_t>& free_factors() const { return free_; }
  const std::vector<std::vector<std::int64_t>>& quadratic() const { return quad_; }
  const std::vector<std::int64_t>& linear() const { return lin_; }

  /// Gram data scaled to integers: gram_int = gram_scale * G.
  const std::vector<std::vector<Integer>>& gram_integer() const { return gram_int_; }
  const Integer& gram_scale() const { return gram_scale_; }
  const std::vector<Integer>& leading_minors() const { return minors_; }
  bool positive_definite() const { return pd_; }

  std::int64_t valuation(const std::vector<int>& k) const {
    std::int64_t v = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      v += lin_[i] * k[i];
      for (std::size_t j = 0; j < k.size(); ++j) v += quad_[i][j] * k[i] * k[j];
    }
    return v;
  }

  /// Sign of the contribution of tuple k.
  int sign(const std::vector<int>& k) const {
    int s = 1;
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] % 2 != 0 && factors_[i].sign == 1) s = -s;
    return s;
  }

  ExponentVector monomial_of(const std::vector<int>& k) const {
    ExponentVector e;
    for (std::size_t i = 0; i < k.size(); ++i) e = e + factors_[i].exps.scaled(k[i]);
    return e;
  }

  struct Solution {
    bool consistent = false;
    std::vector<Rational> base;  // k0, length L, zero on free factors
  };

  Solution particular(const ExponentVector& target) const {
    Solution s;
    for (const auto& [site, e] : target.entries())
      if (site_row_.find(site) == site_row_.end() && e != 0) return s;
    std::vector<Rational> t(sites_.size(), Rational(0));
    for (std::size_t r = 0; r < sites_.size(); ++r) t[r] = target.at(sites_[r]);
    std::vector<Rational> rt(sites_.size(), Rational(0));
    for (std::size_t r = 0; r < sites_.size(); ++r)
      for (std::size_t c = 0; c < sites_.size(); ++c) rt[r] += transform_[r][c] * t[c];
    for (std::size_t r = pivots_.size(); r < sites_.size(); ++r)
      if (rt[r] != 0) return s;
    s.consistent = true;
    s.base.assign(factors_.size(), Rational(0));
    for (std::size_t r = 0; r < pivots_.size(); ++r) s.base[pivots_[r]] = rt[r];
    return s;
  }

  /// Column j of D restricted to pivot factors: k_pivot(r) = base - sum_j reduced[r][j] f_j.
  const detail::RMatrix& reduced() const { return reduced_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  const detail::RMatrix& gram() const { return gram_; }
  const detail::RMatrix& gram_inverse() const { return gram_inv_; }

  /// D as a rational L x F matrix.
  detail::RMatrix direction_matrix() const {
    detail::RMatrix d(factors_.size(), std::vector<Rational>(free_.size(), Rational(0)));
    for (std::size_t j = 0; j < free_.size(); ++j) {
      d[free_[j]][j] = 1;
      for (std::size_t r = 0; r < pivots_.size(); ++r) d[pivots_[r]][j] = -reduced_[r][j];
    }
    return d;
  }

 private:
  void build_form() {
    const std::size_t n = factors_.size();
    quad_.assign(n, std::vector<std::int64_t>(n, 0));
    lin_.assign(n, 0);
    for (std::size_t l = 0; l < n; ++l) {
      const int self = phase_exponent(factors_[l].exps, factors_[l].exps);
      quad_[l][l] = 1 + self / 2;
      lin_[l] = factors_[l].q_power - self / 2;
      for (std::size_t m = l + 1; m < n; ++m) {
        const int cross = phase_exponent(factors_[l].exps, factors_[m].exps);
        quad_[l][m] = quad_[m][l] = cross / 2;
      }
    }
  }

  void build_constraints() {
    std::map<int, int> seen;
    for (const auto& f : factors_)
      for (const auto& [site, e] : f.exps.entries()) seen[site] = 0;
    for (const auto& [site, unused] : seen) {
      site_row_[site] = sites_.size();
      sites_.push_back(site);
    }
    const std::size_t rows = sites_.size(), cols = factors_.size();
    detail::RMatrix a(rows, std::vector<Rational>(cols, Rational(0)));
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [site, e] : factors_[c].exps.entries()) a[site_row_[site]][c] = e;
    transform_.assign(rows, std::vector<Rational>(rows, Rational(0)));
    for (std::size_t r = 0; r < rows; ++r) transform_[r][r] = 1;

    // reduced row echelon form, tracking the row operations in transform_
    std::size_t row = 0;
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c = 0; c < cols && row < rows; ++c) {
      std::size_t p = row;
      while (p < rows && a[p][c] == 0) ++p;
      if (p == rows) continue;
      std::swap(a[p], a[row]);
      std::swap(transform_[p], transform_[row]);
      const Rational piv = a[row][c];
      for (std::size_t j = 0; j < cols; ++j) a[row][j] /= piv;
      for (std::size_t j = 0; j < rows; ++j) transform_[row][j] /= piv;
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == row || a[r][c] == 0) continue;
        const Rational f = a[r][c];
        for (std::size_t j = 0; j < cols; ++j) a[r][j] -= f * a[row][j];
        for (std::size_t j = 0; j < rows; ++j) transform_[r][j] -= f * transform_[row][j];
      }
      pivots_.push_back(c);
      is_pivot[c] = true;
      ++row;
    }
    for (std::size_t c = 0; c < cols; ++c)
      if (!is_pivot[c]) free_.push_back(c);
    reduced_.assign(pivots_.size(), std::vector<Rational>(free_.size(), Rational(0)));
    for (std::size_t r = 0; r < pivots_.size(); ++r)
      for (std::size_t j = 0; j < free_.size(); ++j) reduced_[r][j] = a[r][free_[j]];
  }

  void build_gram() {
    const std::size_t nf = free_.size();
    const auto d = direction_matrix();
    gram_.assign(nf, std::vector<Rational>(nf, Rational(0)));
    for (std::size_t i = 0; i < nf; ++i)
      for (std::size_t j = 0; j < nf; ++j)
        for (std::size_t l = 0; l < factors_.size(); ++l) {
          if (d[l][i] == 0) continue;
          for (std::size_t m = 0; m < factors_.size(); ++m)
            if (d[m][j] != 0 && quad_[l][m] != 0) gram_[i][j] += d[l][i] * Rational(quad_[l][m]) * d[m][j];
        }
    gram_scale_ = 1;
    for (const auto& r : gram_)
      for (const auto& x : r) gram_scale_ = detail::lcm(gram_scale_, denominator(x));
    gram_int_.assign(nf, std::vector<Integer>(nf, Integer(0)));
    for (std::size_t i = 0; i < nf; ++i)
      for (std::size_t j = 0; j < nf; ++j)
        gram_int_[i][j] = numerator(gram_[i][j] * Rational(gram_scale_));

    // Sylvester's criterion on the integer matrix
    pd_ = true;
    for (std::size_t k = 1; k <= nf; ++k) {
      std::vector<std::vector<Integer>> lead(k, std::vector<Integer>(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) lead[i][j] = gram_int_[i][j];
      minors_.push_back(detail::bareiss_det(std::move(lead)));
      if (minors_.back() <= 0) pd_ = false;
    }
    if (pd_ && nf > 0) gram_inv_ = detail::invert(gram_);
  }

  std::vector<MonomialArg> factors_;
  std::vector<std::vector<std::int64_t>> quad_;
  std::vector<std::int64_t> lin_;
  std::vector<int> sites_;
  std::map<int, std::size_t> site_row_;
  detail::RMatrix transform_;
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> free_;
  detail::RMatrix reduced_;
  detail::RMatrix gram_;
  detail::RMatrix gram_inv_;
  std::vector<std::vector<Integer>> gram_int_;
  Integer gram_scale_ = 1;
  std::vector<Integer> minors_;
  bool pd_ = false;
};

/// Certified finite set of index tuples contributing to one target
/// coefficient modulo q^P.
struct TupleCertificate {
  ExponentVector target;
  int precision = 0;
  std::vector<std::vector<int>> tuples;
  std::vector<std::int64_t> valuations;
  /// Bounding box on the free indices implied by V >= min V + (f-c)^T G (f-c).
  std::vector<std::pair<std::int64_t, std::int64_t>> box;
  /// Exact minimum of V over the real solution space; nullopt when the
  /// target is unreachable.
  std::optional<Rational> min_valuation;
  std::size_t box_points = 0;
  /// Every tuple outside `tuples` has valuation at least this; equals P.
  std::int64_t excluded_valuation_bound = 0;
  /// Smallest valuation among enumerated but rejected tuples, if any.
  std::optional<std::int64_t> nearest_excluded;

  int max_index() const {
    int m = 0;
    for (const auto& t : tuples)
      for (int k : t) m = std::max(m, k);
    return m;
  }
};

/// Exact set {k >= 0 : sum k_l a_l = target, V(k) < P}.
inline TupleCertificate enumerate_tuples(const ValuationShape& shape, const ExponentVector& target, int precision,
                                         std::size_t max_box_points = 200'000'000) {
  if (!shape.positive_definite())
    throw NoCertificate("valuation form is not positive definite on the constraint lattice");
  TupleCertificate cert;
  cert.target = target;
  cert.precision = precision;
  cert.excluded_valuation_bound = precision;
  const auto sol = shape.particular(target);
  if (!sol.consistent) return cert;

  const std::size_t nf = shape.free_factors().size();
  const std::size_t nl = shape.length();
  const auto& quad = shape.quadratic();
  const auto& lin = shape.linear();
  const auto d = shape.direction_matrix();

  // V(k0 + D f) = f^T G f + b . f + c0
  std::vector<Rational> mk0(nl, Rational(0));
  for (std::size_t l = 0; l < nl; ++l)
    for (std::size_t m = 0; m < nl; ++m)
      if (quad[l][m] != 0) mk0[l] += Rational(quad[l][m]) * sol.base[m];
  Rational c0 = 0;
  for (std::size_t l = 0; l < nl; ++l) c0 += sol.base[l] * mk0[l] + Rational(lin[l]) * sol.base[l];
  std::vector<Rational> b(nf, Rational(0));
  for (std::size_t j = 0; j < nf; ++j)
    for (std::size_t l = 0; l < nl; ++l)
      if (d[l][j] != 0) b[j] += d[l][j] * (2 * mk0[l] + Rational(lin[l]));

  std::vector<Rational> center(nf, Rational(0));
  Rational vmin = c0;
  const auto& ginv = shape.gram_inverse();
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j) center[i] -= ginv[i][j] * b[j] / 2;
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j) vmin -= b[i] * ginv[i][j] * b[j] / 4;
  cert.min_valuation = vmin;
  const Rational slack = Rational(precision) - vmin;
  if (slack <= 0) return cert;

  // (f_j - c_j)^2 <= slack * Ginv_jj on the sublevel set
  std::size_t volume = 1;
  for (std::size_t j = 0; j < nf; ++j) {
    const Rational radius2 = slack * ginv[j][j];
    const Rational& c = center[j];
    Integer hi = detail::floor_rational(c);
    while (Rational(hi + 1 - c) * Rational(hi + 1 - c) <= radius2) ++hi;
    Integer lo = -detail::floor_rational(-c);
    while (Rational(lo - 1 - c) * Rational(lo - 1 - c) <= radius2) --lo;
    if (lo < 0) lo = 0;
    if (hi < lo) return cert;
    cert.box.emplace_back(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi));
    volume *= static_cast<std::size_t>(hi - lo + 1);
    if (volume > max_box_points) throw InvalidParams("enumeration box too large; lower the precision");
  }
  cert.box_points = volume;

  // pivot_r = (num_r - sum_j coef_rj f_j) / den_r over the integers
  const auto& pivots = shape.pivots();
  const auto& red = shape.reduced();
  std::vector<std::int64_t> den(pivots.size()), num(pivots.size());
  std::vector<std::vector<std::int64_t>> coef(pivots.size(), std::vector<std::int64_t>(nf));
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    Integer dd = denominator(sol.base[pivots[r]]);
    for (std::size_t j = 0; j < nf; ++j) dd = detail::lcm(dd, denominator(red[r][j]));
    den[r] = static_cast<std::int64_t>(dd);
    num[r] = static_cast<std::int64_t>(numerator(sol.base[pivots[r]] * Rational(dd)));
    for (std::size_t j = 0; j < nf; ++j) coef[r][j] = static_cast<std::int64_t>(numerator(red[r][j] * Rational(dd)));
  }

  std::vector<std::int64_t> f(nf);
  for (std::size_t j = 0; j < nf; ++j) f[j] = cert.box[j].first;
  std::vector<int> k(nl, 0);
  std::int64_t excluded_min = std::numeric_limits<std::int64_t>::max();
  while (true) {
    bool ok = true;
    for (std::size_t j = 0; j < nf; ++j) k[shape.free_factors()[j]] = static_cast<int>(f[j]);
    for (std::size_t r = 0; r < pivots.size() && ok; ++r) {
      std::int64_t acc = num[r];
      for (std::size_t j = 0; j < nf; ++j) acc -= coef[r][j] * f[j];
      if (acc % den[r] != 0 || acc / den[r] < 0) {
        ok = false;
      } else {
        k[pivots[r]] = static_cast<int>(acc / den[r]);
      }
    }
    if (ok) {
      const std::int64_t v = shape.valuation(k);
      if (v < precision) {
        cert.tuples.push_back(k);
        cert.valuations.push_back(v);
      } else {
        excluded_min = std::min(excluded_min, v);
      }
    }
    std::size_t j = 0;
    while (j < nf) {
      if (++f[j] <= cert.box[j].second) break;
      f[j] = cert.box[j].first;
      ++j;
    }
    if (j == nf) break;
  }
  if (excluded_min != std::numeric_limits<std::int64_t>::max()) cert.nearest_excluded = excluded_min;
  return cert;
}

/// Coefficient of the certificate's target modulo q^P.
inline Series certified_coefficient(const ValuationShape& shape, const TupleCertificate& cert, EulerCache& cache) {
  Series total(Integer(0), cert.precision);
  for (std::size_t t = 0; t < cert.tuples.size(); ++t) {
    const auto& k = cert.tuples[t];
    const int v = static_cast<int>(cert.valuations[t]);
    const int need = cert.precision - v;
    Series term(Integer(shape.sign(k)), need);
    for (int idx : k)
      if (idx > 0) term = term * cache.unit(idx, need).truncated(need);
    total += term.shifted(v);
  }
  return total;
}

}  // namespace qdilog
