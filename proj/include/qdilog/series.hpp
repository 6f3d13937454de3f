#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdilog/errors.hpp"
#include "qdilog/integer.hpp"

namespace qdilog {

/// Truncated Laurent series in q with arbitrary-precision integer
/// coefficients. A series with precision P carries no information about
/// exponents >= P; exact values (polynomials, phases) use kExact.
///
/// Storage is dense from the lowest nonzero exponent and trimmed at both
/// ends, so the zero series has no coefficients.
class Series {
 public:
  static constexpr int kExact = std::numeric_limits<int>::max() / 2;

  Series() = default;

  explicit Series(Integer constant, int precision = kExact) : precision_(clamp(precision)) {
    if (constant != 0 && 0 < precision_) coeffs_.push_back(std::move(constant));
  }

  static Series monomial(Integer coeff, int exponent, int precision = kExact) {
    Series s;
    s.precision_ = clamp(precision);
    if (coeff != 0 && exponent < s.precision_) {
      s.low_ = exponent;
      s.coeffs_.push_back(std::move(coeff));
    }
    return s;
  }

  static Series from_terms(const std::map<int, Integer>& terms, int precision = kExact) {
    Series s;
    s.precision_ = clamp(precision);
    if (terms.empty()) return s;
    s.low_ = terms.begin()->first;
    for (const auto& [e, c] : terms) {
      if (e >= s.precision_) break;
      s.coeffs_.resize(static_cast<std::size_t>(e - s.low_) + 1);
      s.coeffs_[static_cast<std::size_t>(e - s.low_)] = c;
    }
    s.trim();
    return s;
  }

  /// Dense coefficients starting at exponent `low`.
  static Series from_dense(int low, std::vector<Integer> coeffs, int precision = kExact) {
    Series s;
    s.precision_ = clamp(precision);
    s.low_ = low;
    s.coeffs_ = std::move(coeffs);
    s.drop_above_precision();
    s.trim();
    return s;
  }

  int precision() const { return precision_; }
  bool is_exact() const { return precision_ >= kExact; }
  bool is_zero() const { return coeffs_.empty(); }

  /// Smallest exponent with a nonzero coefficient; nullopt stands for +inf.
  std::optional<int> valuation() const {
    if (coeffs_.empty()) return std::nullopt;
    return low_;
  }

  /// Highest stored exponent; undefined for zero.
  int highest() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }

  Integer coefficient(int exponent) const {
    if (coeffs_.empty() || exponent < low_ || exponent > highest()) return Integer(0);
    return coeffs_[static_cast<std::size_t>(exponent - low_)];
  }

  std::vector<std::pair<int, Integer>> terms() const {
    std::vector<std::pair<int, Integer>> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) out.emplace_back(low_ + static_cast<int>(i), coeffs_[i]);
    return out;
  }

  Series truncated(int precision) const {
    if (precision >= precision_) return *this;
    Series s = *this;
    s.precision_ = clamp(precision);
    s.drop_above_precision();
    s.trim();
    return s;
  }

  /// Multiplication by q^k. Shifts the precision along with the terms.
  Series shifted(int k) const {
    Series s = *this;
    s.low_ = checked_add(s.low_, k);
    if (!is_exact()) s.precision_ = checked_add(precision_, k);
    return s;
  }

  Series operator-() const {
    Series s = *this;
    for (auto& c : s.coeffs_) c = -c;
    return s;
  }

  friend Series operator+(const Series& a, const Series& b) { return add(a, b, false); }
  friend Series operator-(const Series& a, const Series& b) { return add(a, b, true); }

  friend Series operator*(const Series& a, const Series& b) {
    Series r;
    r.precision_ = product_precision(a, b);
    if (a.is_zero() || b.is_zero()) return r;
    r.low_ = checked_add(a.low_, b.low_);
    if (r.low_ >= r.precision_) return r;
    const long span = std::min<long>(static_cast<long>(a.coeffs_.size() + b.coeffs_.size() - 1),
                                      static_cast<long>(r.precision_) - r.low_);
    r.coeffs_.assign(static_cast<std::size_t>(span), Integer(0));
    for (std::size_t i = 0; i < a.coeffs_.size() && static_cast<long>(i) < span; ++i) {
      if (a.coeffs_[i] == 0) continue;
      const std::size_t jmax = std::min(b.coeffs_.size(), static_cast<std::size_t>(span) - i);
      for (std::size_t j = 0; j < jmax; ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    r.trim();
    return r;
  }

  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  /// Structural equality: same precision and same stored terms.
  friend bool operator==(const Series& a, const Series& b) {
    return a.precision_ == b.precision_ && a.low_eq(b) && a.coeffs_ == b.coeffs_;
  }

  /// Equality modulo q^min(precision).
  bool congruent(const Series& o) const {
    const int p = std::min(precision_, o.precision_);
    const Series a = truncated(p), b = o.truncated(p);
    return a.low_eq(b) && a.coeffs_ == b.coeffs_;
  }

  /// Sparse ascending rendering, e.g. `-2*q^1 - 4*q^3 (mod q^6)`.
  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms()) {
      Integer mag = c < 0 ? Integer(-c) : c;
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      if (e == 0) {
        os << mag;
      } else {
        if (mag != 1) os << mag << "*";
        os << "q^" << e;
      }
    }
    if (first) os << "0";
    if (!is_exact()) os << " (mod q^" << precision_ << ")";
    return os.str();
  }

 private:
  static int clamp(int p) { return std::min(p, kExact); }

  // Lower bound on the valuation that holds even when the stored part is zero.
  int valuation_bound() const { return coeffs_.empty() ? precision_ : low_; }

  static int sat_add(int a, int b) {
    if (a >= kExact || b >= kExact) return kExact;
    return std::min(checked_add(a, b), kExact);
  }

  static int product_precision(const Series& a, const Series& b) {
    int p = std::min(a.precision_, b.precision_);
    p = std::min(p, sat_add(a.precision_, b.valuation_bound()));
    p = std::min(p, sat_add(b.precision_, a.valuation_bound()));
    return p;
  }

  bool low_eq(const Series& o) const { return coeffs_.empty() || low_ == o.low_; }

  static Series add(const Series& a, const Series& b, bool subtract) {
    Series r;
    r.precision_ = std::min(a.precision_, b.precision_);
    if (a.is_zero() && b.is_zero()) return r;
    const int lo = a.is_zero() ? b.low_ : b.is_zero() ? a.low_ : std::min(a.low_, b.low_);
    int hi = a.is_zero() ? b.highest() : b.is_zero() ? a.highest() : std::max(a.highest(), b.highest());
    hi = std::min(hi, r.precision_ - 1);
    if (hi < lo) return r;
    r.low_ = lo;
    r.coeffs_.assign(static_cast<std::size_t>(hi - lo + 1), Integer(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      const int e = a.low_ + static_cast<int>(i);
      if (e > hi) break;
      r.coeffs_[static_cast<std::size_t>(e - lo)] += a.coeffs_[i];
    }
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
      const int e = b.low_ + static_cast<int>(i);
      if (e > hi) break;
      if (subtract)
        r.coeffs_[static_cast<std::size_t>(e - lo)] -= b.coeffs_[i];
      else
        r.coeffs_[static_cast<std::size_t>(e - lo)] += b.coeffs_[i];
    }
    r.trim();
    return r;
  }

  void drop_above_precision() {
    if (coeffs_.empty()) return;
    const long keep = static_cast<long>(precision_) - low_;
    if (keep <= 0)
      coeffs_.clear();
    else if (static_cast<long>(coeffs_.size()) > keep)
      coeffs_.resize(static_cast<std::size_t>(keep));
  }

  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      low_ = 0;
      return;
    }
    if (lead > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
      low_ += static_cast<int>(lead);
    }
  }

  int low_ = 0;
  std::vector<Integer> coeffs_;
  int precision_ = kExact;
};

inline Series ts_mul(const Series& a, const Series& b) { return a * b; }

inline std::optional<int> ts_valuation(const Series& a) { return a.valuation(); }

/// Inverse of a series whose lowest coefficient is +-1. The result is
/// reliable modulo q^(P - 2v) where v is the valuation of `a`; an explicit
/// `precision` caps it further and is required when `a` is exact but not a
/// single monomial.
inline Series ts_invert_unit(const Series& a, std::optional<int> precision = std::nullopt) {
  const auto v = a.valuation();
  if (!v) throw NotAUnit("cannot invert zero");
  const Integer lead = a.coefficient(*v);
  if (lead != 1 && lead != -1) throw NotAUnit("lowest coefficient is not +-1");
  const auto terms = a.terms();
  if (terms.size() == 1 && a.is_exact() && !precision) return Series::monomial(lead, -*v);

  int target = Series::kExact;
  if (!a.is_exact()) target = a.precision() - 2 * *v;
  if (precision) target = std::min(target, *precision);
  if (target >= Series::kExact)
    throw InvalidParams("inverting an exact non-monomial series needs a precision");

  // Unit part u(q) = a * q^-v, known to n = target + v terms.
  const long n = static_cast<long>(target) + *v;
  if (n <= 0) return Series::from_dense(-*v, {}, target);
  std::vector<Integer> u(static_cast<std::size_t>(n), Integer(0));
  for (const auto& [e, c] : terms)
    if (e - *v < n) u[static_cast<std::size_t>(e - *v)] = c;
  std::vector<Integer> r(static_cast<std::size_t>(n), Integer(0));
  r[0] = lead;
  for (long k = 1; k < n; ++k) {
    Integer acc = 0;
    for (long i = 1; i <= k; ++i)
      if (u[static_cast<std::size_t>(i)] != 0) acc += u[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(k - i)];
    r[static_cast<std::size_t>(k)] = -lead * acc;
  }
  return Series::from_dense(-*v, std::move(r), target);
}

inline std::ostream& operator<<(std::ostream& os, const Series& s) { return os << s.to_string(); }

}  // namespace qdilog
