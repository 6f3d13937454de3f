#pragma once

#include <string>
#include <utility>

#include "qdilog/errors.hpp"
#include "qdilog/polynomial.hpp"
#include "qdilog/series.hpp"

namespace qdilog {

/// Exact rational function of q, numerator/denominator in Z[q]. Kept in
/// lowest terms with a positive leading denominator coefficient, so two
/// values are equal iff their representations are.
class RationalQ {
 public:
  RationalQ() : den_(Integer(1)) {}
  explicit RationalQ(Integer c) : num_(std::move(c)), den_(Integer(1)) {}
  explicit RationalQ(Poly num) : num_(std::move(num)), den_(Integer(1)) {}

  RationalQ(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw InvalidParams("zero denominator");
    normalize();
  }

  /// c * q^p for any integer p.
  static RationalQ q_power(int p, Integer c = 1) {
    if (p >= 0) return RationalQ(Poly::monomial(std::move(c), p));
    return RationalQ(Poly(std::move(c)), Poly::monomial(Integer(1), -p));
  }

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  /// Multiplication by q^k.
  RationalQ shifted(int k) const {
    if (k == 0 || is_zero()) return *this;
    if (k > 0) return RationalQ(num_.shifted(k), den_);
    return RationalQ(num_, den_.shifted(-k));
  }

  RationalQ operator-() const {
    RationalQ r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RationalQ operator+(const RationalQ& a, const RationalQ& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RationalQ(a.num_ + b.num_, a.den_);
    const Poly g = gcd(a.den_, b.den_);
    const Poly ad = *exact_divide(a.den_, g);
    const Poly bd = *exact_divide(b.den_, g);
    return RationalQ(a.num_ * bd + b.num_ * ad, a.den_ * bd);
  }
  friend RationalQ operator-(const RationalQ& a, const RationalQ& b) { return a + (-b); }

  friend RationalQ operator*(const RationalQ& a, const RationalQ& b) {
    if (a.is_zero() || b.is_zero()) return RationalQ();
    // cross-cancel first to keep the gcd in normalize() small
    const Poly g1 = gcd(a.num_, b.den_);
    const Poly g2 = gcd(b.num_, a.den_);
    return RationalQ(*exact_divide(a.num_, g1) * *exact_divide(b.num_, g2),
                     *exact_divide(a.den_, g2) * *exact_divide(b.den_, g1));
  }

  friend RationalQ operator/(const RationalQ& a, const RationalQ& b) {
    if (b.is_zero()) throw InvalidParams("division by zero");
    return a * RationalQ(b.den_, b.num_);
  }

  RationalQ& operator+=(const RationalQ& o) { return *this = *this + o; }
  RationalQ& operator*=(const RationalQ& o) { return *this = *this * o; }

  friend bool operator==(const RationalQ& a, const RationalQ& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// If the value is c*q^p, returns (c, p).
  std::optional<std::pair<Integer, int>> as_laurent_monomial() const {
    if (is_zero()) return std::nullopt;
    if (den_.degree() != den_.low_degree() || den_.lead() != 1) return std::nullopt;
    if (num_.degree() != num_.low_degree()) return std::nullopt;
    return std::make_pair(num_.lead(), num_.degree() - den_.degree());
  }

  std::string to_string() const {
    if (den_ == Poly(Integer(1))) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }

 private:
  void normalize() {
    if (num_.is_zero()) {
      den_ = Poly(Integer(1));
      return;
    }
    const Poly g = gcd(num_, den_);
    if (!(g == Poly(Integer(1)))) {
      num_ = *exact_divide(num_, g);
      den_ = *exact_divide(den_, g);
    }
    if (den_.lead() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  Poly num_;
  Poly den_;
};

inline Series poly_to_series(const Poly& p, int precision = Series::kExact) {
  return Series::from_dense(0, p.coeffs(), precision);
}

/// Power-series expansion modulo q^precision. Requires the lowest nonzero
/// coefficient of the denominator to be +-1.
inline Series rq_expand(const RationalQ& r, int precision) {
  const Poly& den = r.denominator();
  const int s = den.low_degree();
  const Integer lowest = den.coefficient(s);
  if (lowest != 1 && lowest != -1) throw NotExpandable("denominator has no unit lowest term");
  if (r.is_zero()) return Series(Integer(0), precision);
  const Series unit_den = poly_to_series(den.unshifted(s));
  const int inner = checked_add(precision, s);
  const Series inv = ts_invert_unit(unit_den, inner);
  return (poly_to_series(r.numerator()) * inv).shifted(-s).truncated(precision);
}

inline std::ostream& operator<<(std::ostream& os, const RationalQ& r) { return os << r.to_string(); }

}  // namespace qdilog
