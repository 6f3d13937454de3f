#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdilog/integer.hpp"

namespace qdilog {

/// Dense polynomial in q with integer coefficients; coeffs[i] multiplies q^i.
/// Trailing zeros are always trimmed, so the zero polynomial is empty.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }
  explicit Poly(Integer constant) {
    if (constant != 0) c_.push_back(std::move(constant));
  }

  static Poly monomial(Integer coeff, int degree) {
    std::vector<Integer> c(static_cast<std::size_t>(degree) + 1, Integer(0));
    c.back() = std::move(coeff);
    return Poly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Integer>& coeffs() const { return c_; }
  const Integer& lead() const { return c_.back(); }

  Integer coefficient(int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : Integer(0);
  }

  /// Index of the lowest nonzero coefficient; -1 for zero.
  int low_degree() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) return static_cast<int>(i);
    return -1;
  }

  Integer content() const {
    Integer g = 0;
    for (const auto& x : c_) {
      g = gcd(g, x);
      if (g == 1) break;
    }
    return g;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Integer> r(std::max(a.c_.size(), b.c_.size()), Integer(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Integer> r(a.c_.size() + b.c_.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }

  Poly scaled(const Integer& k) const {
    if (k == 0) return {};
    Poly r = *this;
    for (auto& x : r.c_) x *= k;
    return r;
  }

  /// Exact division of every coefficient by k.
  Poly div_scalar(const Integer& k) const {
    Poly r = *this;
    for (auto& x : r.c_) x /= k;
    return r;
  }

  /// Multiplication by q^k, k >= 0.
  Poly shifted(int k) const {
    if (is_zero()) return {};
    std::vector<Integer> r(static_cast<std::size_t>(k), Integer(0));
    r.insert(r.end(), c_.begin(), c_.end());
    return Poly(std::move(r));
  }

  /// Division by q^k; requires the low k coefficients to vanish.
  Poly unshifted(int k) const {
    if (is_zero()) return {};
    return Poly(std::vector<Integer>(c_.begin() + k, c_.end()));
  }

  Integer evaluate(const Integer& x) const {
    Integer acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const Integer& c = c_[i];
      if (c == 0) continue;
      const Integer mag = c < 0 ? Integer(-c) : c;
      if (first)
        os << (c < 0 ? "-" : "");
      else
        os << (c < 0 ? " - " : " + ");
      first = false;
      if (i == 0) {
        os << mag;
      } else {
        if (mag != 1) os << mag << "*";
        os << "q^" << i;
      }
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  static Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Integer> c_;
};

/// Quotient when b divides a exactly over Z[q], nullopt otherwise.
inline std::optional<Poly> exact_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return Poly();
  if (a.degree() < b.degree()) return std::nullopt;
  std::vector<Integer> rem = a.coeffs();
  std::vector<Integer> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Integer(0));
  const auto& bc = b.coeffs();
  for (int i = a.degree() - b.degree(); i >= 0; --i) {
    Integer& top = rem[static_cast<std::size_t>(i + b.degree())];
    if (top == 0) continue;
    Integer q, r;
    boost::multiprecision::divide_qr(top, b.lead(), q, r);
    if (r != 0) return std::nullopt;
    quo[static_cast<std::size_t>(i)] = q;
    for (std::size_t j = 0; j < bc.size(); ++j) rem[static_cast<std::size_t>(i) + j] -= q * bc[j];
  }
  for (const auto& x : rem)
    if (x != 0) return std::nullopt;
  return Poly(std::move(quo));
}

namespace detail {

inline Poly primitive_part(const Poly& p) {
  if (p.is_zero()) return p;
  Integer c = p.content();
  if (p.lead() < 0) c = -c;
  return p.div_scalar(c);
}

inline Integer max_norm(const Poly& p) {
  Integer m = 0;
  for (const auto& x : p.coeffs()) m = std::max(m, Integer(abs(x)));
  return m;
}

/// Heuristic GCD of primitive polynomials: evaluate at a large integer,
/// take the integer gcd and lift it back by balanced base-xi digits. The
/// candidate is accepted only after exact division checks.
inline std::optional<Poly> heuristic_gcd(const Poly& a, const Poly& b) {
  Integer xi = 2 * std::min(max_norm(a), max_norm(b)) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Integer gamma = boost::multiprecision::gcd(a.evaluate(xi), b.evaluate(xi));
    std::vector<Integer> digits;
    Integer half = xi / 2;
    while (gamma != 0) {
      Integer d = gamma % xi;
      if (d < 0) d += xi;
      if (d > half) d -= xi;
      digits.push_back(d);
      gamma = (gamma - d) / xi;
    }
    Poly g = primitive_part(Poly(std::move(digits)));
    if (!g.is_zero() && exact_divide(a, g) && exact_divide(b, g)) return g;
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

/// Primitive polynomial remainder sequence; slow but unconditional.
inline Poly prs_gcd(Poly a, Poly b) {
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    // pseudo-remainder of a by b
    std::vector<Integer> r = a.coeffs();
    const auto& bc = b.coeffs();
    const Integer lb = b.lead();
    for (int i = a.degree() - b.degree(); i >= 0; --i) {
      const Integer top = r[static_cast<std::size_t>(i + b.degree())];
      for (auto& x : r) x *= lb;
      for (std::size_t j = 0; j < bc.size(); ++j) r[static_cast<std::size_t>(i) + j] -= top * bc[j];
    }
    Poly rem = primitive_part(Poly(std::move(r)));
    a = std::move(b);
    b = std::move(rem);
  }
  return primitive_part(a);
}

}  // namespace detail

/// Greatest common divisor over Z[q], normalized to a positive leading
/// coefficient. gcd(0, 0) = 0.
inline Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return detail::primitive_part(b).scaled(b.content());
  if (b.is_zero()) return detail::primitive_part(a).scaled(a.content());
  const Integer content = boost::multiprecision::gcd(a.content(), b.content());
  const int shift = std::min(a.low_degree(), b.low_degree());
  Poly pa = detail::primitive_part(a.unshifted(a.low_degree()));
  Poly pb = detail::primitive_part(b.unshifted(b.low_degree()));
  Poly g;
  if (pa.degree() == 0 || pb.degree() == 0) {
    g = Poly(Integer(1));
  } else if (pa == pb) {
    g = pa;
  } else if (auto h = detail::heuristic_gcd(pa, pb)) {
    g = *h;
  } else {
    g = detail::prs_gcd(pa, pb);
  }
  return g.shifted(shift).scaled(content);
}

}  // namespace qdilog
