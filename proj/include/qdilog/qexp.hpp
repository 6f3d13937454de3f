#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdilog/errors.hpp"
#include "qdilog/rational.hpp"
#include "qdilog/series.hpp"
#include "qdilog/torus.hpp"

namespace qdilog {

/// Exact Euler coefficient c_k of x^k in prod_{n>=0} (1 - x q^(2n+1)):
/// c_k = (-1)^k q^(k^2) / prod_{j=1..k} (1 - q^(2j)).
inline RationalQ euler_coeff_exact(int k) {
  if (k < 0) throw NegativeIndex("Euler coefficient index must be nonnegative");
  Poly den(Integer(1));
  for (int j = 1; j <= k; ++j) den = den * (Poly(Integer(1)) - Poly::monomial(Integer(1), 2 * j));
  return RationalQ(Poly::monomial(Integer(k % 2 ? -1 : 1), k * k), den);
}

/// c_k modulo q^precision.
inline Series euler_coeff(int k, int precision) { return rq_expand(euler_coeff_exact(k), precision); }

/// Unit part e_k = 1 / prod_{j=1..k} (1 - q^(2j)), so c_k = (-1)^k q^(k^2) e_k.
inline Series euler_unit(int k, int precision) {
  if (k < 0) throw NegativeIndex("Euler coefficient index must be nonnegative");
  if (precision <= 0) return Series(Integer(0), precision);
  Series den(Integer(1));
  for (int j = 1; j <= k && 2 * j < precision; ++j)
    den = den * (Series(Integer(1)) - Series::monomial(Integer(1), 2 * j));
  return ts_invert_unit(den, precision);
}

/// Euler units cached up to the largest index and precision requested so far.
/// Not thread-safe; give each worker its own cache.
class EulerCache {
 public:
  const Series& unit(int k, int precision) {
    if (k >= static_cast<int>(units_.size())) units_.resize(static_cast<std::size_t>(k) + 1);
    auto& slot = units_[static_cast<std::size_t>(k)];
    if (!slot || slot->precision() < precision) slot = euler_unit(k, std::max(precision, precision_hint_));
    return *slot;
  }

  void hint_precision(int p) { precision_hint_ = std::max(precision_hint_, p); }

 private:
  std::vector<std::optional<Series>> units_;
  int precision_hint_ = 0;
};

/// s(w_site^sign).
struct SFactor {
  int site = 1;
  int sign = 1;

  friend bool operator==(const SFactor&, const SFactor&) = default;
};

using FactorProduct = std::vector<SFactor>;

/// s(arg) for an exact argument, e.g. s(u + v - q^-1 uv).
struct Factor {
  Element<RationalQ> arg;

  friend bool operator==(const Factor&, const Factor&) = default;
};

using GeneralProduct = std::vector<Factor>;

inline Element<RationalQ> exact_generator(int site, int exponent = 1) {
  return Element<RationalQ>::generator(site, exponent, RationalQ(Integer(1)));
}

inline Factor to_factor(const SFactor& f) { return Factor{exact_generator(f.site, f.sign)}; }

inline GeneralProduct to_general(const FactorProduct& p) {
  GeneralProduct g;
  for (const auto& f : p) g.push_back(to_factor(f));
  return g;
}

/// Argument of the form sign * q^q_power * w^exps.
struct MonomialArg {
  int sign = 1;
  int q_power = 0;
  ExponentVector exps;
};

inline std::optional<MonomialArg> monomial_arg(const Factor& f) {
  if (f.arg.size() != 1) return std::nullopt;
  const auto& [exps, coeff] = *f.arg.terms().begin();
  if (exps.is_identity()) return std::nullopt;
  const auto lm = coeff.as_laurent_monomial();
  if (!lm || (lm->first != 1 && lm->first != -1)) return std::nullopt;
  return MonomialArg{lm->first == 1 ? 1 : -1, lm->second, exps};
}

inline Element<Series> to_series_element(const Element<RationalQ>& x, int precision) {
  Element<Series> r;
  for (const auto& [e, c] : x.terms()) {
    if (auto lm = c.as_laurent_monomial())
      r.add_term(e, Series::monomial(lm->first, lm->second));
    else
      r.add_term(e, rq_expand(c, precision));
  }
  return r;
}

/// sum_{k=0..K} coeff(k) X^k. `keep`, when given, filters every power; it
/// must only drop terms that cannot come back into range under further
/// multiplication by X.
template <Coefficient C>
Element<C> s_series_with(const Element<C>& x, int max_index, const std::function<C(int)>& coeff, const C& one,
                         const std::function<Element<C>(const Element<C>&)>& keep = {}) {
  if (max_index < 0) throw InvalidParams("series depth must be nonnegative");
  Element<C> sum;
  Element<C> pw = Element<C>::scalar(one);
  for (int k = 0; k <= max_index; ++k) {
    if (k > 0) {
      pw = normal_mul(pw, x);
      if (keep) pw = keep(pw);
    }
    if (pw.is_zero()) break;
    sum = sum + pw.scaled(coeff(k));
  }
  return sum;
}

/// Series form of s(X) through order K, coefficients modulo q^P.
inline Element<Series> s_series(const Element<Series>& x, int max_index, int precision) {
  return s_series_with<Series>(x, max_index, [precision](int k) { return euler_coeff(k, precision); },
                               Series(Integer(1), precision));
}

inline Element<RationalQ> s_series_exact(const Element<RationalQ>& x, int max_index) {
  return s_series_with<RationalQ>(x, max_index, euler_coeff_exact, RationalQ(Integer(1)));
}

/// prod_{n=0..n0-1} (1 - X q^(2n+1)), multiplied left to right.
inline Element<Series> s_product_form(const Element<Series>& x, int factors, int precision) {
  if (factors < 0) throw InvalidParams("product depth must be nonnegative");
  const Series one(Integer(1), precision);
  Element<Series> r = Element<Series>::scalar(one);
  for (int n = 0; n < factors; ++n) {
    const Element<Series> factor = Element<Series>::scalar(one) - x.times_q_power(2 * n + 1);
    r = normal_mul(r, factor);
  }
  return r;
}

/// Default product-form depth: factors past ceil(P/2) only touch q^(>=P).
inline int default_product_depth(int precision) { return (precision + 1) / 2; }

}  // namespace qdilog
