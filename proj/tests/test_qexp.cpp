#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdilog/qexp.hpp"

using namespace qdilog;

namespace {

using E = Element<Series>;

Series ser(const std::map<int, Integer>& t, int p = Series::kExact) { return Series::from_terms(t, p); }

E w(int site, int exp, int p) { return E::generator(site, exp, Series(Integer(1), p)); }

}  // namespace

TEST(Qexp, EulerCoefficientExamples) {
  EXPECT_EQ(euler_coeff(0, 8), Series(Integer(1), 8));
  EXPECT_EQ(euler_coeff(1, 8), ser({{1, -1}, {3, -1}, {5, -1}, {7, -1}}, 8));
  EXPECT_EQ(euler_coeff(2, 10), ser({{4, 1}, {6, 1}, {8, 2}}, 10));
  EXPECT_THROW(euler_coeff(-1, 8), NegativeIndex);
}

TEST(Qexp, EulerCoefficientsMatchProductExpansion) {
  EXPECT_EQ(oracle::euler_from_product(1, 8, 4), euler_coeff(1, 8));
  EXPECT_EQ(oracle::euler_from_product(2, 10), euler_coeff(2, 10));
  for (int k = 0; k <= 8; ++k)
    for (int p : {1, 9, 20, 40, 70}) EXPECT_EQ(rq_expand(euler_coeff_exact(k), p), oracle::euler_from_product(k, p)) << k;
}

TEST(Qexp, EulerUnitTimesLeadingPower) {
  for (int k = 0; k <= 6; ++k) {
    const Series c = euler_unit(k, 30).shifted(k * k);
    EXPECT_TRUE((k % 2 ? -c : c).congruent(euler_coeff(k, 30))) << k;
  }
}

TEST(Qexp, ValuationIsKSquared) {
  for (int k = 0; k <= 7; ++k) EXPECT_EQ(euler_coeff(k, 60).valuation(), k * k);
}

TEST(Qexp, SeriesOfZero) {
  EXPECT_EQ(s_series(E(), 5, 8), E::scalar(Series(Integer(1), 8)));
  EXPECT_EQ(s_series(E(), 0, 8), E::scalar(Series(Integer(1), 8)));
}

TEST(Qexp, SeriesOfGenerator) {
  const E s = s_series(w(1, 1, 8), 2, 8);
  E expected = E::scalar(Series(Integer(1), 8));
  expected.add_term({{1, 1}}, euler_coeff(1, 8));
  expected.add_term({{1, 2}}, euler_coeff(2, 8));
  EXPECT_EQ(s, expected);
}

TEST(Qexp, NormalOrderedCompositeArgument) {
  const int P = 12;
  // u + v - q vu, with vu = q^-2 uv
  const E u = w(1, 1, P), v = w(2, 1, P);
  const E arg = u + v - normal_mul(v, u).times_q_power(1);
  EXPECT_TRUE(arg.coefficient({{1, 1}, {2, 1}}).congruent(Series::monomial(-1, -1)));
  const Series got = s_series(arg, 2, P).coefficient({{1, 1}, {2, 1}});
  const Series expected = euler_coeff(1, P).shifted(-1) * Series(Integer(-1)) +
                          euler_coeff(2, P) * (Series(Integer(1)) + Series::monomial(1, -2));
  EXPECT_TRUE(got.congruent(expected));
  // 1/(1-q^2)^2 = sum (j+1) q^(2j)
  for (int e = 0; e < got.precision(); ++e) EXPECT_EQ(got.coefficient(e), e % 2 ? Integer(0) : Integer(e / 2 + 1));
  const auto eu = exact_generator(1), ev = exact_generator(2);
  const auto exact_arg = eu + ev - normal_mul(ev, eu).times_q_power(1);
  const RationalQ exact = s_series_exact(exact_arg, 2).coefficient({{1, 1}, {2, 1}});
  EXPECT_EQ(exact, euler_coeff_exact(1) * euler_coeff_exact(1) * RationalQ::q_power(-2));
}

TEST(Qexp, ProductFormExamples) {
  EXPECT_EQ(s_product_form(w(1, 1, 40), 0, 40), E::scalar(Series(Integer(1), 40)));
  E expected = E::scalar(Series(Integer(1), 40));
  expected.add_term({{1, 1}}, -ser({{1, 1}, {3, 1}}, 40));
  expected.add_term({{1, 2}}, Series::monomial(1, 4, 40));
  EXPECT_EQ(s_product_form(w(1, 1, 40), 2, 40), expected);
  EXPECT_THROW(s_product_form(w(1, 1, 4), -1, 4), InvalidParams);
}

TEST(Qexp, ProductFormStabilizes) {
  const E prod = s_product_form(w(1, 1, 12), 6, 12);
  const E ser12 = s_series(w(1, 1, 12), 12, 12);
  for (int k = 0; k <= 3; ++k) {
    const ExponentVector e{{1, k}};
    EXPECT_TRUE(prod.coefficient(e).congruent(ser12.coefficient(e))) << k;
  }
}

TEST(Qexp, ProductFormThresholdIsSharp) {
  // With n0 factors the coefficient of X^k is exact below q^(k^2 + 2(n0 - k + 1))
  // and wrong at that order.
  const int P = 30;
  for (int n0 = 1; n0 <= 6; ++n0)
    for (int k = 1; k <= n0; ++k) {
      const Series got = s_product_form(w(1, 1, P), n0, P).coefficient({{1, k}});
      const Series want = euler_coeff(k, P);
      const int stable = k * k + 2 * (n0 - k + 1);
      if (stable >= P) continue;
      EXPECT_TRUE(got.truncated(stable).congruent(want.truncated(stable))) << n0 << " " << k;
      EXPECT_NE(got.coefficient(stable), want.coefficient(stable)) << n0 << " " << k;
    }
}

TEST(Qexp, DefaultDepth) {
  EXPECT_EQ(default_product_depth(16), 8);
  EXPECT_EQ(default_product_depth(15), 8);
}
