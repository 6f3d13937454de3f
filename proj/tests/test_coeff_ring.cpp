#include <gtest/gtest.h>

#include <random>

#include "qdilog/rational.hpp"
#include "qdilog/series.hpp"

using namespace qdilog;

namespace {

Series ser(const std::map<int, Integer>& t, int p = Series::kExact) { return Series::from_terms(t, p); }

Poly poly(std::vector<int> c) {
  std::vector<Integer> v(c.begin(), c.end());
  return Poly(v);
}

Series random_series(std::mt19937_64& rng, int p) {
  std::map<int, Integer> t;
  const int low = static_cast<int>(rng() % 5) - 2;
  for (int e = low; e < low + 6; ++e) t[e] = static_cast<int>(rng() % 7) - 3;
  return ser(t, p);
}

}  // namespace

TEST(CoeffRing, DifferenceOfSquares) {
  const Series a = ser({{0, 1}, {1, 1}}, 8);
  const Series b = ser({{0, 1}, {1, -1}}, 8);
  EXPECT_EQ(a * b, ser({{0, 1}, {2, -1}}, 8));
}

TEST(CoeffRing, ExponentAddition) {
  EXPECT_EQ(Series::monomial(1, -2) * Series::monomial(1, 3), Series::monomial(1, 1));
}

TEST(CoeffRing, TelescopingGeometricProduct) {
  const Series a = ser({{0, 1}, {2, 1}, {4, 1}, {6, 1}, {8, 1}}, 10);
  EXPECT_EQ(a * ser({{0, 1}, {2, -1}}), Series(Integer(1), 10));
}

TEST(CoeffRing, InvertUnit) {
  EXPECT_EQ(ts_invert_unit(ser({{0, 1}, {1, -1}}), 5), ser({{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}, 5));
  EXPECT_EQ(ts_invert_unit(Series(Integer(1))), Series(Integer(1)));
  EXPECT_EQ(ts_invert_unit(ser({{0, 1}, {2, -1}}), 8), ser({{0, 1}, {2, 1}, {4, 1}, {6, 1}}, 8));
  EXPECT_THROW(ts_invert_unit(ser({{0, 2}, {1, 1}}), 4), NotAUnit);
  EXPECT_THROW(ts_invert_unit(Series(Integer(0))), NotAUnit);
}

TEST(CoeffRing, InverseTimesSelfIsOne) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    std::map<int, Integer> t{{0, rng() % 2 ? 1 : -1}};
    for (int e = 1; e < 6; ++e) t[e] = static_cast<int>(rng() % 9) - 4;
    const Series a = ser(t);
    EXPECT_TRUE((a * ts_invert_unit(a, 12)).congruent(Series(Integer(1), 12)));
  }
}

TEST(CoeffRing, Valuation) {
  EXPECT_EQ(ser({{2, 1}, {4, 2}}).valuation(), 2);
  EXPECT_FALSE(Series(Integer(0)).valuation().has_value());
  EXPECT_EQ(ser({{-2, 1}, {3, -1}}).valuation(), -2);
}

TEST(CoeffRing, ValuationIsAdditive) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Series a = random_series(rng, Series::kExact), b = random_series(rng, Series::kExact);
    if (a.is_zero() || b.is_zero()) continue;
    EXPECT_EQ(*(a * b).valuation(), *a.valuation() + *b.valuation());
  }
}

TEST(CoeffRing, RationalExpansion) {
  const RationalQ a(poly({0, 0, 1, 0, 1}), poly({1, 0, -1}) * poly({1, 0, 0, 0, -1}));
  EXPECT_EQ(rq_expand(a, 8), ser({{2, 1}, {4, 2}, {6, 3}}, 8));
  const RationalQ b(poly({1, 0, 0, 0, -1}), poly({1, 0, -1}));
  EXPECT_EQ(rq_expand(b, 8), ser({{0, 1}, {2, 1}}, 8));
  EXPECT_EQ(b, RationalQ(poly({1, 0, 1})));
  const RationalQ c(poly({0, -1}), poly({1, 0, -1}));
  EXPECT_EQ(rq_expand(c, 8), ser({{1, -1}, {3, -1}, {5, -1}, {7, -1}}, 8));
}

TEST(CoeffRing, RationalExpansionMatchesLongDivision) {
  // q^2 (1+q^2) / ((1-q^2)(1-q^4)) = q^2 / (1-q^2)^2 = sum_{j>=1} j q^(2j)
  const RationalQ a(poly({0, 0, 1, 0, 1}), poly({1, 0, -1}) * poly({1, 0, 0, 0, -1}));
  const Series s = rq_expand(a, 30);
  for (int e = 0; e < 30; ++e) EXPECT_EQ(s.coefficient(e), e % 2 == 0 ? Integer(e / 2) : Integer(0)) << e;
}

TEST(CoeffRing, ExpansionIsARingHomomorphism) {
  std::mt19937_64 rng(3);
  auto rnd = [&] {
    std::vector<int> n(4), d(3);
    for (auto& x : n) x = static_cast<int>(rng() % 7) - 3;
    d[0] = rng() % 2 ? 1 : -1;
    for (std::size_t i = 1; i < d.size(); ++i) d[i] = static_cast<int>(rng() % 5) - 2;
    return RationalQ(poly(n), poly(d));
  };
  for (int i = 0; i < 40; ++i) {
    const RationalQ a = rnd(), b = rnd();
    EXPECT_EQ(rq_expand(a + b, 12), rq_expand(a, 12) + rq_expand(b, 12));
    EXPECT_EQ(rq_expand(a * b, 12), rq_expand(a, 12) * rq_expand(b, 12));
  }
}

TEST(CoeffRing, RingAxioms) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Series a = random_series(rng, 10), b = random_series(rng, 10), c = random_series(rng, 10);
    EXPECT_TRUE((a * b).congruent(b * a));
    EXPECT_TRUE(((a * b) * c).congruent(a * (b * c)));
    EXPECT_TRUE((a * (b + c)).congruent(a * b + a * c));
    EXPECT_TRUE((a + b).congruent(b + a));
    EXPECT_TRUE((a - a).congruent(Series(Integer(0))));
  }
}

TEST(CoeffRing, PrecisionTracksLowestInput) {
  const Series a = ser({{0, 1}, {1, 1}}, 6);
  const Series b = ser({{2, 1}}, 4);
  EXPECT_EQ((a + b).precision(), 4);
  EXPECT_EQ((a * Series::monomial(1, 3)).precision(), 6);
  EXPECT_EQ((a * ser({{-1, 1}})).precision(), 5);
  EXPECT_EQ(a.shifted(-2).precision(), 4);
}

TEST(CoeffRing, Rendering) {
  EXPECT_EQ(ser({{1, -2}, {3, -4}}, 6).to_string(), "-2*q^1 - 4*q^3 (mod q^6)");
  EXPECT_EQ(ser({{0, 1}, {2, 1}}).to_string(), "1 + q^2");
  EXPECT_EQ(Series(Integer(0), 5).to_string(), "0 (mod q^5)");
  EXPECT_EQ(RationalQ(poly({1}), poly({1, 0, -1})).to_string(), "(-1)/(-1 + q^2)");
}

TEST(CoeffRing, ZeroDenominatorRejected) { EXPECT_THROW(RationalQ(poly({1}), Poly()), InvalidParams); }

TEST(CoeffRing, NonUnitDenominatorNotExpandable) {
  EXPECT_THROW(rq_expand(RationalQ(poly({1}), poly({2, 1})), 4), NotExpandable);
}
