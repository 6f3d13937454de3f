#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "qdilog/verifier.hpp"

using namespace qdilog;

namespace {

Series ser(const std::map<int, Integer>& t, int p = Series::kExact) { return Series::from_terms(t, p); }

Poly poly(std::vector<int> c) {
  std::vector<Integer> v(c.begin(), c.end());
  return Poly(v);
}

const FactorProduct seven_lhs{{2, 1}, {1, -1}, {1, 1}, {2, 1}};
const FactorProduct seven_rhs{{1, -1}, {2, 1}, {1, 1}};

// 1/(1-q^2)^2
const RationalQ inv_sq(poly({1}), poly({1, 0, -1}) * poly({1, 0, -1}));

IdentityParams params(int sites = 0, int window = -1, int precision = -1) {
  IdentityParams p;
  p.sites = sites;
  p.window = window;
  p.precision = precision;
  return p;
}

std::vector<std::vector<int>> sorted(std::vector<std::vector<int>> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Verifier, SevenTermSpotValues) {
  EXPECT_EQ(coefficient_of(seven_lhs, {}, 6), ser({{0, 1}, {2, 1}, {4, 2}}, 6));
  const ExponentVector v1{{2, 1}};
  EXPECT_EQ(coefficient_of(seven_lhs, v1, 6), ser({{1, -2}, {3, -4}, {5, -8}}, 6));
  EXPECT_EQ(coefficient_of(seven_rhs, v1, 6), ser({{1, -2}, {3, -4}, {5, -8}}, 6));
}

TEST(Verifier, SevenTermSpotValuesFromClosedForms) {
  // u^0 v^0: sum_k c_k^2; u^0 v^1: 2 c_1 sum_k c_k^2 on the left and
  // c_1 sum_k c_k^2 q^-2k on the right.
  const int P = 6, D = 12;
  Series sq(Integer(0), D), twisted(Integer(0), D);
  for (int k = 0; k <= 3; ++k) {
    const Series c = euler_coeff(k, D);
    sq += c * c;
    twisted += (c * c).shifted(-2 * k);
  }
  const Series c1 = euler_coeff(1, D);
  EXPECT_EQ(sq.truncated(P), coefficient_of(seven_lhs, {}, P));
  EXPECT_EQ((c1 * sq + c1 * sq).truncated(P), coefficient_of(seven_lhs, {{2, 1}}, P));
  EXPECT_EQ((c1 * twisted).truncated(P), coefficient_of(seven_rhs, {{2, 1}}, P));
}

TEST(Verifier, SevenTermRightTupleFormula) {
  const int P = 12;
  for (int a = -3; a <= 3; ++a)
    for (int b = 0; b <= 4; ++b) {
      std::vector<std::vector<int>> expected;
      for (int k1 = std::max(0, -a); k1 <= P; ++k1)
        if (k1 * k1 + (b - k1 - a) * (b - k1 - a) < P) expected.push_back({k1, b, k1 + a});
      const auto cert = enumerate_tuples(seven_rhs, {{1, a}, {2, b}}, P);
      EXPECT_EQ(sorted(cert.tuples), sorted(expected)) << a << " " << b;
      EXPECT_EQ(sorted(cert.tuples), sorted(oracle::brute_tuples(seven_rhs, {{1, a}, {2, b}}, P)));
    }
}

TEST(Verifier, SevenTermLeftValuationFormula) {
  const auto shape = shape_of(seven_lhs);
  const int P = 12;
  for (int a = -2; a <= 2; ++a)
    for (int b = 0; b <= 3; ++b) {
      const auto cert = enumerate_tuples(seven_lhs, {{1, a}, {2, b}}, P);
      EXPECT_EQ(sorted(cert.tuples), sorted(oracle::brute_tuples(seven_lhs, {{1, a}, {2, b}}, P)));
      for (const auto& k : cert.tuples) {
        EXPECT_EQ(k[2], k[1] + a);
        EXPECT_EQ(k[0] + k[3], b);
        EXPECT_EQ(shape.valuation(k), k[0] * k[0] + k[1] * k[1] + (k[1] + a) * (k[1] + a) + k[3] * k[3] - 2 * a * k[0]);
      }
    }
}

TEST(Verifier, PrecisionOneKeepsOnlyTheEmptyTuple) {
  for (const auto* p : {&seven_lhs, &seven_rhs}) {
    const auto id = enumerate_tuples(*p, {}, 1);
    ASSERT_EQ(id.tuples.size(), 1u);
    EXPECT_TRUE(std::all_of(id.tuples[0].begin(), id.tuples[0].end(), [](int k) { return k == 0; }));
    EXPECT_TRUE(enumerate_tuples(*p, {{2, 1}}, 1).tuples.empty());
    EXPECT_TRUE(enumerate_tuples(*p, {{1, -1}, {2, 2}}, 1).tuples.empty());
  }
}

TEST(Verifier, CertificateRecordsGramData) {
  const auto shape = shape_of(seven_lhs);
  EXPECT_TRUE(shape.positive_definite());
  for (const auto& m : shape.leading_minors()) EXPECT_GT(m, 0);
  const auto cert = enumerate_tuples(seven_lhs, {{2, 2}}, 10);
  EXPECT_EQ(cert.excluded_valuation_bound, 10);
  EXPECT_EQ(cert.tuples.size(), cert.valuations.size());
  for (auto v : cert.valuations) EXPECT_LT(v, 10);
  if (cert.nearest_excluded) EXPECT_GE(*cert.nearest_excluded, 10);
}

TEST(Verifier, NoCertificateForIndefiniteShape) {
  const ValuationShape shape({{1, 0, {{1, -2}, {2, -2}}}, {1, 0, {{1, -2}, {2, 2}}}, {1, 0, {{1, -2}}}});
  EXPECT_FALSE(shape.positive_definite());
  EXPECT_THROW(enumerate_tuples(shape, {{1, -4}}, 8), NoCertificate);
}

TEST(Verifier, CertifiedMatchesBruteForce) {
  std::vector<FactorProduct> sides{seven_lhs, seven_rhs};
  for (int i = 1; i <= 4; ++i) {
    sides.push_back(rel::two_site(i, 1).lhs);
    sides.push_back(rel::two_site(i, 1).rhs);
  }
  for (const auto& side : sides)
    for (int P : {6, 12})
      for (const auto& t : Window::symmetric({1, 2}, 2).targets())
        ASSERT_EQ(coefficient_of(side, t, P), oracle::brute_coefficient(side, t, P)) << t.to_string() << " P=" << P;
}

TEST(Verifier, MultiplicationRuleExactValues) {
  const ExponentVector uv{{1, 1}, {2, 1}};
  const RationalQ c1sq = euler_coeff_exact(1) * euler_coeff_exact(1);
  EXPECT_EQ(c1sq, inv_sq * RationalQ::q_power(2));
  const auto rels1 = identity_relations(IdentityId::Mult1, resolve(IdentityId::Mult1, params()));
  EXPECT_EQ(coefficient_of_exact(rels1[0].lhs, uv), c1sq);
  EXPECT_EQ(coefficient_of_exact(rels1[0].rhs, uv),
            euler_coeff_exact(2) * (RationalQ(Integer(1)) + RationalQ::q_power(-2)));
  EXPECT_EQ(coefficient_of_exact(rels1[0].rhs, uv), c1sq);

  const auto pent = identity_relations(IdentityId::Pentagon, resolve(IdentityId::Pentagon, params()));
  EXPECT_EQ(coefficient_of_exact(pent[0].lhs, uv), inv_sq);
  EXPECT_EQ(coefficient_of_exact(pent[0].rhs, uv), inv_sq);
  EXPECT_EQ(c1sq - euler_coeff_exact(1) * RationalQ::q_power(-1), inv_sq);

  const auto m2 = identity_relations(IdentityId::Mult2, resolve(IdentityId::Mult2, params()));
  EXPECT_EQ(coefficient_of_exact(m2[0].lhs, {}), RationalQ(Integer(1)));
  EXPECT_EQ(coefficient_of_exact(m2[0].rhs, {}), RationalQ(Integer(1)));
}

TEST(Verifier, ExactAgreesWithTruncatedExpansion) {
  for (auto id : {IdentityId::Mult1, IdentityId::Mult2, IdentityId::Pentagon}) {
    const auto rels = identity_relations(id, resolve(id, params()));
    const Window win = Window::symmetric({1, 2}, 3);
    for (const auto* side : {&rels[0].lhs, &rels[0].rhs}) {
      const auto exact = exact_product(*side, win);
      const auto trunc = truncated_product(*side, win, 14);
      for (const auto& t : win.targets())
        EXPECT_TRUE(rq_expand(exact.coefficient(t), 14).congruent(trunc.coefficient(t))) << t.to_string();
    }
  }
}

TEST(Verifier, ExactIdentitiesPass) {
  for (auto id : {IdentityId::Mult1, IdentityId::Mult2, IdentityId::Pentagon}) {
    const auto rep = verify_identity(id, params());
    EXPECT_TRUE(rep.pass) << to_string(id);
    EXPECT_EQ(rep.backend, "exact");
    EXPECT_EQ(rep.per_monomial.size(), 169u);
  }
}

TEST(Verifier, TruncatedBackendOverride) {
  auto p = params(0, 3, 12);
  p.backend = Backend::Truncated;
  const auto rep = verify_identity(IdentityId::Pentagon, p);
  EXPECT_TRUE(rep.pass);
  EXPECT_NE(rep.backend, "exact");
}

TEST(Verifier, ForcingExactOnMixedSignsThrows) {
  auto p = params();
  p.backend = Backend::Exact;
  EXPECT_THROW(verify_identity(IdentityId::SevenTerm, p), InfiniteSupport);
}

TEST(Verifier, SevenTermPasses) {
  const auto rep = verify_identity(IdentityId::SevenTerm, params(2, 3, 20));
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.backend, "certified");
  EXPECT_EQ(rep.per_monomial.size(), 49u);
}

TEST(Verifier, TwoSiteSetHasSixRelationsAllPassing) {
  const auto rep = verify_identity(IdentityId::TwoSiteSet, params(2, 2, 12));
  EXPECT_TRUE(rep.pass);
  ASSERT_EQ(rep.relations.size(), 6u);
  for (const auto& r : rep.relations) EXPECT_TRUE(r.pass()) << r.label;
}

TEST(Verifier, LatticeSetCountsAtFourSites) {
  const auto rep = verify_identity(IdentityId::LatticeSet, params(4, 1, 8));
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.notes.at("nontrivial_relations"), "12");
  // loc[n] for four sites plus comm over the three non-adjacent site pairs
  EXPECT_EQ(rep.notes.at("trivial_relations"), std::to_string(4 + 3 * 4));
}

TEST(Verifier, Family2ProbeResolvesToCorrectedForm) {
  const auto rep = verify_identity(IdentityId::LatticeFamily2Probe, params(3, 2, 10));
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.notes.at("resolution"), "corrected");
  EXPECT_TRUE(rep.notes.at("rejected_first_mismatch").starts_with("fam2_typeset[1,+]"));
  for (const auto& o : rep.per_monomial) EXPECT_TRUE(o.relation.starts_with("fam2["));
}

TEST(Verifier, MismatchReportsEarliestMonomial) {
  const auto r = from_srelation(rel::family2(1, 1, true));
  const auto c = check_relation(r, Window::symmetric({1, 2}, 2), 10, Backend::Auto);
  ASSERT_FALSE(c.summary.pass());
  const auto first = std::find_if(c.outcomes.begin(), c.outcomes.end(), [](const auto& o) { return !o.match; });
  ASSERT_TRUE(c.summary.first_mismatch.has_value());
  EXPECT_EQ(c.summary.first_mismatch->target, first->target);
  EXPECT_NE(c.summary.first_mismatch->lhs, c.summary.first_mismatch->rhs);
}

TEST(Verifier, ReportIsIndependentOfJobs) {
  auto p1 = params(4, 1, 10), p4 = p1;
  p4.jobs = 4;
  const auto a = verify_identity(IdentityId::LatticeSet, p1);
  const auto b = verify_identity(IdentityId::LatticeSet, p4);
  ASSERT_EQ(a.per_monomial.size(), b.per_monomial.size());
  for (std::size_t i = 0; i < a.per_monomial.size(); ++i) {
    EXPECT_EQ(a.per_monomial[i].target, b.per_monomial[i].target);
    EXPECT_EQ(a.per_monomial[i].lhs, b.per_monomial[i].lhs);
  }
}

TEST(Verifier, BraidAndSigmaAlgebraLevel) {
  EXPECT_TRUE(verify_identity(IdentityId::BraidAlg, params(3, 2, 10)).pass);
  const auto sig = verify_identity(IdentityId::SigmaAlg, params(4, 1, 8));
  EXPECT_TRUE(sig.pass);
  EXPECT_TRUE(sig.notes.at("distance2_probe").starts_with("c1 c3 != c3 c1"));
}

TEST(Verifier, ParameterValidation) {
  EXPECT_THROW(verify_identity(IdentityId::SevenTerm, params(0, -1, 0)), InvalidParams);
  EXPECT_THROW(verify_identity(IdentityId::SevenTerm, params(0, 9, 10)), InvalidParams);
  EXPECT_THROW(verify_identity(IdentityId::SevenTerm, params(33, 1, 10)), InvalidParams);
  EXPECT_THROW(verify_identity(IdentityId::SevenTerm, params(0, 1, 65)), InvalidParams);
  auto p = params(3);
  p.site = 3;
  EXPECT_THROW(verify_identity(IdentityId::TwoSiteSet, p), InvalidParams);
  EXPECT_THROW(parse_identity("nope"), InvalidParams);
  EXPECT_EQ(parse_identity("seven_term"), IdentityId::SevenTerm);
}
