#include <cmath>

#include "helpers.hpp"
#include "relcalc/means.hpp"
#include "relcalc/shorting.hpp"

using namespace relcalc;
using namespace relcalc::testing;

namespace {

double scalar_of(const NonnegRelation& a) { return operator_matrix(a).matrix()(0, 0).real(); }

NonnegRelation num(double x) { return op(diag({x})); }

}  // namespace

TEST(ParallelSumPsd, Examples) {
  EXPECT_LT(dist(parallel_sum_psd(hdiag({2, 3}), hdiag({6, 6})), hdiag({1.5, 2})), 1e-12);
  Rng rng(1);
  const HermMatrix a = random_psd(rng, 4, 2);
  EXPECT_LT(dist(parallel_sum_psd(a, a), a * 0.5), 1e-10);
  // 2(P1 : P2) = P_{L1 ∩ L2}
  const Matrix u = random_unitary(rng, 5);
  Matrix b1(5, 3), b2(5, 3);
  b1 << u.col(0), u.col(1), u.col(2);
  b2 << u.col(0), u.col(3), (u.col(1) + u.col(4)) / std::sqrt(2.0);
  const Subspace l1 = span_of(b1), l2 = span_of(b2);
  const HermMatrix p = parallel_sum_psd(projector(l1), projector(l2)) * 2.0;
  EXPECT_LT(dist(p, projector(meet(l1, l2))), 1e-9);
  EXPECT_THROW(parallel_sum_psd(hdiag({1, -1}), hdiag({1, 1})), Error);
}

TEST(ParallelSumPsd, PseudoInverseFormulaOnInvertibleSums) {
  for (int trial = 0; trial < 40; ++trial) {
    Rng rng = Rng::substream(201, trial);
    const HermMatrix a = random_psd(rng, 5, rng.integer(1, 5));
    const HermMatrix b = random_pd(rng, 5, 1e2);
    // A (A + B)^{-1} B when A + B is invertible.
    const Matrix expected = a.matrix() * (a + b).matrix().inverse() * b.matrix();
    const HermMatrix got = parallel_sum_psd(a, b);
    EXPECT_LT(dist(got.matrix(), expected), 1e-9);
    EXPECT_LT(dist(got, parallel_sum_psd(b, a)), 1e-10);
    EXPECT_TRUE(loewner_leq(got, a) && loewner_leq(got, b));
  }
}

TEST(ParallelSumPsd, VariationalMinimum) {
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng = Rng::substream(203, trial);
    const HermMatrix a = random_pd(rng, 4, 1e2), b = random_pd(rng, 4, 1e2);
    const Vector phi = random_gaussian(rng, 4, 1);
    // min (Af, f) + (B(φ − f), φ − f): stationarity (A + B) f = B φ.
    const Vector f = (a + b).matrix().ldlt().solve(b.matrix() * phi);
    const Vector g = phi - f;
    const double minimum = (f.dot(a.matrix() * f) + g.dot(b.matrix() * g)).real();
    const double value = phi.dot(parallel_sum_psd(a, b).matrix() * phi).real();
    EXPECT_NEAR(value, minimum, 1e-8 * (1 + minimum));
  }
}

TEST(RelationMeans, ScalarExamples) {
  EXPECT_NEAR(scalar_of(parallel_sum_rel(num(2), num(6))), 1.5, 1e-12);
  EXPECT_NEAR(scalar_of(harmonic(num(2), num(6))), 3.0, 1e-12);
  EXPECT_NEAR(scalar_of(arithmetic(num(2), num(6))), 4.0, 1e-12);
  EXPECT_NEAR(scalar_of(form_sum(num(2), num(6))), 8.0, 1e-12);
  EXPECT_NEAR(scalar_of(c0_mean(num(2), num(6))), 3.2, 1e-12);
  EXPECT_NEAR(scalar_of(c0_mean(num(1), num(1))), 1.0, 1e-12);
  EXPECT_NEAR(scalar_of(harmonic(num(5), num(5))), 5.0, 1e-12);
  EXPECT_NEAR(scalar_of(arithmetic(num(5), num(5))), 5.0, 1e-12);
}

TEST(RelationMeans, DegenerateExamples) {
  Rng rng(2);
  const NonnegRelation a = random_bounded(rng, 3, 0.0);
  const NonnegRelation mv = NonnegRelation::purely_multivalued(3);
  const NonnegRelation zero = NonnegRelation::zero_operator(3);
  EXPECT_LT(resolvent_distance(parallel_sum_rel(a, mv), a), 1e-10);
  EXPECT_LT(resolvent_distance(form_sum(a, zero), a), 1e-10);
  EXPECT_LT(dist(c0_mean(zero, mv).cayley(), HermMatrix::zero(3)), 1e-14);
  // Disjoint form domains: form sum is purely multivalued.
  const NonnegRelation p(hdiag({0.3, -1, -1}));
  const NonnegRelation q(hdiag({-1, 0.1, -1}));
  EXPECT_LT(dist(form_sum(p, q).cayley(), -HermMatrix::identity(3)), 1e-12);
  EXPECT_LT(dist(form_sum_oracle(p, q).cayley(), -HermMatrix::identity(3)), 1e-12);
  // Disjoint square-root ranges: parallel sum is zero.
  const NonnegRelation r(hdiag({0.3, 1, 1}));
  const NonnegRelation s(hdiag({1, 0.1, 1}));
  EXPECT_LT(dist(parallel_sum_rel(r, s).cayley(), HermMatrix::identity(3)), 1e-12);
}

TEST(RelationMeans, CayleyRouteMatchesFormOracle) {
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng = Rng::substream(211, trial);
    const NonnegRelation a = random_nonneg(rng, 5), b = random_nonneg(rng, 5);
    EXPECT_LT(resolvent_distance(form_sum(a, b), form_sum_oracle(a, b)), 1e-8);
  }
}

TEST(RelationMeans, InverseDuality) {
  for (int trial = 0; trial < 40; ++trial) {
    Rng rng = Rng::substream(213, trial);
    const NonnegRelation a = random_nonneg(rng, 5), b = random_nonneg(rng, 5);
    EXPECT_LT(resolvent_distance(harmonic(rel_inverse(a), rel_inverse(b)), rel_inverse(arithmetic(a, b))), 1e-9);
    // A : B = (A^{-1} ∔ B^{-1})^{-1}
    EXPECT_LT(resolvent_distance(parallel_sum_rel(a, b), rel_inverse(form_sum(rel_inverse(a), rel_inverse(b)))),
              1e-9);
    // Bounded case agrees with the matrix parallel sum.
    const HermMatrix x = random_psd(rng, 4, 3), y = random_psd(rng, 4, 2);
    EXPECT_LT(dist(operator_matrix(parallel_sum_rel(NonnegRelation::from_operator(x), NonnegRelation::from_operator(y))),
                   parallel_sum_psd(x, y)),
              1e-9);
  }
}

TEST(RelationMeans, MulOfParallelSum) {
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng = Rng::substream(215, trial);
    const NonnegRelation a = random_nonneg(rng, 5, {0.5, 0.1}), b = random_nonneg(rng, 5, {0.5, 0.1});
    EXPECT_TRUE(same_subspace(mul_part(parallel_sum_rel(a, b)), meet(mul_part(a), mul_part(b))));
  }
}

TEST(GeometricMean, Examples) {
  EXPECT_LT(dist(geometric_mean_pd(hdiag({1, 4}), hdiag({4, 1})), hdiag({2, 2})), 1e-12);
  Rng rng(3);
  const HermMatrix a = random_pd(rng, 4), b = random_pd(rng, 4);
  EXPECT_LT(dist(geometric_mean_pd(a, a), a), 1e-10);
  EXPECT_LT(dist(geometric_mean_pd(HermMatrix::identity(4), b), psd_sqrt(b)), 1e-10);
  EXPECT_LT(dist(geometric_mean_pd(a, b), geometric_mean_pd(b, a)), 1e-9);
  EXPECT_THROW(geometric_mean_pd(hdiag({1, 0}), hdiag({1, 1})), Error);
}

TEST(AhIterate, Examples) {
  const MeanPair s = ah_iterate(num(1), num(4));
  EXPECT_TRUE(s.coincide);
  EXPECT_NEAR(scalar_of(s.upper), 2.0, 1e-10);
  EXPECT_NEAR(scalar_of(s.lower), 2.0, 1e-10);

  Rng rng(5);
  const NonnegRelation a = random_nonneg(rng, 4);
  const MeanPair same = ah_iterate(a, a);
  EXPECT_TRUE(same.converged && same.coincide);
  EXPECT_EQ(same.trace.size(), 1u);
}

TEST(AhIterate, PositiveDefiniteLimit) {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = Rng::substream(221, trial);
    const HermMatrix a = random_pd(rng, 4, 1e2), b = random_pd(rng, 4, 1e2);
    const MeanPair p = ah_iterate(NonnegRelation::from_operator(a), NonnegRelation::from_operator(b));
    EXPECT_TRUE(p.converged);
    EXPECT_TRUE(p.coincide);
    const HermMatrix expected = pinv(geometric_mean_pd(pinv(a), pinv(b)));
    EXPECT_LT(dist(operator_matrix(p.upper), expected), 1e-8 * (1 + expected.norm()));
    EXPECT_TRUE(rel_leq(harmonic(NonnegRelation::from_operator(a), NonnegRelation::from_operator(b)), p.lower));
    EXPECT_TRUE(rel_leq(p.upper, arithmetic(NonnegRelation::from_operator(a), NonnegRelation::from_operator(b))));
  }
}

TEST(AhClosedForms, ZeroAndMultivaluedFirst) {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = Rng::substream(223, trial);
    const NonnegRelation b = random_nonneg(rng, 4);
    const AhClosedForms cf = ah_closed_forms(b);
    const MeanPair z = ah_iterate(NonnegRelation::zero_operator(4), b);
    EXPECT_LT(resolvent_distance(z.upper, cf.zero_first.upper), 1e-7);
    EXPECT_LT(resolvent_distance(z.lower, cf.zero_first.lower), 1e-7);
    const MeanPair m = ah_iterate(NonnegRelation::purely_multivalued(4), b);
    EXPECT_LT(resolvent_distance(m.upper, cf.multivalued_first.upper), 1e-7);
    EXPECT_LT(resolvent_distance(m.lower, cf.multivalued_first.lower), 1e-7);
  }
}

TEST(AhClosedForms, WithInverse) {
  Rng rng(7);
  const HermMatrix pd = random_pd(rng, 3, 10);
  const AhClosedForms id = ah_closed_forms(NonnegRelation::from_operator(pd));
  EXPECT_LT(dist(id.with_inverse.upper.cayley(), HermMatrix::zero(3)), 1e-12);
  EXPECT_TRUE(id.with_inverse.coincide);

  // ker A = span(e1): pair ⟨(P_{M⊥})^{-1}, P_{M⊥}⟩ with M = span(e1).
  const NonnegRelation k = op(diag({0, 2, 0.5}));
  const AhClosedForms cf = ah_closed_forms(k);
  EXPECT_LT(dist(cf.with_inverse.lower.cayley(), hdiag({1, 0, 0})), 1e-12);
  EXPECT_LT(dist(cf.with_inverse.upper.cayley(), hdiag({-1, 0, 0})), 1e-12);
  EXPECT_FALSE(cf.with_inverse.coincide);

  for (int trial = 0; trial < 20; ++trial) {
    Rng r = Rng::substream(227, trial);
    const NonnegRelation a = random_nonneg(r, 4);
    const AhClosedForms c = ah_closed_forms(a);
    const MeanPair it = ah_iterate(a, rel_inverse(a));
    EXPECT_LT(resolvent_distance(it.upper, c.with_inverse.upper), 1e-7);
    EXPECT_LT(resolvent_distance(it.lower, c.with_inverse.lower), 1e-7);
    EXPECT_LT(c.cayley_power_residual, 1e-8);
  }
}

TEST(Regularized, ScalarAndRandom) {
  const RegularizedResult s = regularized_parallel_oracle(num(2), num(6), ladder(8));
  EXPECT_NEAR(scalar_of(s.relation), 1.5, 1e-6);
  EXPECT_TRUE(s.monotone);

  const NonnegRelation r(hdiag({0.3, 1, 1}));
  const NonnegRelation q(hdiag({1, 0.1, 1}));
  const RegularizedResult z = regularized_parallel_oracle(r, q, ladder(8));
  EXPECT_LT(resolvent_distance(z.relation, NonnegRelation::zero_operator(3)), 1e-5);

  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = Rng::substream(229, trial);
    const NonnegRelation a = random_nonneg(rng, 4), b = random_nonneg(rng, 4);
    const RegularizedResult res = regularized_parallel_oracle(a, b, ladder(8));
    EXPECT_TRUE(res.monotone);
    EXPECT_LT(resolvent_distance(res.relation, parallel_sum_rel(a, b)), 1e-5);
  }
}
