#include <cmath>

#include "helpers.hpp"
#include "relcalc/shorting.hpp"

using namespace relcalc;
using namespace relcalc::testing;

namespace {

// Zero operator restricted to span(e1) in C^2.
LinearRelation zero_on_e1() {
  Matrix f(2, 1), g(2, 1);
  f << 1, 0;
  g << 0, 0;
  return LinearRelation::from_generators(f, g);
}

HermMatrix scalar(double z) { return HermMatrix(diag({z})); }

}  // namespace

TEST(SymmetricToQ, Examples) {
  Rng rng(1);
  const HermMatrix pd = random_pd(rng, 3, 10);
  const PartialContraction full = symmetric_to_Q(LinearRelation::from_graph(pd.matrix()));
  EXPECT_EQ(full.dom.dim(), 3);
  EXPECT_LT(dist(full.action * full.dom.basis().adjoint(), NonnegRelation::from_operator(pd).cayley().matrix()),
            1e-10);

  const PartialContraction e1 = symmetric_to_Q(zero_on_e1());
  ASSERT_EQ(e1.dom.dim(), 1);
  EXPECT_LT(dist(e1.action * e1.dom.basis().adjoint(), diag({1, 0})), 1e-12);

  const PartialContraction triv = symmetric_to_Q(LinearRelation(1, Subspace::zero(2)));
  EXPECT_EQ(triv.dom.dim(), 0);
  EXPECT_EQ(extreme_extensions(triv).n_def.dim(), 1);

  EXPECT_THROW(symmetric_to_Q(LinearRelation::from_graph(mat2(0, 1, 0, 0))), Error);
  EXPECT_THROW(symmetric_to_Q(LinearRelation::from_graph(diag({-1, 1}))), Error);
}

TEST(ExtremeExtensions, Examples) {
  PartialContraction q;
  q.n = 2;
  q.dom = axis(2, 0);
  q.action = Matrix::Zero(2, 1);
  const ExtensionInterval iv = extreme_extensions(q);
  EXPECT_LT(dist(iv.q_mu, hdiag({0, -1})), 1e-12);
  EXPECT_LT(dist(iv.q_M, hdiag({0, 1})), 1e-12);
  const auto [lo, hi] = interval_residuals(iv);
  EXPECT_LT(lo, 1e-10);
  EXPECT_LT(hi, 1e-10);

  Rng rng(2);
  const HermMatrix t = random_hermitian_spectrum(rng, 3, -1, 1);
  PartialContraction full;
  full.n = 3;
  full.dom = Subspace::full(3);
  full.action = t.matrix();
  const ExtensionInterval u = extreme_extensions(full);
  EXPECT_LT(dist(u.q_mu, t), 1e-12);
  EXPECT_LT(dist(u.q_M, t), 1e-12);
  EXPECT_EQ(u.n0.dim(), 0);
}

TEST(ExtremeExtensions, RandomIntervals) {
  for (int trial = 0; trial < 40; ++trial) {
    Rng rng = Rng::substream(301, trial);
    const Eigen::Index n = 4 + trial % 4;
    const Eigen::Index m = 1 + trial % 3;
    const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(random_symmetric(rng, n, m)));
    EXPECT_EQ(iv.n_def.dim(), m);
    EXPECT_EQ(iv.n0.dim(), m);
    EXPECT_TRUE(loewner_leq(iv.q_mu, iv.q_M));
    EXPECT_LT(dist(iv.q_mu.matrix() * iv.q.dom.basis(), iv.q.action), 1e-10);
    EXPECT_LT(dist(iv.q_M.matrix() * iv.q.dom.basis(), iv.q.action), 1e-10);
    const auto [lo, hi] = interval_residuals(iv);
    EXPECT_LT(lo, 1e-10);
    EXPECT_LT(hi, 1e-10);
    for (const HermMatrix* e : {&iv.q_mu, &iv.q_M}) {
      const Eigh s = eigh(*e);
      EXPECT_GE(s.values(0), -1 - 1e-10);
      EXPECT_LE(s.values(n - 1), 1 + 1e-10);
    }
  }
}

TEST(FriedrichsKrein, Examples) {
  const NonnegRelation f = friedrichs(zero_on_e1());
  const NonnegRelation k = krein(zero_on_e1());
  EXPECT_TRUE(same_subspace(mul_part(f), axis(2, 1)));
  // S = {(e1, 0)}: S_F vanishes on e1 and is multivalued on e2; S_K = 0.
  EXPECT_NEAR(std::abs(form_eval(f, unit(2, 0), unit(2, 0))), 0.0, 1e-12);
  EXPECT_LT(dist(operator_matrix(k), hdiag({0, 0})), 1e-12);

  Rng rng(3);
  const NonnegRelation a = random_nonneg(rng, 4);
  const LinearRelation s = uncayley(a);
  EXPECT_LT(resolvent_distance(friedrichs(s), a), 1e-9);
  EXPECT_LT(resolvent_distance(krein(s), a), 1e-9);
}

TEST(FriedrichsKrein, InverseCrossCheckAndOrder) {
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng = Rng::substream(303, trial);
    const LinearRelation s = random_symmetric(rng, 5, 1 + trial % 2);
    EXPECT_LT(resolvent_distance(krein(s), krein_via_inverse(s)), 1e-8);
    const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(s));
    const NonnegRelation mid = param_to_extension(iv, random_contraction(rng, iv.n0.dim()));
    EXPECT_TRUE(rel_leq(krein(s), mid));
    EXPECT_TRUE(rel_leq(mid, friedrichs(s)));
  }
}

TEST(Parameters, EndpointsAndMidpoint) {
  Rng rng(4);
  const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(random_symmetric(rng, 5, 2)));
  const Eigen::Index k = iv.n0.dim();
  EXPECT_LT(dist(param_to_extension(iv, -HermMatrix::identity(k)).cayley(), iv.q_mu), 1e-10);
  EXPECT_LT(dist(param_to_extension(iv, HermMatrix::identity(k)).cayley(), iv.q_M), 1e-10);
  EXPECT_LT(dist(param_to_extension(iv, HermMatrix::zero(k)).cayley(), (iv.q_mu + iv.q_M) * 0.5), 1e-12);
  EXPECT_THROW(param_to_extension(iv, HermMatrix::identity(k) * 1.5), Error);
  // Not an extension: the Kreĭn extension of a different problem.
  try {
    extension_to_param(iv, NonnegRelation::identity(5));
    ADD_FAILURE() << "expected NotAnExtension";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAnExtension);
  }
}

TEST(Parameters, RoundTripAndShorts) {
  for (int trial = 0; trial < 40; ++trial) {
    Rng rng = Rng::substream(307, trial);
    const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(random_symmetric(rng, 6, 1 + trial % 3)));
    const HermMatrix z = random_contraction(rng, iv.n0.dim());
    const NonnegRelation ext = param_to_extension(iv, z);
    EXPECT_LT(dist(extension_to_param(iv, ext), z), 1e-9);
    // (I ± Q̃)_𝔑 = ½ G (I ± Z) G
    const Eigen::Index n = iv.q.n;
    const HermMatrix id = HermMatrix::identity(n);
    const Matrix& g = iv.half_gap_sqrt.matrix();
    const Matrix& b = iv.n0.basis();
    const Matrix zl = b * z.matrix() * b.adjoint();
    const Matrix pn = b * b.adjoint();
    const Matrix plus = 0.5 * g * (pn + zl) * g;
    const Matrix minus = 0.5 * g * (pn - zl) * g;
    EXPECT_LT(dist(short_psd(id + ext.cayley(), iv.n_def).matrix(), plus), 1e-8);
    EXPECT_LT(dist(short_psd(id - ext.cayley(), iv.n_def).matrix(), minus), 1e-8);
  }
}

TEST(Extremality, Examples) {
  Rng rng(6);
  const LinearRelation s = random_symmetric(rng, 5, 1);
  const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(s));
  EXPECT_TRUE(is_extremal(iv, friedrichs(s)));
  EXPECT_TRUE(is_extremal(iv, krein(s)));
  EXPECT_FALSE(is_extremal(iv, param_to_extension(iv, HermMatrix::zero(1))));

  const ExtensionInterval iv2 = extreme_extensions(symmetric_to_Q(random_symmetric(rng, 5, 2)));
  EXPECT_TRUE(is_extremal(iv2, param_to_extension(iv2, HermMatrix(diag({1, -1})))));
  for (int trial = 0; trial < 20; ++trial) {
    EXPECT_TRUE(is_extremal(iv2, param_to_extension(iv2, random_fundamental_symmetry(rng, 2))));
    const HermMatrix z = random_hermitian_spectrum(rng, 2, -0.9, 0.9);
    EXPECT_FALSE(is_extremal(iv2, param_to_extension(iv2, z)));
  }
}

TEST(ParamMeans, Examples) {
  Rng rng(8);
  const HermMatrix z = random_contraction(rng, 3);
  const ParamMeans same = means_param_map(z, z);
  EXPECT_LT(dist(same.arith, z), 1e-10);
  EXPECT_LT(dist(same.harm, z), 1e-10);
  EXPECT_LT(dist(same.c0, z), 1e-14);
  for (double x : {-0.7, 0.0, 0.4, 1.0}) {
    EXPECT_NEAR(means_param_map(scalar(-1), scalar(x)).arith.matrix()(0, 0).real(), -1.0, 1e-12);
    EXPECT_NEAR(means_param_map(scalar(1), scalar(x)).harm.matrix()(0, 0).real(), 1.0, 1e-12);
  }
}

TEST(ParamMeans, MatchRelationMeans) {
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng = Rng::substream(311, trial);
    const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(random_symmetric(rng, 6, 1 + trial % 3)));
    const Eigen::Index k = iv.n0.dim();
    const HermMatrix z1 = random_contraction(rng, k), z2 = random_contraction(rng, k);
    const NonnegRelation s1 = param_to_extension(iv, z1), s2 = param_to_extension(iv, z2);
    const ParamMeans pm = means_param_map(z1, z2);
    EXPECT_LT(resolvent_distance(param_to_extension(iv, pm.arith), arithmetic(s1, s2)), 1e-8);
    EXPECT_LT(resolvent_distance(param_to_extension(iv, pm.harm), harmonic(s1, s2)), 1e-8);
    EXPECT_LT(resolvent_distance(param_to_extension(iv, pm.c0), c0_mean(s1, s2)), 1e-8);
    // The means are extensions again.
    EXPECT_NO_THROW(extension_to_param(iv, arithmetic(s1, s2)));
    EXPECT_NO_THROW(extension_to_param(iv, harmonic(s1, s2)));
    EXPECT_NO_THROW(extension_to_param(iv, c0_mean(s1, s2)));
  }
}

TEST(AhExtensions, FriedrichsKreinPair) {
  Rng rng(9);
  const LinearRelation s = random_symmetric(rng, 5, 1);
  const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(s));
  const AhExtensionResult r = ah_extensions(iv, friedrichs(s), krein(s));
  EXPECT_TRUE(r.extremal_inputs);
  EXPECT_FALSE(r.pair.coincide);
  EXPECT_LT(resolvent_distance(r.pair.upper, friedrichs(s)), 1e-9);
  EXPECT_LT(resolvent_distance(r.pair.lower, krein(s)), 1e-9);
  EXPECT_LT(r.stabilization_residual, 1e-9);

  const AhExtensionResult same = ah_extensions(iv, krein(s), krein(s));
  EXPECT_TRUE(same.pair.coincide);
}

TEST(AhExtensions, DeficiencyOneClosedForm) {
  Rng rng(10);
  const LinearRelation s = random_symmetric(rng, 5, 1);
  const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(s));
  const AhExtensionResult r = ah_extensions(iv, param_to_extension(iv, scalar(0.6)), param_to_extension(iv, scalar(0)));
  EXPECT_TRUE(r.pair.coincide);
  ASSERT_TRUE(r.w_predicted && r.w_upper && r.w_lower);
  EXPECT_NEAR(*r.w_predicted, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(*r.w_upper, 1.0 / 3.0, 1e-7);
  EXPECT_NEAR(*r.w_lower, 1.0 / 3.0, 1e-7);
}

TEST(ScalarW, Examples) {
  for (double z : {-0.9, -0.3, 0.0, 0.5, 1.0}) EXPECT_NEAR(scalar_w(z, z), z, 1e-15);
  EXPECT_NEAR(scalar_w(0.6, 0.0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(scalar_w(-1.0, 0.0), -1.0);
  EXPECT_EQ(scalar_w(0.3, 1.0), 1.0);
  try {
    scalar_w(-1.0, 1.0);
    ADD_FAILURE() << "expected ExtremalPair";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExtremalPair);
  }
  EXPECT_THROW(scalar_w(1.5, 0), Error);
}

TEST(ScalarW, Recursion) {
  const ScalarRecursion r = scalar_w_by_recursion(0.6, 0.0);
  EXPECT_NEAR(r.w, 1.0 / 3.0, 1e-12);
  EXPECT_LE(r.steps, 60);
  EXPECT_TRUE(r.monotone);
  EXPECT_EQ(scalar_w_by_recursion(0.25, 0.25).steps, 0);
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double z1 = rng.uniform(-1, 1), z2 = rng.uniform(-1, 1);
    const ScalarRecursion s = scalar_w_by_recursion(z1, z2);
    EXPECT_NEAR(s.w, scalar_w(z1, z2), 1e-12);
    EXPECT_TRUE(s.monotone);
  }
  EXPECT_THROW(scalar_w_by_recursion(1.0, -1.0), Error);
}

TEST(BoundaryCalculus, Table) {
  using K = BcKind;
  const BoundaryParam one{1}, four{4}, zero{0}, inf = BoundaryParam::inf();
  EXPECT_DOUBLE_EQ(bc_mean(one, four, K::Arith).value.value, 2.5);
  EXPECT_DOUBLE_EQ(bc_mean(one, four, K::Harm).value.value, 1.6);
  EXPECT_NEAR(bc_mean(one, four, K::C0).value.value, 13.0 / 7.0, 1e-15);
  EXPECT_DOUBLE_EQ(bc_mean(one, four, K::Ah).value.value, 2.0);
  const BoundaryParam c{3};
  EXPECT_TRUE(bc_mean(c, inf, K::Arith).value.is_inf());
  EXPECT_DOUBLE_EQ(bc_mean(c, inf, K::Harm).value.value, 6.0);
  EXPECT_DOUBLE_EQ(bc_mean(inf, c, K::C0).value.value, 7.0);
  EXPECT_TRUE(bc_mean(c, inf, K::Ah).value.is_inf());
  EXPECT_DOUBLE_EQ(bc_mean(c, zero, K::Arith).value.value, 1.5);
  EXPECT_DOUBLE_EQ(bc_mean(c, zero, K::C0).value.value, 0.6);
  EXPECT_DOUBLE_EQ(bc_mean(zero, c, K::Harm).value.value, 0.0);
  EXPECT_DOUBLE_EQ(bc_mean(c, zero, K::Ah).value.value, 0.0);
  EXPECT_TRUE(bc_mean(zero, inf, K::Arith).value.is_inf());
  EXPECT_DOUBLE_EQ(bc_mean(zero, inf, K::C0).value.value, 1.0);
  EXPECT_DOUBLE_EQ(bc_mean(zero, inf, K::Harm).value.value, 0.0);
  const BcResult p = bc_mean(inf, zero, K::Ah);
  ASSERT_TRUE(p.is_pair());
  EXPECT_TRUE(p.pair->first.is_inf());
  EXPECT_EQ(p.pair->second.value, 0.0);
  for (K k : {K::Arith, K::Harm, K::C0, K::Ah}) EXPECT_DOUBLE_EQ(bc_mean(c, c, k).value.value, 3.0);
  EXPECT_THROW(bc_mean(BoundaryParam{-1}, c, K::Ah), Error);
}

TEST(BoundaryCalculus, Conjugation) {
  EXPECT_EQ(z_of_c(BoundaryParam{1}), 0.0);
  EXPECT_EQ(z_of_c(BoundaryParam{0}), 1.0);
  EXPECT_EQ(z_of_c(BoundaryParam::inf()), -1.0);
  EXPECT_TRUE(c_of_z(-1.0).is_inf());
  for (double c : {0.0, 0.1, 1.0, 3.0, 40.0}) {
    EXPECT_NEAR(c_of_z(z_of_c(BoundaryParam{c})).value, c, 1e-12 * (1 + c));
    for (double d : {0.05, 0.5, 2.0, 7.0}) {
      const double zc = z_of_c(BoundaryParam{c}), zd = z_of_c(BoundaryParam{d});
      const ParamMeans pm = means_param_map(scalar(zc), scalar(zd));
      EXPECT_NEAR(z_of_c(bc_mean(BoundaryParam{c}, BoundaryParam{d}, BcKind::Arith).value),
                  pm.arith.matrix()(0, 0).real(), 1e-12);
      EXPECT_NEAR(z_of_c(bc_mean(BoundaryParam{c}, BoundaryParam{d}, BcKind::Harm).value),
                  pm.harm.matrix()(0, 0).real(), 1e-12);
      EXPECT_NEAR(z_of_c(bc_mean(BoundaryParam{c}, BoundaryParam{d}, BcKind::C0).value),
                  pm.c0.matrix()(0, 0).real(), 1e-12);
      if (c > 0) {
        EXPECT_NEAR(z_of_c(bc_mean(BoundaryParam{c}, BoundaryParam{d}, BcKind::Ah).value), scalar_w(zc, zd), 1e-12);
      }
    }
  }
}

TEST(BoundaryParam, Parse) {
  EXPECT_TRUE(BoundaryParam::parse("inf").is_inf());
  EXPECT_DOUBLE_EQ(BoundaryParam::parse("2.5").value, 2.5);
  EXPECT_THROW(BoundaryParam::parse("-1"), Error);
  EXPECT_THROW(BoundaryParam::parse("abc"), Error);
  EXPECT_THROW(BoundaryParam::parse("1x"), Error);
}

TEST(UniqueExtension, ShortOfFriedrichsVanishes) {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = Rng::substream(313, trial);
    const LinearRelation s = random_symmetric_unique(rng, 6, 1 + trial % 3);
    const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(s));
    EXPECT_EQ(iv.n0.dim(), 0);
    EXPECT_LT(dist(iv.q_mu, iv.q_M), 1e-9);
  }
}
