#include <cmath>

#include "helpers.hpp"

using namespace relcalc;
using namespace relcalc::testing;

TEST(HermMatrix, RejectsNonHermitian) {
  Matrix m = mat2(0, 1, 0, 0);
  EXPECT_THROW(HermMatrix{m}, Error);
  try {
    HermMatrix h(m);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(Tolerance, Validation) {
  Tolerance t;
  EXPECT_NO_THROW(t.validate());
  t.psd_slack = 0.0;
  EXPECT_THROW(t.validate(), Error);
  t.psd_slack = 0.5;
  EXPECT_THROW(t.validate(), Error);
}

TEST(Eigh, DiagonalAndSwap) {
  const Eigh e = eigh(hdiag({3, 1}));
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 3.0, 1e-14);
  const Eigh s = eigh(HermMatrix(mat2(0, 1, 1, 0)));
  EXPECT_NEAR(s.values(0), -1.0, 1e-14);
  EXPECT_NEAR(s.values(1), 1.0, 1e-14);
  Vector v(2);
  v << 1.0, -1.0;
  v /= std::sqrt(2.0);
  EXPECT_NEAR(std::abs(s.vectors.col(0).dot(v)), 1.0, 1e-12);
}

TEST(Eigh, Reconstructs) {
  Rng rng(1);
  const HermMatrix m = random_hermitian_spectrum(rng, 6, -3, 5);
  const Eigh e = eigh(m);
  const Matrix back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  EXPECT_LT(dist(back, m.matrix()), 1e-12);
  for (Eigen::Index i = 1; i < 6; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
}

TEST(Pinv, Examples) {
  EXPECT_LT(dist(pinv(hdiag({2, 0})), hdiag({0.5, 0})), 1e-14);
  EXPECT_LT(dist(pinv(HermMatrix::identity(3)), HermMatrix::identity(3)), 1e-14);
  const HermMatrix p(mat2(0.5, 0.5, 0.5, 0.5));
  EXPECT_LT(dist(pinv(p), p), 1e-12);
}

TEST(Pinv, PenroseIdentities) {
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng = Rng::substream(7, trial);
    const Eigen::Index n = 2 + trial % 6;
    // Rank-deficient, indefinite Hermitian input.
    const Eigen::Index r = std::max<Eigen::Index>(1, n - 2);
    const Matrix g = random_gaussian(rng, n, r);
    RealVector signs(r);
    for (Eigen::Index i = 0; i < r; ++i) signs(i) = (i % 2 == 0) ? 1.0 : -0.5;
    const HermMatrix m(Matrix(g * signs.cast<cplx>().asDiagonal() * g.adjoint()));
    const Matrix x = pinv(m).matrix();
    const Matrix& a = m.matrix();
    const double s = 1.0 + a.norm() + x.norm();
    EXPECT_LT(dist(a * x * a, a), 1e-8 * s);
    EXPECT_LT(dist(x * a * x, x), 1e-8 * s);
    EXPECT_LT(dist((a * x).adjoint(), a * x), 1e-8 * s);
    EXPECT_LT(dist((x * a).adjoint(), x * a), 1e-8 * s);
  }
}

TEST(PsdSqrt, Examples) {
  EXPECT_LT(dist(psd_sqrt(hdiag({4, 9})), hdiag({2, 3})), 1e-14);
  EXPECT_LT(dist(psd_sqrt(HermMatrix::zero(2)), HermMatrix::zero(2)), 1e-14);
  const HermMatrix p(mat2(0.5, 0.5, 0.5, 0.5));
  EXPECT_LT(dist(psd_sqrt(p), p), 1e-12);
  EXPECT_THROW(psd_sqrt(hdiag({1, -1})), Error);
  // Dust below the slack is clamped.
  EXPECT_NO_THROW(psd_sqrt(hdiag({1, -1e-12})));
}

TEST(PsdSqrt, SquaresBack) {
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng = Rng::substream(11, trial);
    const HermMatrix s = random_pd(rng, 6, 1e8);
    const HermMatrix r = psd_sqrt(s);
    EXPECT_LT(opnorm(r.matrix() * r.matrix() - s.matrix()), 1e-8);
    const HermMatrix ri = pinv_sqrt(s);
    EXPECT_LT(dist(ri, pinv(r)), 1e-8 * (1.0 + ri.norm()));
  }
}

TEST(RangeKernel, Examples) {
  const Matrix ones = mat2(1, 1, 1, 1);
  const Subspace r = range(ones);
  const Subspace k = kernel(ones);
  ASSERT_EQ(r.dim(), 1);
  ASSERT_EQ(k.dim(), 1);
  Vector v(2);
  v << 1, 1;
  EXPECT_NEAR(std::abs(r.basis().col(0).dot(v)) / std::sqrt(2.0), 1.0, 1e-12);
  EXPECT_EQ(range(Matrix(Matrix::Identity(3, 3))).dim(), 3);
  EXPECT_EQ(kernel(Matrix(Matrix::Identity(3, 3))).dim(), 0);
  EXPECT_EQ(range(Matrix(Matrix::Zero(3, 3))).dim(), 0);
  EXPECT_EQ(kernel(Matrix(Matrix::Zero(3, 3))).dim(), 3);
}

TEST(RangeKernel, ReferenceScaleSuppressesNoise) {
  Matrix noise = Matrix::Zero(2, 2);
  noise(0, 0) = 1e-18;
  EXPECT_EQ(range(noise).dim(), 1);
  EXPECT_EQ(range(noise, {}, 1.0).dim(), 0);
  EXPECT_EQ(kernel(noise, {}, 1.0).dim(), 2);
}

TEST(ProjectorRange, FixesColumns) {
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng = Rng::substream(3, trial);
    const Matrix m = random_gaussian(rng, 6, 3) * random_gaussian(rng, 3, 5);
    EXPECT_LT(opnorm(projector(range(m)).matrix() * m - m), 1e-10 * (1 + opnorm(m)));
  }
}

TEST(MeetJoin, Examples) {
  const Subspace e1 = axis(2, 0);
  const Subspace e2 = axis(2, 1);
  EXPECT_TRUE(same_subspace(meet(e1, e1), e1));
  EXPECT_EQ(meet(e1, e2).dim(), 0);
  Vector d(2);
  d << 1, 1;
  const Subspace diag1(2, d / std::sqrt(2.0));
  EXPECT_EQ(join(e1, diag1).dim(), 2);
}

TEST(MeetJoin, DimensionFormula) {
  for (int trial = 0; trial < 60; ++trial) {
    Rng rng = Rng::substream(5, trial);
    const Eigen::Index n = 6;
    // Build subspaces with a prescribed common part so intersections are non-trivial.
    const Eigen::Index c = rng.integer(0, 2);
    const Eigen::Index a = c + rng.integer(0, 2);
    const Eigen::Index b = c + rng.integer(0, 2);
    const Matrix u = random_unitary(rng, n);
    const Matrix common = u.leftCols(c);
    Matrix ua(n, a), vb(n, b);
    ua << common, random_gaussian(rng, n, a - c);
    vb << common, random_gaussian(rng, n, b - c);
    const Subspace us = span_of(ua), vs = span_of(vb);
    const Subspace m = meet(us, vs), j = join(us, vs);
    EXPECT_EQ(m.dim() + j.dim(), us.dim() + vs.dim());
    EXPECT_TRUE(same_subspace(meet(us, vs), meet(vs, us)));
    EXPECT_TRUE(same_subspace(join(us, vs), join(vs, us)));
    EXPECT_TRUE(same_subspace(meet(us, us), us));
    EXPECT_TRUE(same_subspace(join(us, us), us));
    EXPECT_TRUE(contained_in(m, us) && contained_in(m, vs));
    EXPECT_TRUE(contained_in(us, j) && contained_in(vs, j));
  }
}

TEST(Projector, Examples) {
  EXPECT_LT(dist(projector(axis(2, 0)), hdiag({1, 0})), 1e-15);
  EXPECT_LT(dist(projector(Subspace::full(3)), HermMatrix::identity(3)), 1e-15);
  Vector d(2);
  d << 1, 1;
  EXPECT_LT(dist(projector(Subspace(2, d / std::sqrt(2.0))), HermMatrix(mat2(0.5, 0.5, 0.5, 0.5))), 1e-15);
}

TEST(Loewner, Examples) {
  const HermMatrix i2 = HermMatrix::identity(2);
  EXPECT_TRUE(loewner_leq(i2, i2 * 2.0));
  EXPECT_FALSE(loewner_leq(hdiag({0, 2}), hdiag({1, 1})));
  EXPECT_TRUE(loewner_leq(i2, i2));
}

TEST(Loewner, PartialOrderOnSample) {
  Rng rng(99);
  std::vector<HermMatrix> sample;
  const HermMatrix base = random_hermitian_spectrum(rng, 4, -1, 1);
  for (int i = 0; i < 12; ++i) {
    // Chains and incomparable elements mixed.
    sample.push_back(i % 3 == 0 ? base + random_psd(rng, 4, 2) : random_hermitian_spectrum(rng, 4, -1, 1));
  }
  sample.push_back(base);
  for (const auto& a : sample) {
    EXPECT_TRUE(loewner_leq(a, a));
    for (const auto& b : sample) {
      if (loewner_leq(a, b) && loewner_leq(b, a)) EXPECT_LT(dist(a, b), 1e-8);
      for (const auto& c : sample) {
        if (loewner_leq(a, b) && loewner_leq(b, c)) EXPECT_TRUE(loewner_leq(a, c));
      }
    }
  }
}
