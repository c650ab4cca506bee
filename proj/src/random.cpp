#include "relcalc/random.hpp"

#include <cmath>
#include <numbers>

namespace relcalc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  engine_.seed(splitmix64(s));
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return Rng(splitmix64(t));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

cplx Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return cplx(re, im) * std::sqrt(0.5);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

Matrix random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.cnormal();
  return m;
}

Matrix random_unitary(Rng& rng, Eigen::Index n) {
  const Matrix g = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is Haar.
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Subspace random_subspace(Rng& rng, Eigen::Index n, Eigen::Index k) {
  if (k < 0 || k > n) throw Error(ErrorCode::InvalidArgument, "random_subspace dimension");
  return Subspace(n, random_unitary(rng, n).leftCols(k));
}

HermMatrix random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  if (rank <= 0) return HermMatrix::zero(n);
  const Matrix g = random_gaussian(rng, n, rank);
  return HermMatrix(Matrix(g * g.adjoint() / static_cast<double>(rank)));
}

HermMatrix random_pd(Rng& rng, Eigen::Index n, double cond) {
  const Matrix u = random_unitary(rng, n);
  RealVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = std::pow(cond, -rng.uniform());
  return HermMatrix(Matrix(u * d.cast<cplx>().asDiagonal() * u.adjoint()));
}

HermMatrix random_hermitian_spectrum(Rng& rng, Eigen::Index n, double lo, double hi) {
  const Matrix u = random_unitary(rng, n);
  RealVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = rng.uniform(lo, hi);
  return HermMatrix(Matrix(u * d.cast<cplx>().asDiagonal() * u.adjoint()));
}

NonnegRelation random_nonneg(Rng& rng, Eigen::Index n, const RelationShape& shape) {
  const Matrix u = random_unitary(rng, n);
  RealVector t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = rng.uniform();
    if (r < shape.p_mul) {
      t(i) = -1.0;
    } else if (r < shape.p_mul + shape.p_ker) {
      t(i) = 1.0;
    } else {
      t(i) = rng.uniform(-0.95, 0.95);
    }
  }
  return NonnegRelation(HermMatrix(Matrix(u * t.cast<cplx>().asDiagonal() * u.adjoint())));
}

NonnegRelation random_bounded(Rng& rng, Eigen::Index n, double p_ker) {
  return random_nonneg(rng, n, RelationShape{0.0, p_ker});
}

LinearRelation symmetric_from_Q(const PartialContraction& q, const Tolerance& tol) {
  q.validate(tol);
  // f + f′ = u, f − f′ = Qu.
  const Matrix& db = q.dom.basis();
  const Matrix first = 0.5 * (db + q.action);
  const Matrix second = 0.5 * (db - q.action);
  if (db.cols() == 0) return LinearRelation(q.n, Subspace::zero(2 * q.n));
  return LinearRelation::from_generators(first, second, tol);
}

LinearRelation random_symmetric(Rng& rng, Eigen::Index n, Eigen::Index deficiency) {
  if (deficiency < 0 || deficiency > n) throw Error(ErrorCode::InvalidArgument, "deficiency out of range");
  const HermMatrix t = random_hermitian_spectrum(rng, n, -0.9, 0.9);
  PartialContraction q;
  q.n = n;
  q.dom = random_subspace(rng, n, n - deficiency);
  q.action = t.matrix() * q.dom.basis();
  return symmetric_from_Q(q);
}

LinearRelation random_symmetric_unique(Rng& rng, Eigen::Index n, Eigen::Index deficiency) {
  const Eigen::Index p = n - deficiency;
  if (deficiency < 0 || deficiency > p) throw Error(ErrorCode::InvalidArgument, "unique extension needs deficiency ≤ n/2");
  const Matrix u = random_unitary(rng, n);
  const Matrix db = u.leftCols(p);
  const Matrix nb = u.rightCols(deficiency);
  const HermMatrix d = random_hermitian_spectrum(rng, p, -0.9, 0.9);
  // N a co-isometry (N N* = I) makes D_{N*} = 0: the interval collapses.
  const Matrix nmat = random_unitary(rng, p).topRows(deficiency);
  const HermMatrix dd = psd_sqrt(HermMatrix::identity(p) - HermMatrix(Matrix(d.matrix() * d.matrix())));
  PartialContraction q;
  q.n = n;
  q.dom = Subspace(n, db);
  q.action = db * d.matrix() + nb * (nmat * dd.matrix());
  return symmetric_from_Q(q);
}

HermMatrix random_contraction(Rng& rng, Eigen::Index k) { return random_hermitian_spectrum(rng, k, -1.0, 1.0); }

HermMatrix random_fundamental_symmetry(Rng& rng, Eigen::Index k) {
  const Matrix u = random_unitary(rng, k);
  RealVector s(k);
  for (Eigen::Index i = 0; i < k; ++i) s(i) = rng.bernoulli(0.5) ? 1.0 : -1.0;
  return HermMatrix(Matrix(u * s.cast<cplx>().asDiagonal() * u.adjoint()));
}

}  // namespace relcalc
