#include "relcalc/shorting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "relcalc/means.hpp"

namespace relcalc {

namespace {

void require_ambient(const Subspace& l, Eigen::Index n, const char* what) {
  if (l.ambient() != n) throw Error(ErrorCode::DimensionMismatch, what);
}

}  // namespace

namespace {

// `reference` anchors the rank cutoff: the Cayley-side callers know their
// operand lives on the scale 2 even when it happens to be pure noise.
HermMatrix short_psd_scaled(const HermMatrix& s, const Subspace& l, const Tolerance& tol, double reference) {
  require_ambient(l, s.dim(), "short_psd");
  const HermMatrix root = psd_sqrt(s, tol, reference);
  const Subspace lp = orth_complement(l);
  if (lp.dim() == 0) return HermMatrix(Matrix(root.matrix() * root.matrix()));
  // M = ker(P_{L⊥} S^{1/2}); the cutoff is anchored at ‖S^{1/2}‖ so that a
  // block that is pure rounding noise is not mistaken for rank.
  const Subspace m = kernel(Matrix(lp.basis().adjoint() * root.matrix()), tol, std::max(root.norm(), std::sqrt(reference)));
  const Matrix rb = root.matrix() * m.basis();
  return HermMatrix(Matrix(rb * rb.adjoint()));
}

}  // namespace

HermMatrix short_psd(const HermMatrix& s, const Subspace& l, const Tolerance& tol) {
  return short_psd_scaled(s, l, tol, 0.0);
}

HermMatrix short_psd_schur(const HermMatrix& s, const Subspace& l, const Tolerance& tol) {
  require_ambient(l, s.dim(), "short_psd_schur");
  const Subspace lp = orth_complement(l);
  const Matrix& sm = s.matrix();
  const Matrix& lb = l.basis();
  const Matrix& pb = lp.basis();
  const HermMatrix s22(Matrix(lb.adjoint() * sm * lb));
  if (lp.dim() == 0) return s;
  if (l.dim() == 0) return HermMatrix::zero(s.dim());
  const HermMatrix s11(Matrix(pb.adjoint() * sm * pb));
  const Matrix s12 = pb.adjoint() * sm * lb;
  const Matrix x = pinv_sqrt(s11, tol, s.norm()).matrix() * s12;
  const HermMatrix block = s22 - HermMatrix(Matrix(x.adjoint() * x));
  return HermMatrix(Matrix(lb * block.matrix() * lb.adjoint()));
}

NonnegRelation short_rel(const NonnegRelation& a, const Subspace& l, const Tolerance& tol) {
  const HermMatrix id = HermMatrix::identity(a.n());
  return NonnegRelation(id - short_psd_scaled(id - a.cayley(), l, tol, 2.0), tol);
}

NonnegRelation antishort(const NonnegRelation& a, const Subspace& l, const Tolerance& tol) {
  const HermMatrix id = HermMatrix::identity(a.n());
  return NonnegRelation(id - short_psd_scaled(id + a.cayley(), l, tol, 2.0), tol);
}

ShortDiagnostics short_parts(const NonnegRelation& a, const Subspace& l, const Tolerance& tol) {
  require_ambient(l, a.n(), "short_parts");
  const NonnegRelation as = short_rel(a, l, tol);
  ShortDiagnostics d;
  d.sqrt_range_short = sqrt_range(as, tol);
  d.sqrt_range_meet = meet(sqrt_range(a, tol), l, tol);
  d.mul_short = mul_part(as, tol);
  d.mul_meet = meet(mul_part(a, tol), l, tol);

  // A_L is reduced by L (it is zero on L⊥), so its part in L is well defined.
  const Subspace& w = d.sqrt_range_meet;
  if (w.dim() > 0) {
    const NonnegRelation part_inv = rel_inverse(restrict_reducing(as, l, tol));
    const Subspace w_local(l.dim(), Matrix(l.basis().adjoint() * w.basis()), 1e-6);
    const HermMatrix lhs = form_gram(part_inv, w_local, tol);
    const HermMatrix rhs = form_gram(rel_inverse(a), w, tol);
    const Matrix diff = lhs.matrix() - rhs.matrix();
    d.sesquilinear_residual = diff.cwiseAbs().maxCoeff() / (1.0 + rhs.matrix().cwiseAbs().maxCoeff());
  }
  return d;
}

NonnegRelation compress(const NonnegRelation& a, const Subspace& l, const Tolerance& tol) {
  require_ambient(l, a.n(), "compress");
  const Eigen::Index n = a.n();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix f = id + a.cayley().matrix();
  const Matrix g = id - a.cayley().matrix();
  const Subspace lp = orth_complement(l);
  // Graph elements (f, f′) of A with f ∈ L, then f′ projected onto L.
  const Subspace coeffs = kernel(Matrix(lp.basis().adjoint() * f), tol, 2.0);
  const Matrix top = l.basis().adjoint() * f * coeffs.basis();
  const Matrix bottom = l.basis().adjoint() * g * coeffs.basis();
  if (l.dim() == 0) return NonnegRelation(HermMatrix::zero(0), tol);
  if (coeffs.dim() == 0) return NonnegRelation::purely_multivalued(l.dim());
  return cayley(LinearRelation::from_generators(top, bottom, tol), tol);
}

namespace {

void require_negative(double lambda) {
  if (!(lambda < 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "Weyl family is sampled at finite λ < 0 only");
  }
}

HermMatrix compressed_resolvent(const NonnegRelation& a, const Subspace& l, double lambda, const Tolerance& tol) {
  require_ambient(l, a.n(), "weyl");
  require_negative(lambda);
  const Matrix r = resolvent(a, cplx(lambda, 0.0), tol);
  return HermMatrix(Matrix(l.basis().adjoint() * r * l.basis()));
}

}  // namespace

WeylSample weyl_eval(const NonnegRelation& a, const Subspace& l, double lambda, const Tolerance& tol) {
  const HermMatrix c = compressed_resolvent(a, l, lambda, tol);
  const Eigh e = eigh(c);
  // (A − λ)^{-1} ≤ 1/|λ|, so that is the natural scale for a rank decision.
  const double scale = 1.0 / std::abs(lambda);
  if (e.values.size() > 0 && e.values(0) <= tol.rank_rel * scale) {
    std::ostringstream os;
    os << "compressed resolvent has eigenvalue " << e.values(0) << " at λ = " << lambda;
    throw Error(ErrorCode::SingularCompression, os.str());
  }
  RealVector m(e.values.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = -1.0 / e.values(i) - lambda;
  return {lambda, HermMatrix(Matrix(e.vectors * m.asDiagonal() * e.vectors.adjoint()))};
}

NonnegRelation weyl_relation(const NonnegRelation& a, const Subspace& l, double lambda, const Tolerance& tol) {
  if (lambda <= -1.0) {
    require_ambient(l, a.n(), "weyl");
    require_negative(lambda);
    // For large |λ| write ε = 1/|λ| and E = P_L A(I + εA)^{-1} P_L (bounded,
    // computed spectrally from T). Then −M(λ) = E(I − εE)^{-1}, which avoids
    // the cancellation in C^{-1} − |λ|.
    const double eps = -1.0 / lambda;
    const HermMatrix f = spectral_map(a.cayley(), [eps](double t) {
      return (1.0 - t) / ((1.0 + t) + eps * (1.0 - t));
    });
    const HermMatrix e(Matrix(l.basis().adjoint() * f.matrix() * l.basis()));
    const HermMatrix t = spectral_map(e, [eps](double x) {
      x = std::clamp(x, 0.0, 1.0 / eps);
      return (1.0 - (1.0 + eps) * x) / (1.0 + (1.0 - eps) * x);
    });
    return NonnegRelation(t, tol);
  }
  const HermMatrix c = compressed_resolvent(a, l, lambda, tol);
  // −M(λ) = C^{-1} + λ has graph {(Cg, g + λCg)}; its Cayley transform is a
  // function of C and stays bounded when C is singular.
  const HermMatrix t = spectral_map(c, [lambda](double x) {
    x = std::max(x, 0.0);
    return ((1.0 - lambda) * x - 1.0) / (1.0 + (1.0 + lambda) * x);
  });
  return NonnegRelation(t, tol);
}

std::vector<int> ladder(int k_max) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "ladder needs k_max ≥ 1");
  std::vector<int> ks;
  for (int k = 1; k <= k_max; ++k) ks.push_back(k);
  return ks;
}

namespace {

// Shared driver: `point(k)` is the schedule value, `make(point)` the iterate,
// `ordered(prev, next)` the monotonicity certificate.
template <typename Point, typename Make, typename Ordered>
LimitResult run_limit(const std::vector<int>& schedule, Point point, Make make, Ordered ordered,
                      const Tolerance& tol) {
  if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "empty schedule");
  LimitResult out;
  bool have_prev = false;
  NonnegRelation prev;
  for (int k : schedule) {
    const double p = point(k);
    NonnegRelation cur = make(p);
    TraceRow row;
    row.k = k;
    row.point = p;
    if (have_prev) {
      row.resolvent_gap = resolvent_distance(cur, prev);
      row.monotone_ok = ordered(prev, cur);
    }
    out.trace.push_back(row);
    prev = std::move(cur);
    have_prev = true;
  }
  // Cauchy criterion with a geometric tail: when consecutive gaps contract by
  // r < 1 the remaining distance to the limit is at most gap·r/(1 − r).
  if (out.trace.size() >= 2) {
    const double last = out.trace.back().resolvent_gap;
    out.tail_estimate = last;
    if (out.trace.size() >= 3) {
      const double before = out.trace[out.trace.size() - 2].resolvent_gap;
      if (before > 0.0 && last < before) {
        const double r = last / before;
        out.tail_estimate = last * r / (1.0 - r);
      }
    }
    out.converged = out.tail_estimate <= tol.limit;
  }
  out.relation = prev;
  return out;
}

}  // namespace

WeylLimits weyl_limits(const NonnegRelation& a, const Subspace& l, const Tolerance& tol,
                       const std::vector<int>& schedule) {
  WeylLimits out;
  auto make = [&](double lambda) { return weyl_relation(a, l, lambda, tol); };
  // M is non-decreasing in λ, so −M decreases along λ ↑ 0 and increases along λ ↓ −∞.
  // Near λ = 0 the compressed resolvent has norm up to 1/|λ|, which bounds the
  // absolute rounding of −M; the order certificate allows for it.
  double lambda_now = 0.0;
  auto make_tracked = [&](double lambda) {
    lambda_now = lambda;
    return make(lambda);
  };
  out.at_zero = run_limit(
      schedule, [](int k) { return -std::pow(10.0, -k); }, make_tracked,
      [&](const NonnegRelation& prev, const NonnegRelation& cur) {
        Tolerance cert = tol;
        cert.psd_slack =
            std::max(tol.psd_slack, 16.0 * std::numeric_limits<double>::epsilon() / std::abs(lambda_now));
        return rel_leq(cur, prev, cert);
      },
      tol);
  out.at_infinity = run_limit(
      schedule, [](int k) { return -std::pow(10.0, k); }, make,
      [&](const NonnegRelation& prev, const NonnegRelation& cur) { return rel_leq(prev, cur, tol); }, tol);
  for (LimitResult* r : {&out.at_zero, &out.at_infinity}) {
    if (r->converged && is_operator(r->relation, tol)) r->matrix = -operator_matrix(r->relation, tol);
  }
  return out;
}

NonnegRelation scaled_projection(const Subspace& l, double t, const Tolerance& tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "scaled_projection needs finite t ≥ 0");
  const Eigen::Index n = l.ambient();
  const HermMatrix p = projector(l);
  const HermMatrix id = HermMatrix::identity(n);
  return NonnegRelation(p * ((1.0 - t) / (1.0 + t)) + (id - p), tol);
}

LimitResult short_by_parallel_limit(const NonnegRelation& a, const Subspace& l, const std::vector<int>& schedule,
                                    const Tolerance& tol) {
  require_ambient(l, a.n(), "short_by_parallel_limit");
  LimitResult out = run_limit(
      schedule, [](int k) { return std::pow(10.0, k); },
      [&](double t) { return parallel_sum_rel(a, scaled_projection(l, t, tol), tol); },
      [&](const NonnegRelation& prev, const NonnegRelation& cur) { return rel_leq(prev, cur, tol); }, tol);
  if (out.converged && is_operator(out.relation, tol)) out.matrix = operator_matrix(out.relation, tol);
  return out;
}

}  // namespace relcalc
