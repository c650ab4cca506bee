#include "relcalc/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relcalc {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) throw Error(ErrorCode::DimensionMismatch, what);
}

void require_psd(const HermMatrix& m, const Tolerance& tol, const char* what) {
  if (m.dim() == 0) return;
  const double floor = -tol.psd_slack * (1.0 + m.norm());
  const double lo = min_eigenvalue(m);
  if (lo < floor) {
    std::ostringstream os;
    os << what << ": eigenvalue " << lo << " below " << floor;
    throw Error(ErrorCode::NotPSD, os.str());
  }
}

// Eigenvalues below the rank cutoff of the pair are set to zero. In the Cayley
// picture these are exact mul/ker directions carrying rounding noise, and the
// mean recursions would otherwise amplify that noise geometrically.
HermMatrix snapped(const HermMatrix& m, const Tolerance& tol, double reference) {
  const HermMatrix root = psd_sqrt(m, tol, reference);
  return HermMatrix(Matrix(root.matrix() * root.matrix()));
}

}  // namespace

HermMatrix parallel_sum_psd(const HermMatrix& a, const HermMatrix& b, const Tolerance& tol) {
  require_same_dim(a.dim(), b.dim(), "parallel_sum_psd");
  require_psd(a, tol, "parallel_sum_psd lhs");
  require_psd(b, tol, "parallel_sum_psd rhs");
  const double reference = std::max(a.norm(), b.norm());
  const HermMatrix ac = snapped(a, tol, reference);
  const HermMatrix s = ac + snapped(b, tol, reference);
  const HermMatrix root = psd_sqrt(s, tol, reference);
  const HermMatrix inv_root = pinv_sqrt(s, tol, reference);
  // K is the Douglas factor: A^{1/2} = (A + B)^{1/2} K^{1/2} on ran (A + B).
  const Matrix k = inv_root.matrix() * ac.matrix() * inv_root.matrix();
  const Matrix middle = k - k * k;
  return HermMatrix(Matrix(root.matrix() * middle * root.matrix()));
}

HermMatrix harmonic_psd(const HermMatrix& a, const HermMatrix& b, const Tolerance& tol) {
  return parallel_sum_psd(a, b, tol) * 2.0;
}

NonnegRelation harmonic(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol) {
  require_same_dim(a.n(), b.n(), "harmonic");
  const HermMatrix id = HermMatrix::identity(a.n());
  const HermMatrix h = harmonic_psd(id - a.cayley(), id - b.cayley(), tol);
  return NonnegRelation(id - h, tol);
}

NonnegRelation arithmetic(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol) {
  require_same_dim(a.n(), b.n(), "arithmetic");
  const HermMatrix id = HermMatrix::identity(a.n());
  const HermMatrix h = harmonic_psd(id + a.cayley(), id + b.cayley(), tol);
  return NonnegRelation(h - id, tol);
}

NonnegRelation c0_mean(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol) {
  require_same_dim(a.n(), b.n(), "c0_mean");
  return NonnegRelation((a.cayley() + b.cayley()) * 0.5, tol);
}

NonnegRelation parallel_sum_rel(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol) {
  return scale(harmonic(a, b, tol), 0.5, tol);
}

NonnegRelation form_sum(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol) {
  return scale(arithmetic(a, b, tol), 2.0, tol);
}

NonnegRelation form_sum_oracle(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol) {
  require_same_dim(a.n(), b.n(), "form_sum_oracle");
  const Subspace d = meet(form_domain(a, tol), form_domain(b, tol), tol);
  if (d.dim() == 0) return NonnegRelation::purely_multivalued(a.n());
  const HermMatrix q = form_gram(a, d, tol) + form_gram(b, d, tol);
  return from_form(d, q, tol);
}

HermMatrix geometric_mean_pd(const HermMatrix& a, const HermMatrix& b, const Tolerance& tol) {
  require_same_dim(a.dim(), b.dim(), "geometric_mean_pd");
  for (const HermMatrix* m : {&a, &b}) {
    if (m->dim() > 0 && min_eigenvalue(*m) <= tol.psd_slack * (1.0 + m->norm())) {
      throw Error(ErrorCode::NotPD, "geometric_mean_pd requires positive definite operands");
    }
  }
  const HermMatrix ah = psd_sqrt(a, tol);
  const HermMatrix aih = pinv_sqrt(a, tol);
  const HermMatrix inner(Matrix(aih.matrix() * b.matrix() * aih.matrix()));
  const HermMatrix mid = psd_sqrt(inner, tol);
  return HermMatrix(Matrix(ah.matrix() * mid.matrix() * ah.matrix()));
}

MeanPair ah_iterate(const NonnegRelation& a, const NonnegRelation& b, const AhOptions& opts, const Tolerance& tol) {
  require_same_dim(a.n(), b.n(), "ah_iterate");
  MeanPair out;
  NonnegRelation an = a;
  NonnegRelation bn = b;
  out.trace.push_back({0, resolvent_distance(an, bn), 0.0, 0.0, true});
  if (out.trace.back().gap_ab <= opts.step_tol) {
    out.converged = true;
  }
  for (int step = 1; step <= opts.max_iter && !out.converged; ++step) {
    NonnegRelation next_a = arithmetic(an, bn, tol);
    NonnegRelation next_b = harmonic(an, bn, tol);
    AhStep row;
    row.step = step;
    row.gap_ab = resolvent_distance(next_a, next_b);
    row.move_a = resolvent_distance(next_a, an);
    row.move_b = resolvent_distance(next_b, bn);
    // B_n ≤ A_n from the first step on; the sequences are monotone from the
    // second step on (the starting pair is arbitrary).
    row.monotone_ok = rel_leq(next_b, next_a, tol);
    if (step >= 2) {
      row.monotone_ok = row.monotone_ok && rel_leq(next_a, an, tol) && rel_leq(bn, next_b, tol);
    }
    out.trace.push_back(row);
    if (!row.monotone_ok) {
      std::ostringstream os;
      os << "order certificate failed at step " << step << " (gap " << row.gap_ab << ")";
      throw Error(ErrorCode::NonMonotoneStep, os.str());
    }
    an = std::move(next_a);
    bn = std::move(next_b);
    if (row.move_a <= opts.step_tol && row.move_b <= opts.step_tol) out.converged = true;
  }
  out.coincide = resolvent_distance(an, bn) <= tol.limit;
  out.upper = std::move(an);
  out.lower = std::move(bn);
  return out;
}

namespace {

MeanPair predicted(NonnegRelation upper, NonnegRelation lower, const Tolerance& tol) {
  MeanPair p;
  p.coincide = resolvent_distance(upper, lower) <= tol.limit;
  p.converged = true;
  p.upper = std::move(upper);
  p.lower = std::move(lower);
  return p;
}

}  // namespace

AhClosedForms ah_closed_forms(const NonnegRelation& a, const AhOptions& opts, const Tolerance& tol) {
  const Eigen::Index n = a.n();
  const HermMatrix id = HermMatrix::identity(n);
  const HermMatrix p_mul = projector(mul_part(a, tol));
  const HermMatrix p_ker = projector(ker_part(a, tol));

  AhClosedForms out;
  // A′: identity Cayley transform (zero operator) on cdom A, −I on mul A.
  out.zero_first = predicted(NonnegRelation(id - p_mul * 2.0, tol), NonnegRelation::zero_operator(n), tol);
  // A″: zero on ker A, purely multivalued on its orthogonal complement.
  out.multivalued_first =
      predicted(NonnegRelation::purely_multivalued(n), NonnegRelation(p_ker * 2.0 - id, tol), tol);
  // P_{M⊥} has Cayley transform P_M; its inverse has −P_M.
  const HermMatrix p_m = p_mul + p_ker;
  out.with_inverse = predicted(NonnegRelation(-p_m, tol), NonnegRelation(p_m, tol), tol);

  // Along (A, A^{-1}) the iterates satisfy 𝔆(A_n) = −T^{2^n}, 𝔆(B_n) = T^{2^n}.
  NonnegRelation an = a;
  NonnegRelation bn = rel_inverse(a);
  // T^{2^n} is formed spectrally: eigenvalues within the rank cutoff of ±1
  // are exact mul/ker directions and are snapped, as the means do.
  const double snap = 1.0 - 2.0 * tol.rank_rel;
  auto cayley_power = [&](double exponent) {
    return spectral_map(a.cayley(), [exponent, snap](double t) {
      if (std::abs(t) >= snap) t = t > 0.0 ? 1.0 : -1.0;
      return std::pow(t, exponent);
    });
  };
  HermMatrix power = a.cayley();
  double exponent = 1.0;
  double worst = 0.0;
  int steps = 0;
  for (int step = 1; step <= opts.max_iter; ++step) {
    NonnegRelation next_a = arithmetic(an, bn, tol);
    NonnegRelation next_b = harmonic(an, bn, tol);
    exponent *= 2.0;
    const HermMatrix next_power = cayley_power(exponent);
    worst = std::max(worst, (next_b.cayley() - next_power).norm());
    worst = std::max(worst, (next_a.cayley() + next_power).norm());
    const double move = (next_power - power).norm();
    an = std::move(next_a);
    bn = std::move(next_b);
    power = next_power;
    steps = step;
    if (move <= opts.step_tol) break;
  }
  out.cayley_power_residual = worst;
  out.cayley_power_steps = steps;
  return out;
}

RegularizedResult regularized_parallel_oracle(const NonnegRelation& a, const NonnegRelation& b,
                                              const std::vector<int>& eps_schedule, const Tolerance& tol) {
  require_same_dim(a.n(), b.n(), "regularized_parallel_oracle");
  if (eps_schedule.empty()) throw Error(ErrorCode::InvalidArgument, "empty ε schedule");
  RegularizedResult out;
  const HermMatrix id = HermMatrix::identity(a.n());
  bool have_prev = false;
  for (int k : eps_schedule) {
    const double eps = std::pow(10.0, -k);
    // (A + ε)^{-1} is the resolvent at −ε; the sum is a bounded PSD operator M
    // and H_ε = M^{-1} has Cayley transform −𝔆(M).
    const Matrix ra = resolvent(a, cplx(-eps, 0.0), tol);
    const Matrix rb = resolvent(b, cplx(-eps, 0.0), tol);
    const HermMatrix m(Matrix(ra + rb));
    const NonnegRelation h = rel_inverse(NonnegRelation::from_operator(m, tol));
    out.eps.push_back(eps);
    if (have_prev) {
      out.gap_to_previous.push_back(resolvent_distance(h, out.relation));
      // H_ε decreases as ε ↓ 0. Forming M = R_A + R_B costs ε_mach·‖M‖ in
      // absolute accuracy, so the certificate's slack grows with ‖M‖ ~ 1/ε.
      Tolerance cert = tol;
      cert.psd_slack = std::max(tol.psd_slack, 16.0 * std::numeric_limits<double>::epsilon() * m.norm());
      const bool ok = rel_leq(h, out.relation, cert);
      out.step_monotone.push_back(ok);
      if (!ok) out.monotone = false;
    } else {
      out.gap_to_previous.push_back(0.0);
      out.step_monotone.push_back(true);
    }
    out.relation = h;
    have_prev = true;
  }
  return out;
}

}  // namespace relcalc
