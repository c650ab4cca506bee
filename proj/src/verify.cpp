#include "relcalc/verify.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "relcalc/random.hpp"
#include "relcalc/shorting.hpp"

namespace relcalc {

namespace {

// ---------------------------------------------------------------------------
// Trial bookkeeping

class Check {
 public:
  /// Records a residual and fails the trial when it exceeds `bound`.
  void within(double residual, double bound, const char* what) {
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    worst_ = std::max(worst_, residual);
    if (!(residual <= bound)) {
      std::ostringstream os;
      os << what << ": residual " << residual << " > " << bound;
      fail(os.str());
    }
  }

  void holds(bool condition, const char* what) {
    if (!condition) fail(what);
  }

  bool ok() const { return ok_; }
  double worst() const { return worst_; }
  const std::string& note() const { return note_; }

  void fail(const std::string& what) {
    if (ok_) note_ = what;
    ok_ = false;
  }

 private:
  bool ok_ = true;
  double worst_ = 0.0;
  std::string note_;
};

struct Ctx {
  const RunConfig& cfg;
  Rng& rng;
  Check& check;

  const Tolerance& tol() const { return cfg.tol; }
  Eigen::Index n() const { return cfg.n; }
  /// Dimension for properties that need a proper nonzero subspace.
  Eigen::Index n2() const { return std::max<Eigen::Index>(cfg.n, 2); }
  Subspace proper_subspace(Eigen::Index ambient) { return random_subspace(rng, ambient, rng.integer(1, static_cast<int>(ambient) - 1)); }
  NonnegRelation nonneg(Eigen::Index dim) { return random_nonneg(rng, dim); }
  double gap_tol() const { return cfg.tol.subspace_gap(); }
};

using TrialFn = std::function<void(Ctx&)>;

struct Property {
  std::string id;
  std::string description;
  TrialFn run;
};

double hdist(const HermMatrix& a, const HermMatrix& b) { return (a - b).norm(); }

/// Subspace equality as a residual: gap, or +∞ on a dimension mismatch.
double subspace_residual(const Subspace& u, const Subspace& v) {
  if (u.dim() != v.dim()) return std::numeric_limits<double>::infinity();
  return subspace_gap(u, v);
}

/// Residual of u ⊆ v.
double inclusion_residual(const Subspace& u, const Subspace& v) {
  if (u.dim() == 0) return 0.0;
  return opnorm(Matrix(u.basis() - v.basis() * (v.basis().adjoint() * u.basis())));
}

/// Amount by which a ≤ b (T_b ≤ T_a) fails: the most negative eigenvalue of T_a − T_b.
double order_violation(const NonnegRelation& a, const NonnegRelation& b) {
  return std::max(0.0, -min_eigenvalue(a.cayley() - b.cayley()));
}

/// Cayley-order margin by which a < b holds strictly (largest eigenvalue of T_a − T_b).
double strict_margin(const NonnegRelation& a, const NonnegRelation& b) {
  return -min_eigenvalue(b.cayley() - a.cayley());
}

void leq(Ctx& c, const NonnegRelation& a, const NonnegRelation& b, const char* what) {
  c.check.within(order_violation(a, b), c.tol().psd_slack * 4.0, what);
  c.check.holds(rel_leq(a, b, c.tol()), what);
}

// ---------------------------------------------------------------------------
// numkit

void numkit_pinv(Ctx& c) {
  const Eigen::Index n = c.n();
  const Eigen::Index rank = c.rng.integer(1, static_cast<int>(n));
  const Matrix g = random_gaussian(c.rng, n, rank);
  RealVector s(rank);
  for (Eigen::Index i = 0; i < rank; ++i) s(i) = c.rng.uniform(0.1, 2.0) * (c.rng.bernoulli(0.5) ? 1.0 : -1.0);
  const HermMatrix m(Matrix(g * s.cast<cplx>().asDiagonal() * g.adjoint()));
  const HermMatrix p = pinv(m, c.tol());
  const Matrix& a = m.matrix();
  const Matrix& x = p.matrix();
  const double scale = 1.0 + m.norm() * p.norm();
  c.check.within(opnorm(Matrix(a * x * a - a)) / (1.0 + m.norm() * scale), 1e-8, "A X A = A");
  c.check.within(opnorm(Matrix(x * a * x - x)) / (1.0 + p.norm() * scale), 1e-8, "X A X = X");
  c.check.within(opnorm(Matrix(a * x - (a * x).adjoint())) / scale, 1e-8, "(A X)* = A X");
  c.check.within(opnorm(Matrix(x * a - (x * a).adjoint())) / scale, 1e-8, "(X A)* = X A");
}

void numkit_sqrt(Ctx& c) {
  const double cond = std::pow(10.0, c.rng.uniform(0.0, 8.0));
  const HermMatrix s = random_pd(c.rng, c.n(), cond);
  const HermMatrix r = psd_sqrt(s, c.tol());
  c.check.within(opnorm(Matrix(r.matrix() * r.matrix() - s.matrix())) / s.norm(), 1e-8, "sqrt² = S");
  c.check.holds(min_eigenvalue(r) >= 0.0, "sqrt is nonnegative");
}

void numkit_meetjoin(Ctx& c) {
  const Eigen::Index n = c.n2();
  // Prescribe a common part so the intersection is generically nontrivial.
  const Matrix u = random_unitary(c.rng, n);
  const int common = c.rng.integer(0, static_cast<int>(n) / 2);
  const int extra_u = c.rng.integer(0, static_cast<int>(n) - common);
  const int extra_v = c.rng.integer(0, static_cast<int>(n) - common);
  Matrix bu(n, common + extra_u), bv(n, common + extra_v);
  bu << u.leftCols(common), random_gaussian(c.rng, n, extra_u);
  bv << u.leftCols(common), random_gaussian(c.rng, n, extra_v);
  const Subspace su = Subspace::span(bu, c.tol());
  const Subspace sv = Subspace::span(bv, c.tol());
  const Subspace m = meet(su, sv, c.tol());
  const Subspace j = join(su, sv, c.tol());
  c.check.holds(m.dim() + j.dim() == su.dim() + sv.dim(), "dim(U∧V) + dim(U∨V) = dim U + dim V");
  c.check.within(inclusion_residual(m, su), c.gap_tol(), "U∧V ⊆ U");
  c.check.within(inclusion_residual(m, sv), c.gap_tol(), "U∧V ⊆ V");
  c.check.within(inclusion_residual(su, j), c.gap_tol(), "U ⊆ U∨V");
  c.check.within(inclusion_residual(sv, j), c.gap_tol(), "V ⊆ U∨V");
}

void numkit_projrange(Ctx& c) {
  const Eigen::Index n = c.n();
  const int cols = c.rng.integer(1, static_cast<int>(n) + 2);
  const int rank = c.rng.integer(0, std::min<int>(cols, static_cast<int>(n)));
  const Matrix m = random_gaussian(c.rng, n, rank) * random_gaussian(c.rng, rank, cols);
  const HermMatrix p = projector(range(m, c.tol()));
  c.check.within(opnorm(Matrix(p.matrix() * m - m)) / (1.0 + opnorm(m)), 1e-10, "P_ran(M) M = M");
}

void numkit_loewner(Ctx& c) {
  const Eigen::Index n = c.n();
  const HermMatrix a = random_hermitian_spectrum(c.rng, n, -1.0, 1.0);
  const HermMatrix b = a + random_psd(c.rng, n, c.rng.integer(1, static_cast<int>(n)));
  const HermMatrix d = b + random_psd(c.rng, n, c.rng.integer(1, static_cast<int>(n)));
  const Tolerance& t = c.tol();
  c.check.holds(loewner_leq(a, a, t) && loewner_leq(b, b, t), "reflexive");
  c.check.holds(loewner_leq(a, b, t) && loewner_leq(b, d, t), "constructed chain");
  c.check.holds(loewner_leq(a, d, t), "transitive");
  c.check.holds(!loewner_leq(d, a, t), "strict chain is not reversed");
  // Antisymmetry: a perturbation below the slack compares both ways and is
  // then equal within tolerance.
  const HermMatrix near = a + HermMatrix::identity(n) * (t.psd_slack * 0.1);
  if (loewner_leq(a, near, t) && loewner_leq(near, a, t)) {
    c.check.within(hdist(a, near), t.psd_slack * (2.0 + 2.0 * a.norm()), "antisymmetric");
  } else {
    c.check.fail("antisymmetry sample not comparable both ways");
  }
}

// ---------------------------------------------------------------------------
// relation

void relation_cayley_roundtrip(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n());
  const LinearRelation g = uncayley(a);
  c.check.within(hdist(cayley(g, c.tol()).cayley(), a.cayley()), 1e-9, "cayley∘uncayley");
  const LinearRelation back = uncayley(cayley(g, c.tol()));
  c.check.within(relation_gap(back, g), 1e-9, "uncayley∘cayley");
}

void relation_adjoint(Ctx& c) {
  const Eigen::Index n = c.n();
  // One selfadjoint and one generic relation per trial.
  const LinearRelation sa = uncayley(c.nonneg(n));
  const int dim = c.rng.integer(1, 2 * static_cast<int>(n) - 1);
  const Matrix gen = random_gaussian(c.rng, 2 * n, dim);
  const LinearRelation generic = LinearRelation::from_generators(gen.topRows(n), gen.bottomRows(n), c.tol());
  for (const LinearRelation* r : {&sa, &generic}) {
    c.check.within(relation_gap(adjoint(adjoint(*r)), *r), 1e-9, "adjoint is involutive");
    const bool by_gap = r->graph().dim() == adjoint(*r).graph().dim() &&
                        relation_gap(*r, adjoint(*r)) <= c.gap_tol();
    c.check.holds(is_selfadjoint(*r, c.tol()) == by_gap, "is_selfadjoint ⟺ gap(R, R*) ≤ tol");
  }
  c.check.holds(is_selfadjoint(sa, c.tol()), "uncayley yields a selfadjoint relation");
}

void relation_inverse(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n());
  c.check.within(relation_gap(uncayley(rel_inverse(a)), inverse(uncayley(a))), 1e-9, "rel_inverse ↔ graph inverse");
}

void relation_parts(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n());
  const RelationParts p = parts(uncayley(a), c.tol());
  const HermMatrix id = HermMatrix::identity(a.n());
  const Tolerance& t = c.tol();
  c.check.within(subspace_residual(p.mul, kernel((id + a.cayley()).matrix(), t, 2.0)), c.gap_tol(), "mul A = ker(I + T)");
  c.check.within(subspace_residual(p.ker, kernel((id - a.cayley()).matrix(), t, 2.0)), c.gap_tol(), "ker A = ker(I − T)");
  c.check.within(subspace_residual(p.dom, range((id + a.cayley()).matrix(), t, 2.0)), c.gap_tol(), "cdom A = ran(I + T)");
  c.check.within(subspace_residual(p.ran, range((id - a.cayley()).matrix(), t, 2.0)), c.gap_tol(), "cran A = ran(I − T)");
  c.check.within(subspace_residual(p.mul, mul_part(a, t)), c.gap_tol(), "mul_part");
  c.check.within(subspace_residual(p.ker, ker_part(a, t)), c.gap_tol(), "ker_part");
}

void relation_ranhalf(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n());
  const Subspace sr = sqrt_range(a, c.tol());
  const Subspace outside = orth_complement(sr);
  if (sr.dim() > 0) {
    const Vector f = sr.basis() * random_gaussian(c.rng, sr.dim(), 1);
    const double target = form_eval(rel_inverse(a), f, f, c.tol()).real();
    double prev = -std::numeric_limits<double>::infinity();
    double last_xq = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= c.cfg.k_max; ++k) {
      const double x = std::pow(10.0, -k);
      const double q = f.dot(resolvent(a, cplx(-x, 0.0), c.tol()) * f).real();
      // ‖(A + x)^{-1}‖ ≤ 1/x bounds the rounding of the quadratic form.
      const double slack = 1e-12 * std::abs(q) + 16.0 * std::numeric_limits<double>::epsilon() * f.squaredNorm() / x;
      c.check.holds(q >= prev - slack, "((A + x)^{-1} f, f) increases as x ↓ 0");
      prev = q;
      last_xq = x * q;
    }
    c.check.within(std::abs(prev - target) / (1.0 + target), c.tol().limit, "limit equals A^{-1}[f]");
    c.check.within(last_xq, c.tol().limit * (1.0 + target), "x·((A + x)^{-1} f, f) → 0");
  }
  if (outside.dim() > 0) {
    Vector f = outside.basis() * random_gaussian(c.rng, outside.dim(), 1);
    if (sr.dim() > 0) f += sr.basis() * random_gaussian(c.rng, sr.dim(), 1);
    f.normalize();
    const double x = std::pow(10.0, -c.cfg.k_max);
    const double q = f.dot(resolvent(a, cplx(-x, 0.0), c.tol()) * f).real();
    c.check.holds(q > 1.0 / c.tol().limit, "((A + x)^{-1} f, f) diverges off ran A^{1/2}");
  }
}

void relation_order(Ctx& c) {
  const Eigen::Index n = c.n();
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(n);
  const NonnegRelation b = form_sum(a, c.nonneg(n), t);
  const NonnegRelation d = form_sum(b, c.nonneg(n), t);
  c.check.holds(rel_leq(a, a, t), "reflexive");
  leq(c, a, b, "A ≤ A ∔ X");
  leq(c, b, d, "B ≤ B ∔ Y");
  leq(c, a, d, "transitive");
  if (rel_leq(a, b, t) && rel_leq(b, a, t)) {
    c.check.within(resolvent_distance(a, b), c.gap_tol(), "antisymmetric");
  }
  leq(c, rel_inverse(b), rel_inverse(a), "A ≤ B ⇒ B^{-1} ≤ A^{-1}");
  const NonnegRelation x = c.nonneg(n);
  const NonnegRelation y = c.nonneg(n);
  c.check.holds(rel_leq(x, y, t) == rel_leq(rel_inverse(y), rel_inverse(x), t), "A ≤ B ⟺ B^{-1} ≤ A^{-1}");
}

void relation_from_form(Ctx& c) {
  const Eigen::Index n = c.n();
  const Eigen::Index k = c.rng.integer(0, static_cast<int>(n));
  const Subspace d = random_subspace(c.rng, n, k);
  const HermMatrix q = k > 0 ? random_psd(c.rng, k, c.rng.integer(0, static_cast<int>(k))) : HermMatrix::zero(0);
  const NonnegRelation a = from_form(d, q, c.tol());
  c.check.within(subspace_residual(form_domain(a, c.tol()), d), c.gap_tol(), "form domain");
  if (k > 0) c.check.within(hdist(form_gram(a, d, c.tol()), q) / (1.0 + q.norm()), 1e-9, "form values");
  // And back: the form of a random relation reproduces it.
  const NonnegRelation b = c.nonneg(n);
  const Subspace db = form_domain(b, c.tol());
  const NonnegRelation b2 = db.dim() > 0 ? from_form(db, form_gram(b, db, c.tol()), c.tol())
                                         : NonnegRelation::purely_multivalued(n);
  c.check.within(resolvent_distance(b, b2), 1e-9, "from_form(form of A) = A");
}

// ---------------------------------------------------------------------------
// shorting

void shorting_maximality(Ctx& c) {
  const Eigen::Index n = c.n2();
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(n);
  const Subspace l = c.proper_subspace(n);
  const NonnegRelation as = short_rel(a, l, t);
  for (int member = 0; member < 50; ++member) {
    // Members of Ξ(A, L) built without the shorting formula: A : tP_L is ≤ A
    // with ran in L; a further parallel sum and a contraction keep both.
    const double scale_t = std::pow(10.0, c.rng.uniform(-3.0, 6.0));
    NonnegRelation m = parallel_sum_rel(a, scaled_projection(l, scale_t, t), t);
    if (c.rng.bernoulli(0.5)) m = parallel_sum_rel(m, embed_with_kernel(c.nonneg(l.dim()), l), t);
    m = scale(m, c.rng.uniform(0.05, 1.0), t);
    c.check.within(order_violation(m, as), t.psd_slack * 4.0, "member ≤ A_L");
    c.check.holds(rel_leq(m, as, t), "rel_leq(member, A_L)");
  }
}

void shorting_idempotent(Ctx& c) {
  const Eigen::Index n = c.n2();
  const NonnegRelation a = c.nonneg(n);
  const Subspace l = c.proper_subspace(n);
  const NonnegRelation as = short_rel(a, l, c.tol());
  c.check.within(resolvent_distance(short_rel(as, l, c.tol()), as), 1e-8, "(A_L)_L = A_L");
  leq(c, as, a, "A_L ≤ A");
}

void shorting_monotone(Ctx& c) {
  const Eigen::Index n = c.n2();
  const Tolerance& t = c.tol();
  const NonnegRelation b = c.nonneg(n);
  const NonnegRelation a = parallel_sum_rel(b, c.nonneg(n), t);  // a ≤ b
  const Subspace l = c.proper_subspace(n);
  leq(c, a, b, "A ≤ B");
  leq(c, short_rel(a, l, t), short_rel(b, l, t), "A_L ≤ B_L");
}

void shorting_convergence(Ctx& c) {
  const Eigen::Index n = c.n2();
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(n);
  const Subspace l = c.proper_subspace(n);
  const NonnegRelation target = short_rel(a, l, t);
  double prev = std::numeric_limits<double>::infinity();
  double last = prev;
  for (int j = 0; j <= 30; j += 2) {
    const double k = std::ldexp(1.0, j);
    const double d = resolvent_distance(short_rel(shift(a, 1.0 / k, t), l, t), target);
    c.check.holds(d <= prev + 1e-12, "resolvent distance to A_L decreases");
    prev = d;
    last = d;
  }
  c.check.within(last, t.limit, "(A + 1/k)_L → A_L");
}

void shorting_paths(Ctx& c) {
  const Eigen::Index n = c.n2();
  // Half the trials have rank ≤ n − 2, which makes S11 singular for most L.
  const int max_rank = c.rng.bernoulli(0.5) ? static_cast<int>(n) : std::max(1, static_cast<int>(n) - 2);
  const HermMatrix s = random_psd(c.rng, n, c.rng.integer(1, max_rank));
  const Subspace l = c.proper_subspace(n);
  const HermMatrix a = short_psd(s, l, c.tol());
  const HermMatrix b = short_psd_schur(s, l, c.tol());
  c.check.within(hdist(a, b) / (1.0 + s.norm()), 1e-8, "S^{1/2} P_M S^{1/2} = Schur complement");
}

void shorting_chain_rule(Ctx& c) {
  const Eigen::Index n = c.n2();
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(n);
  const NonnegRelation b = c.nonneg(n);
  const Subspace l = c.proper_subspace(n);
  const NonnegRelation al = short_rel(a, l, t);
  const NonnegRelation bl = short_rel(b, l, t);
  const NonnegRelation ref = short_rel(parallel_sum_rel(a, b, t), l, t);
  c.check.within(resolvent_distance(ref, parallel_sum_rel(al, b, t)), 1e-8, "(A:B)_L = A_L:B");
  c.check.within(resolvent_distance(ref, parallel_sum_rel(a, bl, t)), 1e-8, "(A:B)_L = A:B_L");
  c.check.within(resolvent_distance(ref, parallel_sum_rel(al, bl, t)), 1e-8, "(A:B)_L = A_L:B_L");
}

void shorting_weyl_inverse(Ctx& c) {
  const Eigen::Index n = c.n2();
  const NonnegRelation a = random_nonneg(c.rng, n, {0.0, 0.0});
  const Subspace l = c.proper_subspace(n);
  const double lambda = -std::pow(10.0, c.rng.uniform(-2.0, 2.0));
  const HermMatrix lhs = weyl_eval(rel_inverse(a), l, lambda, c.tol()).value;
  const HermMatrix rhs = pinv(weyl_eval(a, l, 1.0 / lambda, c.tol()).value, c.tol());
  c.check.within(hdist(lhs, rhs) / (1.0 + lhs.norm()), 1e-8, "M_{A^{-1}}(λ) = M_A(1/λ)^{-1}");
}

void shorting_contraction_split(Ctx& c) {
  const Eigen::Index n = c.n();
  // Spectrum in [0, 1] with exact endpoints mixed in.
  RealVector s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = c.rng.uniform();
    s(i) = u < 0.2 ? 0.0 : (u < 0.4 ? 1.0 : c.rng.uniform(0.01, 0.99));
  }
  const Matrix u = random_unitary(c.rng, n);
  const HermMatrix m(Matrix(u * s.cast<cplx>().asDiagonal() * u.adjoint()));
  const HermMatrix id = HermMatrix::identity(n);
  const HermMatrix mm = m - HermMatrix(Matrix(m.matrix() * m.matrix()));
  const Vector f = mm.matrix() * random_gaussian(c.rng, n, 1);  // f ∈ ran(M − M²)
  auto sq = [&](const HermMatrix& x) { return (pinv_sqrt(x, c.tol(), 1.0).matrix() * f).squaredNorm(); };
  const double lhs = sq(mm);
  const double rhs = sq(m) + sq(id - m);
  c.check.within(std::abs(lhs - rhs) / (1.0 + lhs), 1e-8, "‖(M−M²)^{[-1/2]}f‖² split");
}

void shorting_ranges(Ctx& c) {
  const Eigen::Index n = c.n2();
  const NonnegRelation a = c.nonneg(n);
  const Subspace l = c.proper_subspace(n);
  const ShortDiagnostics d = short_parts(a, l, c.tol());
  c.check.within(subspace_residual(d.sqrt_range_short, d.sqrt_range_meet), c.gap_tol(),
                 "ran (A_L)^{1/2} = ran A^{1/2} ∧ L");
  c.check.within(subspace_residual(d.mul_short, d.mul_meet), c.gap_tol(), "mul A_L = mul A ∧ L");
  c.check.within(d.sesquilinear_residual, 1e-8, "A_L^{-1}[φ] = A^{-1}[φ] on ran A^{1/2} ∧ L");
  c.check.within(inclusion_residual(orth_complement(l), ker_part(short_rel(a, l, c.tol()), c.tol())), c.gap_tol(),
                 "L⊥ ⊆ ker A_L");
}

void shorting_compress(Ctx& c) {
  const Eigen::Index n = c.n2();
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(n);
  const Subspace l = c.proper_subspace(n);
  const NonnegRelation lhs = restrict_reducing(short_rel(a, l, t), l, t);
  c.check.within(resolvent_distance(lhs, rel_inverse(compress(rel_inverse(a), l, t))), 1e-8,
                 "A_L↾L = (P_L A^{-1}↾L)^{-1}");
  const NonnegRelation lhs2 = rel_inverse(restrict_reducing(antishort(a, l, t), l, t));
  c.check.within(resolvent_distance(lhs2, compress(a, l, t)), 1e-8, "((A^{-1})_L)^{-1}↾L = P_L A↾L");
}

void shorting_weyl_limits(Ctx& c) {
  const Eigen::Index n = c.n2();
  const Tolerance& t = c.tol();
  const NonnegRelation a = random_bounded(c.rng, n);
  const Subspace l = c.proper_subspace(n);
  const WeylLimits w = weyl_limits(a, l, t, ladder(c.cfg.k_max));
  c.check.holds(w.at_zero.converged && w.at_infinity.converged, "Cauchy criterion at both ends");
  c.check.within(resolvent_distance(w.at_zero.relation, restrict_reducing(short_rel(a, l, t), l, t)), t.limit,
                 "−lim_{λ↑0} M = A_L↾L");
  const NonnegRelation inf_target = rel_inverse(restrict_reducing(antishort(a, l, t), l, t));
  c.check.within(resolvent_distance(w.at_infinity.relation, inf_target), t.limit, "−lim_{λ↓−∞} M = ((A^{-1})_L)^{-1}↾L");
  for (const LimitResult* r : {&w.at_zero, &w.at_infinity}) {
    for (const TraceRow& row : r->trace) c.check.holds(row.monotone_ok, "−M monotone along the ladder");
  }
  leq(c, short_rel(a, l, t), rel_inverse(antishort(a, l, t)), "A_L ≤ ((A^{-1})_L)^{-1}");
}

void shorting_parallel_limit(Ctx& c) {
  const Eigen::Index n = c.n2();
  const NonnegRelation a = c.nonneg(n);
  const Subspace l = c.proper_subspace(n);
  const LimitResult r = short_by_parallel_limit(a, l, ladder(c.cfg.k_max), c.tol());
  c.check.within(resolvent_distance(r.relation, short_rel(a, l, c.tol())), c.tol().limit, "A : tP_L → A_L");
  for (const TraceRow& row : r.trace) c.check.holds(row.monotone_ok, "A : tP_L non-decreasing in t");
}

// ---------------------------------------------------------------------------
// means

void frmsm_1(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  const double lambda = std::pow(10.0, c.rng.uniform(-1.0, 1.0));
  const Tolerance& t = c.tol();
  c.check.within(resolvent_distance(parallel_sum_rel(scale(a, lambda, t), scale(b, lambda, t), t),
                                    scale(parallel_sum_rel(a, b, t), lambda, t)),
                 1e-8, "λA:λB = λ(A:B)");
}

void frmsm_2(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  c.check.within(resolvent_distance(parallel_sum_rel(a, b, c.tol()), parallel_sum_rel(b, a, c.tol())), 1e-8,
                 "A:B = B:A");
}

void frmsm_3(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n()), d = c.nonneg(c.n());
  const Tolerance& t = c.tol();
  c.check.within(resolvent_distance(parallel_sum_rel(parallel_sum_rel(a, b, t), d, t),
                                    parallel_sum_rel(a, parallel_sum_rel(b, d, t), t)),
                 1e-8, "(A:B):C = A:(B:C)");
}

void frmsm_4(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  const NonnegRelation p = parallel_sum_rel(a, b, c.tol());
  leq(c, p, a, "A:B ≤ A");
  leq(c, p, b, "A:B ≤ B");
}

void frmsm_5(Ctx& c) {
  const Tolerance& t = c.tol();
  const NonnegRelation a2 = c.nonneg(c.n()), b = c.nonneg(c.n());
  const NonnegRelation a1 = parallel_sum_rel(a2, c.nonneg(c.n()), t);
  leq(c, parallel_sum_rel(a1, b, t), parallel_sum_rel(a2, b, t), "A1 ≤ A2 ⇒ A1:B ≤ A2:B");
}

void frmsm_6(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  const Tolerance& t = c.tol();
  c.check.within(subspace_residual(sqrt_range(parallel_sum_rel(a, b, t), t),
                                   meet(sqrt_range(a, t), sqrt_range(b, t), t)),
                 c.gap_tol(), "ran (A:B)^{1/2} = ran A^{1/2} ∧ ran B^{1/2}");
}

void frmsm_7(Ctx& c) {
  const Eigen::Index n = c.n2();
  const Tolerance& t = c.tol();
  // Relations whose square-root ranges are prescribed complementary pieces.
  const Matrix u = random_unitary(c.rng, n);
  const int k = c.rng.integer(1, static_cast<int>(n) - 1);
  auto with_sqrt_range = [&](const Matrix& basis) {
    const NonnegRelation part = c.nonneg(basis.cols());
    // Zero on the complement: T = I there.
    const Subspace s(n, basis);
    return NonnegRelation(HermMatrix(Matrix(basis * part.cayley().matrix() * basis.adjoint())) +
                              (HermMatrix::identity(n) - projector(s)),
                          t);
  };
  const Matrix skew = u.rightCols(n - k) + 0.3 * u.leftCols(1) * random_gaussian(c.rng, 1, n - k);
  const NonnegRelation a = with_sqrt_range(u.leftCols(k));
  const NonnegRelation b = with_sqrt_range(orthonormalize(skew));
  const bool trivial_meet = meet(sqrt_range(a, t), sqrt_range(b, t), t).dim() == 0;
  const NonnegRelation p = parallel_sum_rel(a, b, t);
  const bool zero = resolvent_distance(p, NonnegRelation::zero_operator(n)) <= c.gap_tol();
  c.check.holds(trivial_meet == zero, "A:B = 0 ⟺ ran A^{1/2} ∧ ran B^{1/2} = {0}");
  // And on a generic pair sharing a direction.
  const NonnegRelation x = c.nonneg(n), y = c.nonneg(n);
  const bool meet_zero = meet(sqrt_range(x, t), sqrt_range(y, t), t).dim() == 0;
  const bool pz = resolvent_distance(parallel_sum_rel(x, y, t), NonnegRelation::zero_operator(n)) <= c.gap_tol();
  c.check.holds(meet_zero == pz, "A:B = 0 ⟺ trivial meet (generic pair)");
}

void frmsm_8(Ctx& c) {
  const Eigen::Index n = c.n2();
  const Tolerance& t = c.tol();
  const NonnegRelation b = c.nonneg(n);
  const NonnegRelation binv = rel_inverse(b);
  const Subspace db = form_domain(binv, t);
  if (db.dim() == 0) {
    c.check.within(resolvent_distance(harmonic(b, b, t), b), 1e-8, "h(B, B) = B");
    return;
  }
  const int k = c.rng.integer(0, static_cast<int>(db.dim()));
  const Subspace d(n, Matrix(db.basis() * random_unitary(c.rng, db.dim()).leftCols(k)));
  const NonnegRelation ainv = k > 0 ? from_form(d, form_gram(binv, d, t), t) : NonnegRelation::purely_multivalued(n);
  const NonnegRelation a = rel_inverse(ainv);
  c.check.within(resolvent_distance(harmonic(a, b, t), a), 1e-8, "h(A, B) = A when A^{-1}[·] ⊂ B^{-1}[·]");
}

void means_variational(Ctx& c) {
  const Eigen::Index n = c.n();
  const HermMatrix a = random_psd(c.rng, n, c.rng.integer(1, static_cast<int>(n)));
  const HermMatrix b = random_psd(c.rng, n, c.rng.integer(1, static_cast<int>(n)));
  const HermMatrix p = parallel_sum_psd(a, b, c.tol());
  const Vector phi = random_gaussian(c.rng, n, 1).col(0);
  // Minimize (Af, f) + (B(φ − f), φ − f): stationary point (A + B) f = B φ.
  const Vector f = pinv(a + b, c.tol()).matrix() * (b.matrix() * phi);
  const Vector g = phi - f;
  const double minimum = f.dot(a.matrix() * f).real() + g.dot(b.matrix() * g).real();
  const double value = phi.dot(p.matrix() * phi).real();
  c.check.within(std::abs(value - minimum) / (1.0 + std::abs(minimum)), 1e-8, "((A:B)φ, φ) = min");
}

void ythdj_chain(Ctx& c) {
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  const NonnegRelation h = harmonic(a, b, t);
  const NonnegRelation z = c0_mean(a, b, t);
  const NonnegRelation m = arithmetic(a, b, t);
  leq(c, h, z, "h ≤ c0");
  leq(c, z, m, "c0 ≤ (A ∔ B)/2");
  if (resolvent_distance(a, b) > 100.0 * t.rank_rel) {
    const double margin = std::max(strict_margin(h, z), strict_margin(z, m));
    c.check.holds(margin > t.psd_slack, "A ≠ B ⇒ the chain is strict");
  }
  // A = B: all three coincide.
  c.check.within(resolvent_distance(harmonic(a, a, t), a), 1e-10, "h(A, A) = A");
  c.check.within(resolvent_distance(c0_mean(a, a, t), a), 1e-10, "c0(A, A) = A");
  c.check.within(resolvent_distance(arithmetic(a, a, t), a), 1e-10, "(A ∔ A)/2 = A");
}

void ythdj_domains(Ctx& c) {
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  const NonnegRelation s = form_sum(a, b, t);
  const NonnegRelation p = parallel_sum_rel(a, b, t);
  const NonnegRelation z = c0_mean(a, b, t);
  const Subspace sum_ranges = join(sqrt_range(a, t), sqrt_range(b, t), t);
  const Subspace sum_domains = join(form_domain(a, t), form_domain(b, t), t);
  c.check.within(inclusion_residual(sum_ranges, sqrt_range(s, t)), c.gap_tol(), "ran A^{1/2} + ran B^{1/2} ⊆ ran (A∔B)^{1/2}");
  c.check.within(inclusion_residual(sum_domains, form_domain(p, t)), c.gap_tol(), "𝒟[A] + 𝒟[B] ⊆ 𝒟[A:B]");
  c.check.within(subspace_residual(form_domain(z, t), sum_domains), c.gap_tol(), "𝒟[c0] = 𝒟[A] + 𝒟[B]");
  c.check.within(subspace_residual(sqrt_range(z, t), sum_ranges), c.gap_tol(), "ran c0^{1/2} = ran A^{1/2} + ran B^{1/2}");
}

void means_ctqxfc(Ctx& c) {
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  const HermMatrix id = HermMatrix::identity(a.n());
  const HermMatrix h = harmonic_psd(id - a.cayley(), id - b.cayley(), t);
  const Subspace d = range((id * 2.0 - h).matrix(), t, 2.0);
  c.check.within(subspace_residual(form_domain(parallel_sum_rel(a, b, t), t), d), c.gap_tol(),
                 "𝒟[A:B] = ran(2I − h(I − T_A, I − T_B))");
}

void means_cylbv(Ctx& c) {
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  const NonnegRelation target = parallel_sum_rel(a, b, t);
  double prev = std::numeric_limits<double>::infinity();
  double last = prev;
  for (int j = 0; j <= 30; j += 2) {
    const double eps = std::ldexp(1.0, -j);
    const double d = resolvent_distance(parallel_sum_rel(shift(a, eps, t), shift(b, eps, t), t), target);
    c.check.holds(d <= prev + 1e-12, "distance to A:B decreases along k = 2^j");
    prev = d;
    last = d;
  }
  c.check.within(last, t.limit, "A_k : B_k → A : B");
}

void arharm_limits(Ctx& c) {
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  const MeanPair p = ah_iterate(a, b, {}, t);
  c.check.holds(p.converged, "iteration converged");
  for (const AhStep& s : p.trace) c.check.holds(s.monotone_ok, "order certificates");
  const Subspace da = form_domain(p.upper, t);
  const Subspace db = form_domain(p.lower, t);
  c.check.within(inclusion_residual(da, db), c.gap_tol(), "𝒟[A∞] ⊆ 𝒟[B∞]");
  c.check.within(inclusion_residual(meet(form_domain(a, t), form_domain(b, t), t), da), c.gap_tol(),
                 "𝒟[A] ∧ 𝒟[B] ⊆ 𝒟[A∞]");
  if (da.dim() > 0) {
    const HermMatrix fa = form_gram(p.upper, da, t);
    const HermMatrix fb = form_gram(p.lower, da, t);
    c.check.within(hdist(fa, fb) / (1.0 + fa.norm()), 1e-6, "A∞[φ] = B∞[φ] on 𝒟[A∞]");
  }
  // Dual statement on square-root ranges and inverse forms.
  const Subspace ra = sqrt_range(p.upper, t);
  const Subspace rb = sqrt_range(p.lower, t);
  c.check.within(inclusion_residual(rb, ra), c.gap_tol(), "ran B∞^{1/2} ⊆ ran A∞^{1/2}");
  c.check.within(inclusion_residual(meet(sqrt_range(a, t), sqrt_range(b, t), t), rb), c.gap_tol(),
                 "ran A^{1/2} ∧ ran B^{1/2} ⊆ ran B∞^{1/2}");
  if (rb.dim() > 0) {
    const HermMatrix ia = form_gram(rel_inverse(p.upper), rb, t);
    const HermMatrix ib = form_gram(rel_inverse(p.lower), rb, t);
    c.check.within(hdist(ia, ib) / (1.0 + ib.norm()), 1e-6, "A∞^{-1}[φ] = B∞^{-1}[φ] on ran B∞^{1/2}");
  }
}

void arharm_pd(Ctx& c) {
  const Tolerance& t = c.tol();
  const HermMatrix a = random_pd(c.rng, c.n(), 1e2), b = random_pd(c.rng, c.n(), 1e2);
  const MeanPair p = ah_iterate(NonnegRelation::from_operator(a, t), NonnegRelation::from_operator(b, t), {}, t);
  c.check.holds(p.converged && p.coincide, "PD pair converges to a single limit");
  const HermMatrix expected = pinv(geometric_mean_pd(pinv(a, t), pinv(b, t), t), t);
  c.check.within(resolvent_distance(p.upper, NonnegRelation::from_operator(expected, t)), 1e-8,
                 "limit = (A^{-1} # B^{-1})^{-1}");
  c.check.within(hdist(operator_matrix(p.upper, t), expected) / (1.0 + expected.norm()), 1e-8, "limit matrix");
}

void means_form_sum(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  c.check.within(resolvent_distance(form_sum(a, b, c.tol()), form_sum_oracle(a, b, c.tol())), 1e-8,
                 "Cayley route = first representation theorem");
}

void means_regularized(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  const RegularizedResult r = regularized_parallel_oracle(a, b, ladder(c.cfg.k_max), c.tol());
  c.check.holds(r.monotone, "H_ε decreases as ε ↓ 0");
  c.check.within(resolvent_distance(r.relation, parallel_sum_rel(a, b, c.tol())), c.tol().limit, "H_ε → A : B");
}

void means_inverse_duality(Ctx& c) {
  const Tolerance& t = c.tol();
  const NonnegRelation a = c.nonneg(c.n()), b = c.nonneg(c.n());
  c.check.within(resolvent_distance(harmonic(rel_inverse(a), rel_inverse(b), t), rel_inverse(arithmetic(a, b, t))),
                 1e-8, "h(A^{-1}, B^{-1}) = ((A ∔ B)/2)^{-1}");
}

void means_dikij(Ctx& c) {
  const Eigen::Index n = c.n();
  const NonnegRelation b = c.nonneg(n);
  const AhClosedForms cf = ah_closed_forms(b, {}, c.tol());
  const MeanPair z = ah_iterate(NonnegRelation::zero_operator(n), b, {}, c.tol());
  c.check.within(resolvent_distance(z.upper, cf.zero_first.upper), 1e-7, "ah(0, B) upper");
  c.check.within(resolvent_distance(z.lower, cf.zero_first.lower), 1e-7, "ah(0, B) lower");
  const MeanPair m = ah_iterate(NonnegRelation::purely_multivalued(n), b, {}, c.tol());
  c.check.within(resolvent_distance(m.upper, cf.multivalued_first.upper), 1e-7, "ah({0}⊕H, B) upper");
  c.check.within(resolvent_distance(m.lower, cf.multivalued_first.lower), 1e-7, "ah({0}⊕H, B) lower");
}

void means_dikij2(Ctx& c) {
  const NonnegRelation a = c.nonneg(c.n());
  const AhClosedForms cf = ah_closed_forms(a, {}, c.tol());
  const MeanPair p = ah_iterate(a, rel_inverse(a), {}, c.tol());
  c.check.within(resolvent_distance(p.upper, cf.with_inverse.upper), 1e-7, "ah(A, A^{-1}) upper");
  c.check.within(resolvent_distance(p.lower, cf.with_inverse.lower), 1e-7, "ah(A, A^{-1}) lower");
  c.check.within(cf.cayley_power_residual, 1e-8, "𝔆(B_n) = T^{2^n}");
}

void means_proinht(Ctx& c) {
  const Eigen::Index n = c.n2();
  const Matrix u = random_unitary(c.rng, n);
  const int common = c.rng.integer(0, static_cast<int>(n) - 1);
  const int k1 = c.rng.integer(0, static_cast<int>(n) - common);
  const int k2 = c.rng.integer(0, static_cast<int>(n) - common);
  Matrix b1(n, common + k1), b2(n, common + k2);
  b1 << u.leftCols(common), random_gaussian(c.rng, n, k1);
  b2 << u.leftCols(common), random_gaussian(c.rng, n, k2);
  const Subspace l1 = Subspace::span(b1, c.tol()), l2 = Subspace::span(b2, c.tol());
  const HermMatrix p = parallel_sum_psd(projector(l1), projector(l2), c.tol()) * 2.0;
  c.check.within(hdist(p, projector(meet(l1, l2, c.tol()))), 1e-8, "2(P1 : P2) = P_{L1 ∩ L2}");
}

void means_geometric(Ctx& c) {
  const HermMatrix a = random_pd(c.rng, c.n(), 1e2), b = random_pd(c.rng, c.n(), 1e2);
  const HermMatrix g = geometric_mean_pd(a, b, c.tol());
  c.check.within(hdist(g, geometric_mean_pd(b, a, c.tol())) / (1.0 + g.norm()), 1e-8, "A # B = B # A");
  // G A^{-1} G = B
  const Matrix gag = g.matrix() * pinv(a, c.tol()).matrix() * g.matrix();
  c.check.within(opnorm(Matrix(gag - b.matrix())) / (1.0 + b.norm()), 1e-8, "G A^{-1} G = B");
}

// ---------------------------------------------------------------------------
// extensions

struct ExtInstance {
  LinearRelation s;
  ExtensionInterval iv;
};

ExtInstance ext_instance(Ctx& c, Eigen::Index deficiency) {
  ExtInstance e;
  e.s = random_symmetric(c.rng, c.n2(), deficiency);
  e.iv = extreme_extensions(symmetric_to_Q(e.s, c.tol()), c.tol());
  return e;
}

Eigen::Index random_deficiency(Ctx& c) { return c.rng.integer(1, static_cast<int>(c.n2()) - 1); }

double restriction_residual(const ExtensionInterval& iv, const HermMatrix& qt) {
  return opnorm(Matrix(qt.matrix() * iv.q.dom.basis() - iv.q.action));
}

void ext_interval(Ctx& c) {
  const ExtInstance e = ext_instance(c, random_deficiency(c));
  const auto [lo, hi] = interval_residuals(e.iv, c.tol());
  c.check.within(lo, 1e-10, "(I + Q_μ)_𝔑 = 0");
  c.check.within(hi, 1e-10, "(I − Q_M)_𝔑 = 0");
  c.check.within(restriction_residual(e.iv, e.iv.q_mu), 1e-10, "Q_μ restricts to Q");
  c.check.within(restriction_residual(e.iv, e.iv.q_M), 1e-10, "Q_M restricts to Q");
  c.check.holds(loewner_leq(e.iv.q_mu, e.iv.q_M, c.tol()), "Q_μ ≤ Q_M");
  for (const HermMatrix* q : {&e.iv.q_mu, &e.iv.q_M}) {
    const Eigh s = eigh(*q);
    c.check.holds(s.values(0) >= -1.0 - 1e-10 && s.values(s.values.size() - 1) <= 1.0 + 1e-10, "contraction");
  }
}

void ext_param_roundtrip(Ctx& c) {
  const Tolerance& t = c.tol();
  const ExtInstance e = ext_instance(c, random_deficiency(c));
  const HermMatrix z = random_contraction(c.rng, e.iv.n0.dim());
  const NonnegRelation ext = param_to_extension(e.iv, z, t);
  const HermMatrix& qt = ext.cayley();
  c.check.within(restriction_residual(e.iv, qt), 1e-9, "Q̃ restricts to Q");
  c.check.holds(loewner_leq(e.iv.q_mu, qt, t) && loewner_leq(qt, e.iv.q_M, t), "Q_μ ≤ Q̃ ≤ Q_M");
  leq(c, krein(e.s, t), ext, "S_K ≤ S̃");
  leq(c, ext, friedrichs(e.s, t), "S̃ ≤ S_F");
  c.check.within(hdist(extension_to_param(e.iv, ext, t), z), 1e-8, "param round trip");
}

void ext_shoort(Ctx& c) {
  const Tolerance& t = c.tol();
  const ExtInstance e = ext_instance(c, random_deficiency(c));
  const Eigen::Index k = e.iv.n0.dim();
  const HermMatrix z = random_contraction(c.rng, k);
  const HermMatrix qt = param_to_extension(e.iv, z, t).cayley();
  const HermMatrix id = HermMatrix::identity(qt.dim());
  const Matrix& gb = e.iv.n0.basis();
  const Matrix g = e.iv.half_gap_sqrt.matrix() * gb;
  for (double sign : {1.0, -1.0}) {
    const HermMatrix lhs = short_psd(id + qt * sign, e.iv.n_def, t);
    const HermMatrix zs = HermMatrix::identity(k) + z * sign;
    const HermMatrix rhs(Matrix(0.5 * g * zs.matrix() * g.adjoint()));
    c.check.within(hdist(lhs, rhs), 1e-8, "(I ± Q̃)_𝔑 = ½ G (I ± Z) G");
  }
}

void ext_means(Ctx& c) {
  const Tolerance& t = c.tol();
  const ExtInstance e = ext_instance(c, random_deficiency(c));
  const Eigen::Index k = e.iv.n0.dim();
  const HermMatrix z1 = random_contraction(c.rng, k), z2 = random_contraction(c.rng, k);
  const NonnegRelation s1 = param_to_extension(e.iv, z1, t), s2 = param_to_extension(e.iv, z2, t);
  const ParamMeans pm = means_param_map(z1, z2, t);
  const NonnegRelation ar = arithmetic(s1, s2, t), hr = harmonic(s1, s2, t), cr = c0_mean(s1, s2, t);
  for (const NonnegRelation* m : {&ar, &hr, &cr}) {
    c.check.within(restriction_residual(e.iv, m->cayley()), 1e-8, "mean of extensions is an extension");
  }
  c.check.within(hdist(extension_to_param(e.iv, ar, t), pm.arith), 1e-8, "arithmetic parameter map");
  c.check.within(hdist(extension_to_param(e.iv, hr, t), pm.harm), 1e-8, "harmonic parameter map");
  c.check.within(hdist(extension_to_param(e.iv, cr, t), pm.c0), 1e-8, "c0 parameter map");
}

void ext_osobrol(Ctx& c) {
  const Tolerance& t = c.tol();
  const ExtInstance e = ext_instance(c, random_deficiency(c));
  const Eigen::Index k = e.iv.n0.dim();
  const NonnegRelation sf = friedrichs(e.s, t), sk = krein(e.s, t);
  const NonnegRelation any = param_to_extension(e.iv, random_contraction(c.rng, k), t);
  c.check.within(resolvent_distance(arithmetic(sf, any, t), sf), 1e-8, "½(S_F ∔ S̃) = S_F");
  c.check.within(resolvent_distance(harmonic(sk, any, t), sk), 1e-8, "h(S_K, S̃) = S_K");
  const NonnegRelation ext = param_to_extension(e.iv, random_fundamental_symmetry(c.rng, k), t);
  c.check.within(resolvent_distance(arithmetic(sk, ext, t), ext), 1e-8, "½(S_K ∔ S̃) = S̃ for extremal S̃");
  c.check.within(resolvent_distance(harmonic(sf, ext, t), ext), 1e-8, "h(S_F, S̃) = S̃ for extremal S̃");
}

void ext_extremal_means(Ctx& c) {
  const Tolerance& t = c.tol();
  const ExtInstance e = ext_instance(c, random_deficiency(c));
  const Eigen::Index k = e.iv.n0.dim();
  const NonnegRelation s1 = param_to_extension(e.iv, random_fundamental_symmetry(c.rng, k), t);
  const NonnegRelation s2 = param_to_extension(e.iv, random_fundamental_symmetry(c.rng, k), t);
  c.check.holds(is_extremal(e.iv, s1, t) && is_extremal(e.iv, s2, t), "inputs are extremal");
  c.check.holds(is_extremal(e.iv, arithmetic(s1, s2, t), t), "arithmetic mean is extremal");
  c.check.holds(is_extremal(e.iv, harmonic(s1, s2, t), t), "harmonic mean is extremal");
}

void ext_extrah(Ctx& c) {
  const Tolerance& t = c.tol();
  const ExtInstance e = ext_instance(c, random_deficiency(c));
  const Eigen::Index k = e.iv.n0.dim();
  const NonnegRelation s1 = param_to_extension(e.iv, random_fundamental_symmetry(c.rng, k), t);
  const NonnegRelation s2 = param_to_extension(e.iv, random_fundamental_symmetry(c.rng, k), t);
  const AhExtensionResult r = ah_extensions(e.iv, s1, s2, {}, t);
  c.check.holds(r.extremal_inputs, "inputs recognized as extremal");
  c.check.within(r.stabilization_residual, 1e-9, "iterates stabilize after one step");
}

void ext_yfltdct(Ctx& c) {
  const Tolerance& t = c.tol();
  const ExtInstance e = ext_instance(c, 1);
  if (e.iv.n0.dim() != 1) {
    c.check.fail("deficiency-1 instance with dim 𝔑₀ ≠ 1");
    return;
  }
  const double z1 = c.rng.uniform(-1.0, 1.0), z2 = c.rng.uniform(-1.0, 1.0);
  const HermMatrix m1 = HermMatrix::identity(1) * z1, m2 = HermMatrix::identity(1) * z2;
  const AhExtensionResult r =
      ah_extensions(e.iv, param_to_extension(e.iv, m1, t), param_to_extension(e.iv, m2, t), {}, t);
  c.check.holds(r.pair.coincide, "A∞ = B∞");
  const double w = scalar_w(z1, z2);
  if (r.w_upper && r.w_lower) {
    c.check.within(std::abs(*r.w_upper - w), 1e-7, "parameter of A∞ = w(z1, z2)");
    c.check.within(std::abs(*r.w_lower - w), 1e-7, "parameter of B∞ = w(z1, z2)");
  } else {
    c.check.fail("limit parameter not extracted");
  }
  // (ah + I)^{-1} reconstructed from w and compared as a resolvent.
  const NonnegRelation predicted = param_to_extension(e.iv, HermMatrix::identity(1) * w, t);
  c.check.within(resolvent_distance(r.pair.upper, predicted), 1e-7, "ah(S̃1, S̃2) = S̃_w");
  const ScalarRecursion rec = scalar_w_by_recursion(z1, z2);
  c.check.within(std::abs(rec.w - w), 1e-12, "scalar recursion");
}

void ext_krein_unique(Ctx& c) {
  const Tolerance& t = c.tol();
  const Eigen::Index n = c.n2();
  const bool unique = c.rng.bernoulli(0.5);
  const Eigen::Index m = c.rng.integer(1, std::max(1, static_cast<int>(n) / 2));
  const LinearRelation s = unique ? random_symmetric_unique(c.rng, n, m) : random_symmetric(c.rng, n, m);
  const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(s, t), t);
  const NonnegRelation sf(iv.q_mu, t);
  const NonnegRelation shorted = short_rel(sf, iv.n_def, t);
  const bool vanishes = resolvent_distance(shorted, NonnegRelation::zero_operator(n)) <= c.gap_tol();
  c.check.holds(vanishes == (iv.n0.dim() == 0), "(S_F)_𝔑 = 0 ⟺ 𝔑₀ = {0}");
  c.check.holds(unique == (iv.n0.dim() == 0), "constructed uniqueness detected");
  if (iv.n0.dim() == 0) c.check.within(hdist(iv.q_mu, iv.q_M), 1e-9, "S_F = S_K");
}

BoundaryParam random_param(Rng& rng) {
  const double u = rng.uniform();
  if (u < 0.1) return BoundaryParam{0.0};
  if (u < 0.2) return BoundaryParam::inf();
  return BoundaryParam{std::pow(10.0, rng.uniform(-3.0, 3.0))};
}

double rel_err(double got, double want) {
  if (std::isinf(want) || std::isinf(got)) return got == want ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

void bc_table(Ctx& c) {
  const BoundaryParam p = random_param(c.rng), q = random_param(c.rng);
  const double x = p.value, y = q.value;
  const bool xi = p.is_inf(), yi = q.is_inf();
  const double inf = std::numeric_limits<double>::infinity();
  // Arithmetic (c + d)/2 and harmonic 2cd/(c + d), with 0/0 := 0 and ∞ rules.
  const double arith = (xi || yi) ? inf : (x + y) / 2.0;
  double harm;
  if (xi && yi) harm = inf;
  else if (xi) harm = 2.0 * y;
  else if (yi) harm = 2.0 * x;
  else harm = (x + y) == 0.0 ? 0.0 : 2.0 * x * y / (x + y);
  // c0 (c + d + 2cd)/(2 + c + d) and its limits.
  double c0;
  if (xi && yi) c0 = inf;
  else if (xi) c0 = 1.0 + 2.0 * y;
  else if (yi) c0 = 1.0 + 2.0 * x;
  else c0 = (x + y + 2.0 * x * y) / (2.0 + x + y);
  c.check.within(rel_err(bc_mean(p, q, BcKind::Arith).value.value, arith), 1e-12, "arith row");
  c.check.within(rel_err(bc_mean(p, q, BcKind::Harm).value.value, harm), 1e-12, "harm row");
  c.check.within(rel_err(bc_mean(p, q, BcKind::C0).value.value, c0), 1e-12, "c0 row");
  const BcResult ah = bc_mean(p, q, BcKind::Ah);
  const bool extremal = (x == 0.0 && !xi && yi) || (xi && y == 0.0 && !yi);
  if (extremal) {
    c.check.holds(ah.is_pair() && ah.pair->first.is_inf() && ah.pair->second.value == 0.0 && !ah.pair->second.is_inf(),
                  "ah(0, ∞) = pair(∞, 0)");
  } else {
    c.check.holds(!ah.is_pair(), "ah is a single value");
    double want;
    if (xi || yi) want = (x == 0.0 && !xi) || (y == 0.0 && !yi) ? 0.0 : inf;
    else want = std::sqrt(x * y);
    c.check.within(rel_err(ah.value.value, want), 1e-12, "ah row √(cd)");
  }
}

void bc_conjugation(Ctx& c) {
  const double x = std::pow(10.0, c.rng.uniform(-3.0, 3.0));
  const double y = std::pow(10.0, c.rng.uniform(-3.0, 3.0));
  const double lhs = z_of_c(BoundaryParam{std::sqrt(x * y)});
  const double rhs = scalar_w(z_of_c(BoundaryParam{x}), z_of_c(BoundaryParam{y}));
  c.check.within(std::abs(lhs - rhs), 1e-12, "z(√(cd)) = w(z_c, z_d)");
  c.check.within(rel_err(c_of_z(z_of_c(BoundaryParam{x})).value, x), 1e-10, "c(z(c)) = c");
}

void scalar_recursion(Ctx& c) {
  const double z1 = c.rng.uniform(-1.0, 1.0), z2 = c.rng.uniform(-1.0, 1.0);
  const ScalarRecursion r = scalar_w_by_recursion(z1, z2);
  c.check.within(std::abs(r.w - scalar_w(z1, z2)), 1e-12, "recursion = closed form");
  c.check.holds(r.monotone, "recursion is monotone");
}

// ---------------------------------------------------------------------------
// Registry

const std::vector<Property>& registry() {
  static const std::vector<Property> props = {
      {"numkit.pinv", "Penrose identities of the pseudoinverse", numkit_pinv},
      {"numkit.sqrt", "psd_sqrt squares back (cond ≤ 1e8)", numkit_sqrt},
      {"numkit.meetjoin", "dim(U∧V) + dim(U∨V) = dim U + dim V", numkit_meetjoin},
      {"numkit.projrange", "P_ran(M) M = M", numkit_projrange},
      {"numkit.loewner", "Loewner order is a partial order", numkit_loewner},
      {"relation.cayley", "Cayley transform round trips", relation_cayley_roundtrip},
      {"relation.adjoint", "adjoint involutive, selfadjointness by gap", relation_adjoint},
      {"relation.inverse", "rel_inverse matches the graph inverse", relation_inverse},
      {"relation.parts", "mul/ker/cdom/cran from I ± T", relation_parts},
      {"ranhalf", "quadratic-form limit of (A + x)^{-1}", relation_ranhalf},
      {"relation.order", "rel_leq partial order, inverse reverses it", relation_order},
      {"relation.from_form", "from_form round trip", relation_from_form},
      {"maxprob", "A_L dominates sampled members of Ξ(A, L)", shorting_maximality},
      {"shortrel.idempotent", "(A_L)_L = A_L", shorting_idempotent},
      {"connon.monotone", "A ≤ B ⇒ A_L ≤ B_L", shorting_monotone},
      {"connon.convergence", "(A + 1/k)_L → A_L monotonically", shorting_convergence},
      {"shormat1", "square-root and Schur shorting paths agree", shorting_paths},
      {"afqyj", "(A:B)_L = A_L:B = A:B_L = A_L:B_L", shorting_chain_rule},
      {"jdhfn", "Weyl family of A^{-1} inverts the one of A", shorting_weyl_inverse},
      {"dcgv1", "norm split for contractions 0 ≤ M ≤ I", shorting_contraction_split},
      {"shortrel.ranges", "ranges, mul and form of A_L", shorting_ranges},
      {"steng", "compressions versus shorts", shorting_compress},
      {"shortre2", "Weyl-function limits at 0 and −∞", shorting_weyl_limits},
      {"parsumnesh", "A : tP_L → A_L as t → ∞", shorting_parallel_limit},
      {"Frmsm.1", "λA:λB = λ(A:B)", frmsm_1},
      {"Frmsm.2", "A:B = B:A", frmsm_2},
      {"Frmsm.3", "associativity of the parallel sum", frmsm_3},
      {"Frmsm.4", "A:B ≤ A, A:B ≤ B", frmsm_4},
      {"Frmsm.5", "monotonicity of the parallel sum", frmsm_5},
      {"Frmsm.6", "ran (A:B)^{1/2} = ran A^{1/2} ∧ ran B^{1/2}", frmsm_6},
      {"Frmsm.7", "A:B = 0 ⟺ trivial square-root range meet", frmsm_7},
      {"Frmsm.8", "h(A, B) = A for restricted inverse forms", frmsm_8},
      {"khfy.variational", "((A:B)φ, φ) as a constrained minimum", means_variational},
      {"ythdj.chain", "h ≤ c0 ≤ arithmetic, strict unless A = B", ythdj_chain},
      {"ythdj.domains", "form domains and square-root ranges of the means", ythdj_domains},
      {"ctqxfc", "𝒟[A:B] from the Cayley transforms", means_ctqxfc},
      {"cylbv", "A_k : B_k → A : B along k = 2^j", means_cylbv},
      {"arharm.limits", "properties of the ah limits", arharm_limits},
      {"arharm.pd", "PD ah limit = (A^{-1} # B^{-1})^{-1}", arharm_pd},
      {"vspom2.formsum", "form sum: Cayley route vs representation theorem", means_form_sum},
      {"hinft", "regularized parallel-sum oracle", means_regularized},
      {"jhfnyst", "h(A^{-1}, B^{-1}) = ((A ∔ B)/2)^{-1}", means_inverse_duality},
      {"dikij", "ah(0, B) and ah({0}⊕H, B) closed forms", means_dikij},
      {"dikij2", "ah(A, A^{-1}) closed form and Cayley powers", means_dikij2},
      {"proinht", "2(P1 : P2) = P_{L1 ∩ L2}", means_proinht},
      {"geomean", "geometric mean symmetry and Riccati identity", means_geometric},
      {"rhfqybt", "extreme extensions Q_μ, Q_M", ext_interval},
      {"krparm", "interval parameterization round trip", ext_param_roundtrip},
      {"shoort", "(I ± Q̃)_𝔑 = ½ G (I ± Z) G", ext_shoort},
      {"ext.means", "means of extensions and their parameters", ext_means},
      {"osobrol", "Friedrichs/Kreĭn absorption identities", ext_osobrol},
      {"ext.extremal", "means of extremal extensions are extremal", ext_extremal_means},
      {"extrah", "one-step stabilization for extremal pairs", ext_extrah},
      {"yfltdct.w", "deficiency-one ah limit parameter", ext_yfltdct},
      {"krein.unique", "(S_F)_𝔑 = 0 ⟺ 𝔑₀ = {0}", ext_krein_unique},
      {"jcnfy.table", "boundary-parameter means table", bc_table},
      {"jcnfy.conjugation", "z(√(cd)) = w(z_c, z_d)", bc_conjugation},
      {"ghtl11.recursion", "scalar recursion matches w(z1, z2)", scalar_recursion},
  };
  return props;
}

const Property& find(const std::string& id) {
  for (const Property& p : registry()) {
    if (p.id == id) return p;
  }
  throw Error(ErrorCode::UnknownProperty, id);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void RunConfig::validate() const {
  if (n < 1 || n > 64) throw Error(ErrorCode::InvalidArgument, "n must lie in [1, 64]");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be ≥ 1");
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be ≥ 1");
  if (format != "json" && format != "csv") throw Error(ErrorCode::InvalidArgument, "format must be json or csv");
  tol.validate();
}

std::vector<PropertyInfo> list_properties() {
  std::vector<PropertyInfo> out;
  for (const Property& p : registry()) out.push_back({p.id, p.description});
  return out;
}

std::vector<std::string> match_properties(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const std::string& pattern : patterns) {
    bool any = false;
    for (const Property& p : registry()) {
      if (fnmatch(pattern.c_str(), p.id.c_str(), 0) == 0) {
        any = true;
        if (std::find(out.begin(), out.end(), p.id) == out.end()) out.push_back(p.id);
      }
    }
    if (!any) throw Error(ErrorCode::UnknownProperty, pattern);
  }
  // Registration order, independent of pattern order.
  std::vector<std::string> ordered;
  for (const Property& p : registry()) {
    if (std::find(out.begin(), out.end(), p.id) != out.end()) ordered.push_back(p.id);
  }
  return ordered;
}

Verdict run_property(const std::string& id, const RunConfig& cfg) {
  const Property& prop = find(id);
  Verdict v;
  v.property = id;
  v.trials = cfg.trials;
  const std::uint64_t stream = cfg.seed ^ fnv1a(id);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = Rng::substream(stream, static_cast<std::uint64_t>(trial));
    Check check;
    Ctx ctx{cfg, rng, check};
    try {
      prop.run(ctx);
    } catch (const std::exception& e) {
      check.fail(std::string("exception: ") + e.what());
    }
    v.worst_residual = std::max(v.worst_residual, check.worst());
    if (check.ok()) {
      ++v.pass;
    } else {
      ++v.fail;
      if (v.first_failure.empty()) v.first_failure = "trial " + std::to_string(trial) + ": " + check.note();
    }
  }
  return v;
}

std::vector<Verdict> verify(const RunConfig& cfg, const std::vector<std::string>& patterns) {
  cfg.validate();
  std::vector<Verdict> out;
  for (const std::string& id : match_properties(patterns)) out.push_back(run_property(id, cfg));
  return out;
}

bool all_pass(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.ok(); });
}

Json verify_report(const RunConfig& cfg, const std::vector<Verdict>& verdicts) {
  Json results = Json::array();
  for (const Verdict& v : verdicts) {
    Json r = {{"property", v.property},     {"trials", v.trials}, {"pass", v.pass},
              {"fail", v.fail},             {"worst_residual", v.worst_residual},
              {"seed", cfg.seed}};
    if (!v.trace_path.empty()) r["trace_path"] = v.trace_path;
    if (!v.first_failure.empty()) r["first_failure"] = v.first_failure;
    results.push_back(std::move(r));
  }
  return {{"prng", kPrngName},
          {"seed", cfg.seed},
          {"n", cfg.n},
          {"trials", cfg.trials},
          {"k_max", cfg.k_max},
          {"tolerance", {{"rank_rel", cfg.tol.rank_rel}, {"psd_slack", cfg.tol.psd_slack}, {"limit", cfg.tol.limit}}},
          {"all_pass", all_pass(verdicts)},
          {"results", std::move(results)}};
}

}  // namespace relcalc
