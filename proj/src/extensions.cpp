#include "relcalc/extensions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "relcalc/shorting.hpp"

namespace relcalc {

void PartialContraction::validate(const Tolerance& tol) const {
  if (dom.ambient() != n || action.rows() != n || action.cols() != dom.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "partial contraction shape");
  }
  if (dom.dim() == 0) return;
  const Matrix d = dom.basis().adjoint() * action;
  const double asym = opnorm(d - d.adjoint());
  if (asym > tol.subspace_gap()) {
    std::ostringstream os;
    os << "Q is not Hermitian on its domain (‖D − D*‖ = " << asym << ")";
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  const double nrm = opnorm(action);
  if (nrm > 1.0 + tol.subspace_gap()) {
    std::ostringstream os;
    os << "‖Q‖ = " << nrm;
    throw Error(ErrorCode::NotContraction, os.str());
  }
}

PartialContraction symmetric_to_Q(const LinearRelation& s, const Tolerance& tol) {
  if (!is_symmetric(s, tol)) throw Error(ErrorCode::NotSymmetric, "relation is not symmetric");
  if (!is_nonnegative(s, tol)) throw Error(ErrorCode::NotNonnegative, "relation is not nonnegative");
  const Matrix f = s.first();
  const Matrix g = s.second();
  PartialContraction q;
  q.n = s.n();
  q.dom = range(Matrix(f + g), tol, 1.0);
  // For a nonnegative S, f + f′ = 0 forces f = f′ = 0, so Q is well defined.
  q.action = (f - g) * pinv_general(f + g, tol) * q.dom.basis();
  q.validate(tol);
  return q;
}

ExtensionInterval extreme_extensions(const PartialContraction& q, const Tolerance& tol) {
  q.validate(tol);
  ExtensionInterval iv;
  iv.q = q;
  iv.n_def = orth_complement(q.dom);
  const Matrix& db = q.dom.basis();
  const Matrix& nb = iv.n_def.basis();
  const Eigen::Index p = db.cols();
  const Eigen::Index m = nb.cols();

  // Block form in C^n = dom Q ⊕ 𝔑.
  const HermMatrix d(Matrix(db.adjoint() * q.action), 1e-6);
  const Matrix c_star = nb.adjoint() * q.action;  // m×p
  const HermMatrix d_d = psd_sqrt(HermMatrix::identity(p) - HermMatrix(Matrix(d.matrix() * d.matrix())), tol, 1.0);
  // Minimal-norm solution of C* = N D_D.
  const Matrix nmat = c_star * pinv(d_d, tol, 1.0).matrix();
  const double n_norm = opnorm(nmat);
  if (n_norm > 1.0 + tol.subspace_gap()) {
    std::ostringstream os;
    os << "‖N‖ = " << n_norm;
    throw Error(ErrorCode::NotContractive, os.str());
  }
  const HermMatrix d_ns = psd_sqrt(HermMatrix::identity(m) - HermMatrix(Matrix(nmat * nmat.adjoint()), 1e-6), tol, 1.0);
  const Matrix base = -nmat * d.matrix() * nmat.adjoint();
  const Matrix d_ns2 = d_ns.matrix() * d_ns.matrix();

  auto assemble = [&](const Matrix& f) {
    Matrix t = db * d.matrix() * db.adjoint() + db * c_star.adjoint() * nb.adjoint() + nb * c_star * db.adjoint() +
               nb * f * nb.adjoint();
    return HermMatrix(t, 1e-6);
  };
  iv.q_mu = assemble(base - d_ns2);
  iv.q_M = assemble(base + d_ns2);
  const HermMatrix gap = iv.q_M - iv.q_mu;
  iv.n0 = range(gap.matrix(), tol, 2.0);
  iv.half_gap_sqrt = psd_sqrt(gap, tol, 2.0);
  return iv;
}

std::pair<double, double> interval_residuals(const ExtensionInterval& iv, const Tolerance& tol) {
  const HermMatrix id = HermMatrix::identity(iv.q.n);
  const double lo = short_psd(id + iv.q_mu, iv.n_def, tol).norm();
  const double hi = short_psd(id - iv.q_M, iv.n_def, tol).norm();
  return {lo, hi};
}

NonnegRelation friedrichs(const LinearRelation& s, const Tolerance& tol) {
  return NonnegRelation(extreme_extensions(symmetric_to_Q(s, tol), tol).q_mu, tol);
}

NonnegRelation krein(const LinearRelation& s, const Tolerance& tol) {
  return NonnegRelation(extreme_extensions(symmetric_to_Q(s, tol), tol).q_M, tol);
}

NonnegRelation krein_via_inverse(const LinearRelation& s, const Tolerance& tol) {
  return rel_inverse(friedrichs(inverse(s), tol));
}

namespace {

void require_param(const ExtensionInterval& iv, const HermMatrix& z, const Tolerance& tol) {
  if (z.dim() != iv.n0.dim()) throw Error(ErrorCode::DimensionMismatch, "parameter dimension differs from dim 𝔑₀");
  if (z.dim() == 0) return;
  const Eigh e = eigh(z);
  const double slack = tol.psd_slack * 2.0;
  if (e.values(0) < -1.0 - slack || e.values(e.values.size() - 1) > 1.0 + slack) {
    std::ostringstream os;
    os << "parameter spectrum [" << e.values(0) << ", " << e.values(e.values.size() - 1) << "] leaves [−1, 1]";
    throw Error(ErrorCode::ParamOutOfInterval, os.str());
  }
}

}  // namespace

NonnegRelation param_to_extension(const ExtensionInterval& iv, const HermMatrix& z, const Tolerance& tol) {
  require_param(iv, z, tol);
  const Matrix& g = iv.half_gap_sqrt.matrix();
  const Matrix& b = iv.n0.basis();
  const Matrix zt = g * b * z.matrix() * b.adjoint() * g;
  const HermMatrix mid = (iv.q_mu + iv.q_M) * 0.5;
  return NonnegRelation(mid + HermMatrix(Matrix(0.5 * zt), 1e-6), tol);
}

HermMatrix extension_to_param(const ExtensionInterval& iv, const NonnegRelation& ext, const Tolerance& tol) {
  if (ext.n() != iv.q.n) throw Error(ErrorCode::DimensionMismatch, "extension_to_param");
  const Matrix& qt = ext.cayley().matrix();
  const double restrict_res = opnorm(qt * iv.q.dom.basis() - iv.q.action);
  if (restrict_res > tol.subspace_gap()) {
    std::ostringstream os;
    os << "Cayley transform does not restrict to Q (residual " << restrict_res << ")";
    throw Error(ErrorCode::NotAnExtension, os.str());
  }
  const Matrix delta = 2.0 * qt - iv.q_mu.matrix() - iv.q_M.matrix();
  const Matrix& b = iv.n0.basis();
  const Matrix gp = pinv(iv.half_gap_sqrt, tol, 1.0).matrix();
  const HermMatrix z(Matrix(b.adjoint() * gp * delta * gp * b), 1e-6);
  const Matrix& g = iv.half_gap_sqrt.matrix();
  const double off = opnorm(delta - g * b * z.matrix() * b.adjoint() * g);
  if (off > tol.subspace_gap()) {
    std::ostringstream os;
    os << "extension has a component outside the interval parameterization (residual " << off << ")";
    throw Error(ErrorCode::NotAnExtension, os.str());
  }
  require_param(iv, z, tol);
  return z;
}

ExtremalityCheck extremality(const ExtensionInterval& iv, const NonnegRelation& ext, const Tolerance& tol) {
  const HermMatrix z = extension_to_param(iv, ext, tol);
  ExtremalityCheck out;
  if (z.dim() > 0) {
    out.unitary_residual = opnorm(z.matrix() * z.matrix() - Matrix::Identity(z.dim(), z.dim()));
  }
  const HermMatrix& qt = ext.cayley();
  const HermMatrix defect = HermMatrix::identity(qt.dim()) - HermMatrix(Matrix(qt.matrix() * qt.matrix()));
  out.short_residual = short_psd(defect, iv.n_def, tol).norm();
  const double thr = tol.subspace_gap();
  const bool by_param = out.unitary_residual <= thr;
  const bool by_short = out.short_residual <= thr;
  if (by_param != by_short) {
    std::ostringstream os;
    os << "extremality criteria disagree: ‖Z² − I‖ = " << out.unitary_residual
       << ", ‖(I − Q̃²)_𝔑‖ = " << out.short_residual;
    throw Error(ErrorCode::CriteriaDisagree, os.str());
  }
  out.extremal = by_param;
  return out;
}

bool is_extremal(const ExtensionInterval& iv, const NonnegRelation& ext, const Tolerance& tol) {
  return extremality(iv, ext, tol).extremal;
}

ParamMeans means_param_map(const HermMatrix& z1, const HermMatrix& z2, const Tolerance& tol) {
  if (z1.dim() != z2.dim()) throw Error(ErrorCode::DimensionMismatch, "means_param_map");
  const HermMatrix id = HermMatrix::identity(z1.dim());
  return {harmonic_psd(id + z1, id + z2, tol) - id, id - harmonic_psd(id - z1, id - z2, tol), (z1 + z2) * 0.5};
}

AhExtensionResult ah_extensions(const ExtensionInterval& iv, const NonnegRelation& s1, const NonnegRelation& s2,
                                const AhOptions& opts, const Tolerance& tol) {
  AhExtensionResult out;
  const bool e1 = is_extremal(iv, s1, tol);
  const bool e2 = is_extremal(iv, s2, tol);
  out.extremal_inputs = e1 && e2;
  out.pair = ah_iterate(s1, s2, opts, tol);
  if (out.extremal_inputs && out.pair.trace.size() > 2) {
    out.stabilization_residual = std::max(out.pair.trace[2].move_a, out.pair.trace[2].move_b);
  }
  if (!out.extremal_inputs && iv.n0.dim() == 1) {
    const double z1 = extension_to_param(iv, s1, tol).matrix()(0, 0).real();
    const double z2 = extension_to_param(iv, s2, tol).matrix()(0, 0).real();
    out.w_predicted = scalar_w(z1, z2);
    out.w_upper = extension_to_param(iv, out.pair.upper, tol).matrix()(0, 0).real();
    out.w_lower = extension_to_param(iv, out.pair.lower, tol).matrix()(0, 0).real();
  }
  return out;
}

namespace {

void require_unit_interval(double z, const char* what) {
  if (!(z >= -1.0 && z <= 1.0)) throw Error(ErrorCode::InvalidArgument, what);
}

void reject_extremal_pair(double z1, double z2) {
  if ((z1 == -1.0 && z2 == 1.0) || (z1 == 1.0 && z2 == -1.0)) {
    throw Error(ErrorCode::ExtremalPair, "(−1, 1) is the extremal pair; its mean is ⟨S_F, S_K⟩");
  }
}

double scalar_h(double a, double b) { return (a + b) == 0.0 ? 0.0 : 2.0 * a * b / (a + b); }

}  // namespace

double scalar_w(double z1, double z2) {
  require_unit_interval(z1, "scalar_w: z1 outside [−1, 1]");
  require_unit_interval(z2, "scalar_w: z2 outside [−1, 1]");
  reject_extremal_pair(z1, z2);
  const double a = std::sqrt((1.0 + z1) * (1.0 + z2));
  const double b = std::sqrt((1.0 - z1) * (1.0 - z2));
  return (a - b) / (a + b);
}

ScalarRecursion scalar_w_by_recursion(double z1, double z2, double tol, int max_steps) {
  require_unit_interval(z1, "scalar_w_by_recursion: z1 outside [−1, 1]");
  require_unit_interval(z2, "scalar_w_by_recursion: z2 outside [−1, 1]");
  reject_extremal_pair(z1, z2);
  ScalarRecursion out;
  int step = 0;
  while (std::abs(z2 - z1) > tol && step < max_steps) {
    const double n1 = scalar_h(1.0 + z1, 1.0 + z2) - 1.0;
    const double n2 = 1.0 - scalar_h(1.0 - z1, 1.0 - z2);
    ++step;
    // The starting pair is arbitrary; from the first step on the lower
    // parameter rises, the upper one falls, and they stay ordered.
    if (n1 > n2 + tol) out.monotone = false;
    if (step >= 2 && (n1 < z1 - tol || n2 > z2 + tol)) out.monotone = false;
    if (n1 == z1 && n2 == z2) {
      z1 = n1;
      z2 = n2;
      break;
    }
    z1 = n1;
    z2 = n2;
  }
  out.w = 0.5 * (z1 + z2);
  out.steps = step;
  return out;
}

BoundaryParam BoundaryParam::inf() { return {std::numeric_limits<double>::infinity()}; }

bool BoundaryParam::is_inf() const { return std::isinf(value) && value > 0.0; }

void BoundaryParam::validate() const {
  if (!(value >= 0.0)) throw Error(ErrorCode::InvalidArgument, "boundary parameter must lie in [0, ∞]");
}

BoundaryParam BoundaryParam::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity" || text == "∞") return inf();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw Error(ErrorCode::Parse, "not a number: " + text);
    BoundaryParam p{v};
    if (!(v >= 0.0)) throw Error(ErrorCode::Parse, "boundary parameter must be ≥ 0: " + text);
    return p;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::Parse, "not a number: " + text);
  }
}

std::string BoundaryParam::str() const {
  if (is_inf()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

BcResult bc_mean(BoundaryParam c, BoundaryParam d, BcKind kind) {
  c.validate();
  d.validate();
  const BoundaryParam inf = BoundaryParam::inf();
  // The table is symmetric; order so that lo ≤ hi.
  const BoundaryParam lo = c.value <= d.value ? c : d;
  const BoundaryParam hi = c.value <= d.value ? d : c;
  auto val = [](double v) { return BcResult{BoundaryParam{v}, std::nullopt}; };

  if (hi.is_inf()) {
    if (lo.is_inf()) return val(inf.value);
    if (lo.value > 0.0) {
      switch (kind) {
        case BcKind::Arith: return val(inf.value);
        case BcKind::Harm: return val(2.0 * lo.value);
        case BcKind::C0: return val(2.0 * lo.value + 1.0);
        case BcKind::Ah: return val(inf.value);
      }
    }
    switch (kind) {
      case BcKind::Arith: return val(inf.value);
      case BcKind::Harm: return val(0.0);
      case BcKind::C0: return val(1.0);
      case BcKind::Ah: return BcResult{inf, std::make_pair(inf, BoundaryParam{0.0})};
    }
  }
  const double x = lo.value;
  const double y = hi.value;
  switch (kind) {
    case BcKind::Arith: return val((x + y) / 2.0);
    case BcKind::Harm: return val(x + y == 0.0 ? 0.0 : 2.0 * x * y / (x + y));
    case BcKind::C0: return val((x + y + 2.0 * x * y) / (2.0 + x + y));
    case BcKind::Ah: return val(std::sqrt(x * y));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mean kind");
}

double z_of_c(BoundaryParam c) {
  c.validate();
  if (c.is_inf()) return -1.0;
  return (1.0 - c.value) / (1.0 + c.value);
}

BoundaryParam c_of_z(double z) {
  require_unit_interval(z, "c_of_z: z outside [−1, 1]");
  if (z == -1.0) return BoundaryParam::inf();
  return BoundaryParam{(1.0 - z) / (1.0 + z)};
}

}  // namespace relcalc
