#include "relcalc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "relcalc/random.hpp"
#include "relcalc/shorting.hpp"

namespace relcalc {

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::AhTrace, "ah-trace"},
    {ExperimentKind::WeylLimits, "weyl-limits"},
    {ExperimentKind::ShortLimit, "short-limit"},
    {ExperimentKind::Regularized, "regularized"},
};

std::string num(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", std::abs(x) < 1e-14 ? 0.0 : x);
  return buf;
}

/// Matrix rows for the terminal; imaginary parts are shown only when present.
std::string format_matrix(const Matrix& m, const std::string& indent) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const cplx z = m(i, j);
      if (j) os << ", ";
      os << short_num(z.real());
      if (std::abs(z.imag()) > 1e-12) os << (z.imag() < 0 ? "-" : "+") << short_num(std::abs(z.imag())) << "i";
    }
    os << "]\n";
  }
  return os.str();
}

std::string describe(const NonnegRelation& r, const Tolerance& tol, const std::string& indent) {
  if (is_operator(r, tol)) return format_matrix(operator_matrix(r, tol).matrix(), indent);
  std::ostringstream os;
  os << indent << "relation with dim mul = " << mul_part(r, tol).dim() << "; Cayley transform:\n"
     << format_matrix(r.cayley().matrix(), indent);
  return os.str();
}

const char* flag(bool b) { return b ? "true" : "false"; }

bool pd_operator(const NonnegRelation& r, const Tolerance& tol) {
  if (!is_operator(r, tol)) return false;
  const HermMatrix m = operator_matrix(r, tol);
  return eigh(m).values.minCoeff() > tol.rank_rel * std::max(1.0, m.norm());
}

Subspace random_proper_subspace(Rng& rng, Eigen::Index n) {
  if (n < 2) return Subspace::full(n);
  return random_subspace(rng, n, rng.integer(1, static_cast<int>(n) - 1));
}

void require(bool present, const char* what) {
  if (!present) throw Error(ErrorCode::Parse, std::string("experiment input lacks \"") + what + "\"");
}

ExperimentResult ah_trace(const ExperimentInput& in, const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  const MeanPair p = ah_iterate(in.a, *in.b, {}, tol);
  std::ostringstream csv;
  csv << "step,gap_AB,move_A,move_B,monotone_ok\n";
  bool monotone = true;
  for (const AhStep& s : p.trace) {
    csv << s.step << ',' << num(s.gap_ab) << ',' << num(s.move_a) << ',' << num(s.move_b) << ','
        << flag(s.monotone_ok) << '\n';
    monotone = monotone && s.monotone_ok;
  }
  const double final_gap = p.trace.empty() ? resolvent_distance(p.upper, p.lower) : p.trace.back().gap_ab;
  // For a positive definite pair the common limit is (A^{-1} # B^{-1})^{-1}.
  double residual = std::nan("");
  if (pd_operator(in.a, tol) && pd_operator(*in.b, tol)) {
    const HermMatrix expected =
        pinv(geometric_mean_pd(pinv(operator_matrix(in.a, tol), tol), pinv(operator_matrix(*in.b, tol), tol), tol), tol);
    residual = resolvent_distance(p.upper, NonnegRelation::from_operator(expected, tol));
  }
  csv << "summary," << num(final_gap) << ',' << num(residual) << ",," << flag(monotone) << '\n';

  ExperimentResult out;
  out.ok = p.converged && monotone && (std::isnan(residual) || residual <= tol.limit);
  std::ostringstream s;
  s << "ah-trace: " << p.trace.size() << " steps, converged=" << flag(p.converged)
    << ", coincide=" << flag(p.coincide) << ", final gap_AB=" << num(final_gap) << "\n";
  if (!std::isnan(residual)) s << "  residual to (A^{-1} # B^{-1})^{-1}: " << num(residual) << "\n";
  s << "  A_inf:\n" << describe(p.upper, tol, "    ");
  if (!p.coincide) s << "  B_inf:\n" << describe(p.lower, tol, "    ");
  out.summary = s.str();
  out.csv = csv.str();
  return out;
}

void write_trace(std::ostringstream& csv, const LimitResult& r, bool& monotone) {
  for (const TraceRow& row : r.trace) {
    csv << row.k << ',' << num(row.point) << ',' << num(row.resolvent_gap) << ',' << flag(row.monotone_ok) << '\n';
    monotone = monotone && row.monotone_ok;
  }
}

ExperimentResult weyl_trace(const ExperimentInput& in, const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  const Subspace& l = *in.l;
  const WeylLimits w = weyl_limits(in.a, l, tol, ladder(cfg.k_max));
  const NonnegRelation zero_target = restrict_reducing(short_rel(in.a, l, tol), l, tol);
  const NonnegRelation inf_target = rel_inverse(restrict_reducing(antishort(in.a, l, tol), l, tol));
  const double res_zero = resolvent_distance(w.at_zero.relation, zero_target);
  const double res_inf = resolvent_distance(w.at_infinity.relation, inf_target);

  std::ostringstream csv;
  csv << "k,lambda_or_t,resolvent_gap,monotone_ok\n";
  bool mono_zero = true, mono_inf = true;
  write_trace(csv, w.at_zero, mono_zero);
  write_trace(csv, w.at_infinity, mono_inf);
  const auto last_point = [](const LimitResult& r) { return r.trace.empty() ? std::nan("") : r.trace.back().point; };
  csv << "summary_zero," << num(last_point(w.at_zero)) << ',' << num(res_zero) << ',' << flag(mono_zero) << '\n';
  csv << "summary_infinity," << num(last_point(w.at_infinity)) << ',' << num(res_inf) << ',' << flag(mono_inf)
      << '\n';

  ExperimentResult out;
  out.ok = w.at_zero.converged && w.at_infinity.converged && mono_zero && mono_inf && res_zero <= tol.limit &&
           res_inf <= tol.limit;
  std::ostringstream s;
  s << "weyl-limits: dim L = " << l.dim() << "\n";
  // The limit itself comes from the closed forms; the trace shows how close
  // the last schedule point gets to it.
  const auto limit_text = [&](const LimitResult& r, const NonnegRelation& target) {
    std::ostringstream t;
    if (is_operator(target, tol)) {
      t << "    limit:\n" << format_matrix((-operator_matrix(target, tol)).matrix(), "      ");
    } else {
      t << "    limit: −M tends to a relation with dim mul = " << mul_part(target, tol).dim() << "\n";
    }
    if (r.matrix) t << "    last iterate:\n" << format_matrix(r.matrix->matrix(), "      ");
    return t.str();
  };
  s << "  M(λ), λ↑0 (converged=" << flag(w.at_zero.converged) << ", residual " << num(res_zero) << "):\n"
    << limit_text(w.at_zero, zero_target);
  s << "  M(λ), λ↓−∞ (converged=" << flag(w.at_infinity.converged) << ", residual " << num(res_inf) << "):\n"
    << limit_text(w.at_infinity, inf_target);
  out.summary = s.str();
  out.csv = csv.str();
  return out;
}

ExperimentResult short_trace(const ExperimentInput& in, const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  const LimitResult r = short_by_parallel_limit(in.a, *in.l, ladder(cfg.k_max), tol);
  const NonnegRelation target = short_rel(in.a, *in.l, tol);
  const double residual = resolvent_distance(r.relation, target);
  std::ostringstream csv;
  csv << "k,lambda_or_t,resolvent_gap,monotone_ok\n";
  bool monotone = true;
  write_trace(csv, r, monotone);
  csv << "summary," << num(r.trace.empty() ? std::nan("") : r.trace.back().point) << ',' << num(residual) << ','
      << flag(monotone) << '\n';

  ExperimentResult out;
  out.ok = monotone && residual <= tol.limit;
  std::ostringstream s;
  s << "short-limit: A : tP_L for t = 10^1..10^" << cfg.k_max << ", monotone=" << flag(monotone)
    << ", residual to A_L " << num(residual) << "\n  A_L:\n"
    << describe(target, tol, "    ");
  out.summary = s.str();
  out.csv = csv.str();
  return out;
}

ExperimentResult regularized_trace(const ExperimentInput& in, const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  const std::vector<int> schedule = ladder(cfg.k_max);
  const RegularizedResult r = regularized_parallel_oracle(in.a, *in.b, schedule, tol);
  const NonnegRelation target = parallel_sum_rel(in.a, *in.b, tol);
  const double residual = resolvent_distance(r.relation, target);
  std::ostringstream csv;
  csv << "k,lambda_or_t,resolvent_gap,monotone_ok\n";
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    const int k = i < schedule.size() ? schedule[i] : static_cast<int>(i) + 1;
    const double gap = i < r.gap_to_previous.size() ? r.gap_to_previous[i] : std::nan("");
    const bool mono = i < r.step_monotone.size() ? r.step_monotone[i] : r.monotone;
    csv << k << ',' << num(r.eps[i]) << ',' << num(gap) << ',' << flag(mono) << '\n';
  }
  csv << "summary," << num(r.eps.empty() ? std::nan("") : r.eps.back()) << ',' << num(residual) << ','
      << flag(r.monotone) << '\n';

  ExperimentResult out;
  out.ok = r.monotone && residual <= tol.limit;
  std::ostringstream s;
  s << "regularized: H_ε for ε = 10^-1..10^-" << cfg.k_max << ", monotone=" << flag(r.monotone)
    << ", residual to A : B " << num(residual) << "\n  A : B:\n"
    << describe(target, tol, "    ");
  out.summary = s.str();
  out.csv = csv.str();
  return out;
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const KindName& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown experiment \"" + name + "\" (expected ah-trace, weyl-limits, short-limit or regularized)");
}

std::string to_string(ExperimentKind kind) {
  for (const KindName& k : kKinds) {
    if (kind == k.kind) return k.name;
  }
  return "unknown";
}

ExperimentInput experiment_input_from_json(const Json& j, ExperimentKind kind, const Tolerance& tol) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "experiment input must be a JSON object");
  require(j.contains("A"), "A");
  ExperimentInput in{nonneg_from_json(j.at("A"), tol), std::nullopt, std::nullopt};
  if (kind == ExperimentKind::AhTrace || kind == ExperimentKind::Regularized) {
    require(j.contains("B"), "B");
    in.b = nonneg_from_json(j.at("B"), tol);
    if (in.b->n() != in.a.n()) throw Error(ErrorCode::DimensionMismatch, "A and B differ in dimension");
  } else {
    require(j.contains("L"), "L");
    in.l = subspace_from_json(j.at("L"));
    if (in.l->ambient() != in.a.n()) throw Error(ErrorCode::DimensionMismatch, "L is not a subspace of dom A");
  }
  return in;
}

ExperimentInput random_experiment_input(ExperimentKind kind, const RunConfig& cfg) {
  Rng rng = Rng::substream(cfg.seed, 0x45585000u + static_cast<std::uint64_t>(kind));
  const Eigen::Index n = cfg.n;
  switch (kind) {
    case ExperimentKind::AhTrace: {
      NonnegRelation a = NonnegRelation::from_operator(random_pd(rng, n, 1e2), cfg.tol);
      NonnegRelation b = NonnegRelation::from_operator(random_pd(rng, n, 1e2), cfg.tol);
      return {a, b, std::nullopt};
    }
    case ExperimentKind::WeylLimits: {
      NonnegRelation a = random_bounded(rng, n);
      return {a, std::nullopt, random_proper_subspace(rng, n)};
    }
    case ExperimentKind::ShortLimit: {
      NonnegRelation a = random_nonneg(rng, n);
      return {a, std::nullopt, random_proper_subspace(rng, n)};
    }
    case ExperimentKind::Regularized: {
      NonnegRelation a = random_nonneg(rng, n);
      NonnegRelation b = random_nonneg(rng, n);
      return {a, b, std::nullopt};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown experiment kind");
}

ExperimentResult run_experiment(ExperimentKind kind, const ExperimentInput& input, const RunConfig& cfg) {
  cfg.validate();
  switch (kind) {
    case ExperimentKind::AhTrace:
      require(input.b.has_value(), "B");
      return ah_trace(input, cfg);
    case ExperimentKind::WeylLimits:
      require(input.l.has_value(), "L");
      return weyl_trace(input, cfg);
    case ExperimentKind::ShortLimit:
      require(input.l.has_value(), "L");
      return short_trace(input, cfg);
    case ExperimentKind::Regularized:
      require(input.b.has_value(), "B");
      return regularized_trace(input, cfg);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown experiment kind");
}

}  // namespace relcalc
