// relcalc: batch driver for the relation calculus library.
//
//   relcalc gen             seeded random instances as JSON
//   relcalc verify [ids…]   property campaigns (glob patterns), JSON/CSV report
//   relcalc run-experiment  convergence traces as CSV
//   relcalc bc c d          boundary-parameter means table
//
// Exit codes: 0 pass, 1 property or experiment failure, 2 usage/IO/parse error.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relcalc/experiments.hpp"
#include "relcalc/generate.hpp"
#include "relcalc/verify.hpp"

namespace {

using namespace relcalc;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

/// Applies "key=value" overrides; keys rank_rel, psd_slack, limit (alias limit_tol).
void apply_tolerances(Tolerance& tol, const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--tol expects key=value, got " + item);
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "bad tolerance value in " + item);
    }
    if (key == "rank_rel") {
      tol.rank_rel = value;
    } else if (key == "psd_slack") {
      tol.psd_slack = value;
    } else if (key == "limit" || key == "limit_tol") {
      tol.limit = value;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown tolerance key " + key);
    }
  }
}

/// Input, configuration and file errors exit 2; numerical failures exit 1.
bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::IO:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidTolerance:
    case ErrorCode::UnknownProperty:
    case ErrorCode::DimensionMismatch:
      return true;
    default:
      return false;
  }
}

struct Common {
  RunConfig cfg;
  std::vector<std::string> tol_overrides;
};

void add_common(CLI::App* cmd, Common& c, bool campaign) {
  cmd->add_option("--seed", c.cfg.seed, "PRNG seed")->capture_default_str();
  cmd->add_option("--n", c.cfg.n, "ambient dimension (1..64)")->capture_default_str();
  cmd->add_option("--out", c.cfg.out, "output file (default: stdout)");
  if (!campaign) return;
  cmd->add_option("--trials", c.cfg.trials, "trials per property")->capture_default_str();
  cmd->add_option("--tol", c.tol_overrides, "tolerance override key=value (rank_rel, psd_slack, limit)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cmd->add_option("--kmax", c.cfg.k_max, "schedule bound for the 10^±k ladders")->capture_default_str();
}

/// RELCALC_TOL sets rank_rel; explicit --tol flags take precedence.
void finalize(Common& c) {
  if (const char* env = std::getenv("RELCALC_TOL")) apply_tolerances(c.cfg.tol, {std::string("rank_rel=") + env});
  apply_tolerances(c.cfg.tol, c.tol_overrides);
  c.cfg.validate();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int run_gen(Common& c, const GenOptions& opts) {
  finalize(c);
  emit(c.cfg.out, generate_instances(c.cfg, opts).dump(2) + "\n");
  return 0;
}

int run_verify(Common& c, std::vector<std::string> patterns, bool list) {
  if (list) {
    for (const PropertyInfo& p : list_properties()) std::cout << p.id << "\t" << p.description << "\n";
    return 0;
  }
  finalize(c);
  if (patterns.empty()) patterns.push_back("*");
  const std::vector<Verdict> verdicts = verify(c.cfg, patterns);
  for (const Verdict& v : verdicts) {
    std::cerr << (v.ok() ? "PASS " : "FAIL ") << v.property << "  " << v.pass << "/" << v.trials
              << "  worst=" << v.worst_residual;
    if (!v.first_failure.empty()) std::cerr << "  first failure: " << v.first_failure;
    std::cerr << "\n";
  }
  if (c.cfg.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "property,trials,pass,fail,worst_residual,seed\n";
    for (const Verdict& v : verdicts) {
      os << v.property << ',' << v.trials << ',' << v.pass << ',' << v.fail << ',' << v.worst_residual << ','
         << c.cfg.seed << '\n';
    }
    emit(c.cfg.out, os.str());
  } else {
    emit(c.cfg.out, verify_report(c.cfg, verdicts).dump(2) + "\n");
  }
  return all_pass(verdicts) ? 0 : kExitFail;
}

int run_experiment_cmd(Common& c, const std::string& kind_name, const std::string& input_path) {
  finalize(c);
  const ExperimentKind kind = parse_experiment_kind(kind_name);
  const ExperimentInput input = input_path.empty()
                                    ? random_experiment_input(kind, c.cfg)
                                    : experiment_input_from_json(read_json_file(input_path), kind, c.cfg.tol);
  const ExperimentResult r = run_experiment(kind, input, c.cfg);
  emit(c.cfg.out, r.csv);
  // Keep stdout clean for the CSV when no output file is given.
  (c.cfg.out.empty() ? std::cerr : std::cout) << r.summary << (r.ok ? "OK" : "FAILED") << "\n";
  return r.ok ? 0 : kExitFail;
}

std::string bc_text(const BcResult& r) {
  if (r.is_pair()) return "pair(" + r.pair->first.str() + "," + r.pair->second.str() + ")";
  return r.value.str();
}

int run_bc(const std::string& c_text, const std::string& d_text) {
  const BoundaryParam c = BoundaryParam::parse(c_text);
  const BoundaryParam d = BoundaryParam::parse(d_text);
  std::cout << "arith=" << bc_text(bc_mean(c, d, BcKind::Arith)) << " harm=" << bc_text(bc_mean(c, d, BcKind::Harm))
            << " c0=" << bc_text(bc_mean(c, d, BcKind::C0)) << " ah=" << bc_text(bc_mean(c, d, BcKind::Ah)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relcalc: nonnegative selfadjoint relations, shorting and operator means"};
  app.require_subcommand(1);

  Common gen_c, ver_c, exp_c;
  gen_c.cfg.n = 4;

  CLI::App* gen = app.add_subcommand("gen", "write seeded random instances as JSON");
  add_common(gen, gen_c, false);
  GenOptions gen_opts;
  gen->add_option("--count", gen_opts.count, "instances of each kind")->capture_default_str();
  gen->add_flag("--rank-deficient", gen_opts.rank_deficient, "PSD matrices of rank < n");
  gen->add_option("--deficiency", gen_opts.deficiency, "deficiency dimension of the symmetric relations")
      ->capture_default_str();

  CLI::App* ver = app.add_subcommand("verify", "run property campaigns");
  add_common(ver, ver_c, true);
  std::vector<std::string> patterns;
  bool list = false;
  ver->add_option("properties", patterns, "property ids or glob patterns (default: all)");
  ver->add_option("--format", ver_c.cfg.format, "report format: json or csv")->capture_default_str();
  ver->add_flag("--list", list, "list registered properties and exit");

  CLI::App* exp = app.add_subcommand("run-experiment", "write a convergence trace as CSV");
  add_common(exp, exp_c, true);
  std::string kind_name, input_path;
  exp->add_option("kind", kind_name, "ah-trace | weyl-limits | short-limit | regularized")->required();
  exp->add_option("--input", input_path, "JSON with \"A\", and \"B\" or \"L\" (default: seeded random instance)");

  CLI::App* bc = app.add_subcommand("bc", "boundary-parameter means of c, d ∈ [0, ∞]");
  std::string c_text, d_text;
  bc->add_option("c", c_text, "first parameter (number or inf)")->required();
  bc->add_option("d", d_text, "second parameter (number or inf)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return run_gen(gen_c, gen_opts);
    if (*ver) return run_verify(ver_c, patterns, list);
    if (*exp) return run_experiment_cmd(exp_c, kind_name, input_path);
    if (*bc) return run_bc(c_text, d_text);
  } catch (const Error& e) {
    std::cerr << "relcalc: " << e.what() << "\n";
    return is_usage_error(e.code()) ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "relcalc: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
