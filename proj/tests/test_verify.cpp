#include <set>

#include "helpers.hpp"
#include "relcalc/experiments.hpp"
#include "relcalc/verify.hpp"

using namespace relcalc;

namespace {

RunConfig small(int trials) {
  RunConfig cfg;
  cfg.n = 4;
  cfg.trials = trials;
  return cfg;
}

}  // namespace

TEST(Registry, CoversTheInvariants) {
  std::set<std::string> ids;
  for (const PropertyInfo& p : list_properties()) {
    EXPECT_TRUE(ids.insert(p.id).second) << "duplicate id " << p.id;
    EXPECT_FALSE(p.description.empty());
  }
  for (const char* id : {"Frmsm.1", "Frmsm.6", "Frmsm.8", "ythdj.chain", "yfltdct.w", "proinht", "parsumnesh",
                         "shortre2", "hinft", "dikij", "dikij2", "rhfqybt", "krparm", "jcnfy.table"}) {
    EXPECT_TRUE(ids.count(id)) << id;
  }
}

TEST(Registry, GlobMatching) {
  const std::vector<std::string> frmsm = match_properties({"Frmsm.*"});
  EXPECT_EQ(frmsm.size(), 8u);
  EXPECT_EQ(frmsm.front(), "Frmsm.1");
  // Overlapping patterns do not duplicate.
  EXPECT_EQ(match_properties({"Frmsm.*", "Frmsm.6"}).size(), 8u);
  EXPECT_EQ(match_properties({"*"}).size(), list_properties().size());
  try {
    match_properties({"no.such.property"});
    ADD_FAILURE() << "expected UnknownProperty";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownProperty);
  }
  EXPECT_THROW(run_property("no.such.property", small(1)), Error);
}

TEST(Campaign, CountsAndDeterminism) {
  const RunConfig cfg = small(6);
  const std::vector<Verdict> a = verify(cfg, {"Frmsm.*", "proinht"});
  const std::vector<Verdict> b = verify(cfg, {"Frmsm.*", "proinht"});
  ASSERT_EQ(a.size(), 9u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].pass + a[i].fail, cfg.trials);
    EXPECT_TRUE(a[i].ok()) << a[i].property << ": " << a[i].first_failure;
    EXPECT_EQ(a[i].worst_residual, b[i].worst_residual);
  }
  EXPECT_TRUE(all_pass(a));
  // A campaign does not depend on which other campaigns run with it.
  EXPECT_EQ(run_property("proinht", cfg).worst_residual, a.back().worst_residual);
}

TEST(Campaign, TamperedToleranceFails) {
  RunConfig cfg = small(5);
  cfg.tol.psd_slack = 1e-30;
  const Verdict v = run_property("ythdj.chain", cfg);
  EXPECT_EQ(v.pass + v.fail, 5);
  EXPECT_GT(v.fail, 0);
  EXPECT_FALSE(all_pass({v}));
}

TEST(Campaign, Report) {
  const RunConfig cfg = small(3);
  const std::vector<Verdict> v = verify(cfg, {"Frmsm.2"});
  const Json r = verify_report(cfg, v);
  EXPECT_EQ(r.at("prng"), kPrngName);
  EXPECT_EQ(r.at("seed"), cfg.seed);
  EXPECT_TRUE(r.at("all_pass").get<bool>());
  const Json& row = r.at("results").at(0);
  for (const char* key : {"property", "trials", "pass", "worst_residual", "seed"}) EXPECT_TRUE(row.contains(key));
}

TEST(Config, Validation) {
  RunConfig cfg;
  cfg.n = 65;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = RunConfig{};
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = RunConfig{};
  cfg.tol.limit = -1;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Experiments, WeylTwoByTwo) {
  const Json j = Json::parse(R"({
    "A": {"n": 2, "repr": "operator", "A": {"n": 2, "data": [[1, 0], [1, 0], [1, 0], [2, 0]]}},
    "L": {"n": 2, "d": 1, "basis": [[0, 0], [1, 0]]}})");
  const ExperimentKind kind = parse_experiment_kind("weyl-limits");
  const RunConfig cfg;
  const ExperimentResult r = run_experiment(kind, experiment_input_from_json(j, kind), cfg);
  EXPECT_TRUE(r.ok) << r.summary;
  EXPECT_NE(r.csv.find("k,lambda_or_t,resolvent_gap,monotone_ok\n"), std::string::npos);
  EXPECT_NE(r.csv.find("summary_zero,"), std::string::npos);
  EXPECT_NE(r.csv.find("summary_infinity,"), std::string::npos);
  EXPECT_NE(r.summary.find("[-1]"), std::string::npos) << r.summary;
  EXPECT_NE(r.summary.find("[-2]"), std::string::npos) << r.summary;
}

TEST(Experiments, RandomInstancesPass) {
  RunConfig cfg;
  cfg.n = 4;
  for (const char* name : {"ah-trace", "weyl-limits", "short-limit", "regularized"}) {
    const ExperimentKind kind = parse_experiment_kind(name);
    EXPECT_EQ(to_string(kind), name);
    const ExperimentResult r = run_experiment(kind, random_experiment_input(kind, cfg), cfg);
    EXPECT_TRUE(r.ok) << name << "\n" << r.summary;
    EXPECT_EQ(r.csv, run_experiment(kind, random_experiment_input(kind, cfg), cfg).csv);
    EXPECT_EQ(r.csv.find("false"), std::string::npos) << name;
  }
  EXPECT_THROW(parse_experiment_kind("fourier"), Error);
  EXPECT_THROW(experiment_input_from_json(Json::parse(R"({"A": {"n": 1, "repr": "cayley",
      "T": {"n": 1, "data": [[0, 0]]}}})"), ExperimentKind::AhTrace), Error);
}

TEST(Experiments, AhTraceGapDecreases) {
  RunConfig cfg;
  cfg.n = 5;
  const ExperimentKind kind = ExperimentKind::AhTrace;
  const ExperimentResult r = run_experiment(kind, random_experiment_input(kind, cfg), cfg);
  std::istringstream in(r.csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,gap_AB,move_A,move_B,monotone_ok");
  double prev = 1e300, last = 0;
  while (std::getline(in, line) && line.rfind("summary", 0) != 0) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    const double gap = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    EXPECT_LE(gap, prev * (1 + 1e-9) + 1e-12);  // up to the rounding floor
    prev = last = gap;
  }
  EXPECT_LT(last, cfg.tol.limit);
}
