#include <cmath>
#include <set>

#include "helpers.hpp"
#include "relcalc/generate.hpp"
#include "relcalc/io.hpp"

using namespace relcalc;
using namespace relcalc::testing;

TEST(Io, MatrixRoundTrip) {
  Rng rng(3);
  const Matrix m = random_gaussian(rng, 3, 3);
  const Json j = matrix_to_json(m);
  EXPECT_EQ(j.at("n"), 3);
  EXPECT_EQ(j.at("data").size(), 9u);
  EXPECT_EQ(matrix_from_json(j), m);  // 17 significant digits survive the text form
  EXPECT_EQ(matrix_from_json(Json::parse(j.dump())), m);
  const Matrix r = random_gaussian(rng, 4, 2);
  EXPECT_EQ(matrix_from_json(Json{{"rows", 4}, {"cols", 2}, {"data", matrix_to_json(r).at("data")}}), r);
}

TEST(Io, SubspaceAndRelationRoundTrip) {
  Rng rng(5);
  const Subspace s = random_subspace(rng, 5, 2);
  const Subspace s2 = subspace_from_json(Json::parse(subspace_to_json(s).dump()));
  EXPECT_EQ(s2.dim(), 2);
  EXPECT_LT(subspace_gap(s, s2), 1e-14);

  const NonnegRelation a = random_nonneg(rng, 4);
  const NonnegRelation a2 = nonneg_from_json(Json::parse(relation_to_json(a).dump()));
  EXPECT_LT(resolvent_distance(a, a2), 1e-14);
  // The graph encoding converts through cayley().
  const NonnegRelation a3 = nonneg_from_json(Json::parse(relation_to_json(uncayley(a)).dump()));
  EXPECT_LT(resolvent_distance(a, a3), 1e-10);
}

TEST(Io, OperatorRepresentation) {
  const Json j = Json::parse(R"({"n": 2, "repr": "operator",
                                 "A": {"n": 2, "data": [[1, 0], [1, 0], [1, 0], [2, 0]]}})");
  const NonnegRelation a = nonneg_from_json(j);
  EXPECT_LT(dist(operator_matrix(a), HermMatrix(mat2(1, 1, 1, 2))), 1e-12);
}

TEST(Io, Errors) {
  EXPECT_THROW(nonneg_from_json(Json::parse(R"({"n": 2, "repr": "polar"})")), Error);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"n": 2, "data": [[1, 0]]})")), Error);
  try {
    read_json_file("/nonexistent/dir/file.json");
    ADD_FAILURE() << "expected IO";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IO);
  }
  const PartialContraction q{2, Subspace(2, unit(2, 0)), Matrix::Constant(2, 1, cplx(2.0, 0.0))};
  EXPECT_THROW(partial_contraction_from_json(partial_contraction_to_json(q)), Error);
}

TEST(Rng, Determinism) {
  Rng a = Rng::substream(42, 7), b = Rng::substream(42, 7), c = Rng::substream(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs = differs || x != c.normal();
  }
  EXPECT_TRUE(differs);
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    const int k = u.integer(2, 4);
    ASSERT_GE(k, 2);
    ASSERT_LE(k, 4);
  }
}

TEST(Generate, Deterministic) {
  RunConfig cfg;
  cfg.seed = 42;
  cfg.n = 4;
  const std::string first = generate_instances(cfg).dump();
  EXPECT_EQ(first, generate_instances(cfg).dump());
  cfg.seed = 43;
  EXPECT_NE(first, generate_instances(cfg).dump());
  EXPECT_EQ(generate_instances(cfg).at("prng"), kPrngName);
}

TEST(Generate, RankDeficient) {
  RunConfig cfg;
  cfg.n = 5;
  GenOptions opts;
  opts.count = 10;
  opts.rank_deficient = true;
  const Json j = generate_instances(cfg, opts);
  for (const Json& item : j.at("psd")) {
    const HermMatrix s = herm_from_json(item.at("matrix"));
    const Eigen::Index rank = range(s.matrix()).dim();
    EXPECT_LT(rank, 5);
    EXPECT_EQ(rank, item.at("rank").get<Eigen::Index>());
    EXPECT_GE(min_eigenvalue(s), -1e-12);
  }
}

TEST(Generate, DeficiencyOne) {
  RunConfig cfg;
  cfg.n = 4;
  GenOptions opts;
  opts.count = 5;
  const Json j = generate_instances(cfg, opts);
  for (const Json& item : j.at("symmetric")) {
    const LinearRelation s = relation_from_json(item.at("relation"));
    const ExtensionInterval iv = extreme_extensions(symmetric_to_Q(s));
    EXPECT_EQ(iv.n_def.dim(), 1);
    EXPECT_EQ(iv.n0.dim(), 1);
  }
  for (const Json& item : j.at("relations")) {
    const NonnegRelation a = nonneg_from_json(item);
    EXPECT_LE(a.cayley().norm(), 1.0 + 1e-12);
  }
}

TEST(Generate, InvalidOptions) {
  RunConfig cfg;
  cfg.n = 3;
  GenOptions opts;
  opts.deficiency = 3;
  EXPECT_THROW(generate_instances(cfg, opts), Error);
  cfg.n = 0;
  EXPECT_THROW(generate_instances(cfg), Error);
}
