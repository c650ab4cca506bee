#include "relcalc/generate.hpp"

#include "relcalc/random.hpp"

namespace relcalc {

Json generate_instances(const RunConfig& cfg, const GenOptions& opts) {
  cfg.validate();
  const Eigen::Index n = cfg.n;
  if (opts.count < 1) throw Error(ErrorCode::InvalidArgument, "count must be ≥ 1");
  if (opts.rank_deficient && n < 2) throw Error(ErrorCode::InvalidArgument, "rank deficiency needs n ≥ 2");
  if (opts.deficiency < 1 || opts.deficiency >= n) {
    throw Error(ErrorCode::InvalidArgument, "deficiency must lie in [1, n − 1]");
  }

  // One substream per instance kind, so adding instances of one kind leaves
  // the others unchanged.
  Rng psd_rng = Rng::substream(cfg.seed, 1);
  Rng rel_rng = Rng::substream(cfg.seed, 2);
  Rng sub_rng = Rng::substream(cfg.seed, 3);
  Rng sym_rng = Rng::substream(cfg.seed, 4);

  Json psd = Json::array(), relations = Json::array(), subspaces = Json::array(), symmetric = Json::array();
  for (int i = 0; i < opts.count; ++i) {
    const Eigen::Index rank = opts.rank_deficient ? psd_rng.integer(1, static_cast<int>(n) - 1) : n;
    psd.push_back(Json{{"rank", rank}, {"matrix", herm_to_json(random_psd(psd_rng, n, rank))}});
    relations.push_back(relation_to_json(random_nonneg(rel_rng, n)));
    subspaces.push_back(subspace_to_json(random_subspace(sub_rng, n, sub_rng.integer(0, static_cast<int>(n)))));
    symmetric.push_back(Json{{"deficiency", opts.deficiency},
                             {"relation", relation_to_json(random_symmetric(sym_rng, n, opts.deficiency))}});
  }
  return Json{{"prng", kPrngName},   {"seed", cfg.seed},       {"n", n},
              {"psd", psd},          {"relations", relations}, {"subspaces", subspaces},
              {"symmetric", symmetric}};
}

}  // namespace relcalc
