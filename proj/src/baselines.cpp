#include "dmt/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "dmt/error.hpp"

namespace dmt {

namespace {

// Stream tags keep the per-purpose generators independent of each other.
constexpr std::uint64_t kMemberTag = 0x6d656d62ULL;

void require_trainable(const Dataset& d, int members, const char* what) {
  if (members < 1) throw Error(std::string(what) + ": member count must be >= 1");
  if (d.row_count() == 0) throw Error(std::string(what) + ": empty dataset");
}

EnsembleModel base_model(const Dataset& d, EnsembleKind kind, std::uint64_t seed) {
  EnsembleModel m;
  m.kind = kind;
  m.classes = d.classes();
  m.class_priors = d.class_priors();
  m.rng_seed = seed;
  return m;
}

Pcg32 member_stream(std::uint64_t seed, std::uint64_t member) {
  return make_stream(seed, mix64(kMemberTag ^ member));
}

}  // namespace

const char* ensemble_kind_name(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::Bagging: return "bagging";
    case EnsembleKind::AdaBoost: return "adaboost";
    case EnsembleKind::RandomForest: return "random_forest";
    case EnsembleKind::RandomTree: return "random_tree";
  }
  return "bagging";
}

std::vector<double> bootstrap_weights(std::size_t n, Pcg32& rng) {
  std::vector<double> weights(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) weights[uniform_below(rng, n)] += 1.0;
  return weights;
}

EnsembleModel build_bagging(const Dataset& d, int members, const TreeParams& params,
                            std::uint64_t seed) {
  require_trainable(d, members, "bagging");
  EnsembleModel model = base_model(d, EnsembleKind::Bagging, seed);
  for (int i = 0; i < members; ++i) {
    Pcg32 rng = member_stream(seed, static_cast<std::uint64_t>(i));
    TreeParams p = params;
    p.instance_weights = bootstrap_weights(d.row_count(), rng);
    model.members.push_back(build_tree(d, p));
    model.member_weights.push_back(1.0);
  }
  return model;
}

EnsembleModel build_adaboost(const Dataset& d, int rounds, const TreeParams& params,
                             std::uint64_t seed) {
  require_trainable(d, rounds, "adaboost");
  EnsembleModel model = base_model(d, EnsembleKind::AdaBoost, seed);
  model.weighted_vote = true;

  const std::size_t n = d.row_count();
  const auto dn = static_cast<double>(n);
  std::vector<double> dist(n, 1.0 / dn);  // kept normalized to sum 1

  for (int t = 0; t < rounds; ++t) {
    TreeParams p = params;
    p.instance_weights.resize(n);
    // the learner sees instance-scaled weights so min-leaf keeps its meaning
    for (std::size_t i = 0; i < n; ++i) p.instance_weights[i] = dist[i] * dn;
    DecisionTree tree = build_tree(d, p);

    double error = 0.0;
    std::vector<bool> correct(n);
    for (std::size_t i = 0; i < n; ++i) {
      correct[i] = classify(tree, d, i).class_index == d.labels()[i];
      if (!correct[i]) error += dist[i];
    }

    if (error >= 0.5) {
      if (model.members.empty()) {
        model.members.push_back(std::move(tree));
        model.member_weights.push_back(1.0);
        model.rounds.push_back({error, 1.0, 1.0});
      }
      break;
    }

    const double clamped = std::max(error, 1e-10);
    const double alpha = std::log((1.0 - clamped) / clamped);
    model.members.push_back(std::move(tree));
    model.member_weights.push_back(alpha);

    const double factor = clamped / (1.0 - clamped);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (correct[i]) dist[i] *= factor;
      sum += dist[i];
    }
    for (double& w : dist) w /= sum;
    double renormed = 0.0;
    for (double w : dist) renormed += w;
    model.rounds.push_back({error, alpha, renormed});

    if (error <= 0.0) break;  // perfect round: keep the member, stop
  }
  return model;
}

EnsembleModel build_random_forest(const Dataset& d, int members,
                                  const RandomSplitParams& rsp, const TreeParams& params,
                                  std::uint64_t seed) {
  require_trainable(d, members, "random_forest");
  const auto m = static_cast<double>(d.attribute_count());
  int subset = rsp.forest_subset_size;
  if (subset <= 0) subset = static_cast<int>(std::floor(std::log2(std::max(2.0, m)))) + 1;
  subset = std::min<int>(subset, static_cast<int>(d.attribute_count()));
  if (subset < 1) throw Error("random_forest: dataset has no attributes");

  EnsembleModel model = base_model(d, EnsembleKind::RandomForest, seed);
  for (int i = 0; i < members; ++i) {
    Pcg32 rng = member_stream(seed, static_cast<std::uint64_t>(i));
    TreeParams p = params;
    p.instance_weights = bootstrap_weights(d.row_count(), rng);
    p.min_leaf_instances = 1;
    p.pruning_confidence = 1.0;  // members stay unpruned

    SplitStrategy strategy;
    strategy.mode = SplitStrategy::Mode::RandomSubset;
    strategy.subset_size = subset;
    strategy.rng = &rng;

    std::set<std::string> all;
    for (const auto& attr : d.schema()) all.insert(attr.name);
    model.members.push_back(build_tree(d, p, all, strategy));
    model.member_weights.push_back(1.0);
  }
  return model;
}

EnsembleModel build_random_tree_ensemble(const Dataset& d, int members,
                                         const RandomSplitParams& rsp,
                                         const TreeParams& params, std::uint64_t seed) {
  require_trainable(d, members, "random_tree");
  if (rsp.top_k_pool < 1) throw Error("random_tree: pool size must be >= 1");

  EnsembleModel model = base_model(d, EnsembleKind::RandomTree, seed);
  for (int i = 0; i < members; ++i) {
    Pcg32 rng = member_stream(seed, static_cast<std::uint64_t>(i));
    SplitStrategy strategy;
    strategy.mode = SplitStrategy::Mode::TopPool;
    strategy.pool_size = rsp.top_k_pool;
    strategy.rng = &rng;

    std::set<std::string> all;
    for (const auto& attr : d.schema()) all.insert(attr.name);
    model.members.push_back(build_tree(d, params, all, strategy));
    model.member_weights.push_back(1.0);
  }
  return model;
}

VoteBreakdown classify_ensemble(const EnsembleModel& e, const Dataset& d, std::size_t row) {
  VoteBreakdown breakdown;
  breakdown.class_weights.assign(e.classes.size(), 0.0);
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    const Classification c = classify(e.members[i], d, row);
    const double w = e.member_weights[i];
    breakdown.class_weights[static_cast<std::size_t>(c.class_index)] += w;
    breakdown.per_tree.emplace_back(c.label, w);
  }
  breakdown.winner_index = argmax_with_prior_tiebreak(breakdown.class_weights,
                                                      e.class_priors, e.classes);
  breakdown.winner = e.classes[static_cast<std::size_t>(breakdown.winner_index)];
  return breakdown;
}

}  // namespace dmt
