#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmt/dataset.hpp"
#include "dmt/dmt.hpp"
#include "dmt/rng.hpp"
#include "dmt/tree.hpp"

namespace dmt {

enum class EnsembleKind { Bagging, AdaBoost, RandomForest, RandomTree };

const char* ensemble_kind_name(EnsembleKind k);

/// Per-node randomization knobs. forest_subset_size 0 means the classical
/// default floor(log2(m)) + 1.
struct RandomSplitParams {
  int forest_subset_size = 0;
  int top_k_pool = 20;
};

/// Per-round AdaBoost diagnostics.
struct AdaBoostRound {
  double error = 0.0;          // weighted training error of the round
  double member_weight = 0.0;  // ln((1 - e) / e)
  double weight_sum = 0.0;     // row-weight total after renormalization
};

/// Randomization-based comparison ensembles sharing the same base learner.
/// Member weights are all 1 except for AdaBoost (weighted aggregation).
struct EnsembleModel {
  EnsembleKind kind = EnsembleKind::Bagging;
  std::vector<DecisionTree> members;
  std::vector<double> member_weights;
  bool weighted_vote = false;
  std::vector<std::string> classes;
  std::vector<double> class_priors;
  std::uint64_t rng_seed = 0;
  std::vector<AdaBoostRound> rounds;  // AdaBoost only
};

/// Bootstrap multiplicities: n draws with replacement, returned as one
/// weight per original row.
std::vector<double> bootstrap_weights(std::size_t n, Pcg32& rng);

EnsembleModel build_bagging(const Dataset& d, int members, const TreeParams& params,
                            std::uint64_t seed);

EnsembleModel build_adaboost(const Dataset& d, int rounds, const TreeParams& params,
                             std::uint64_t seed);

EnsembleModel build_random_forest(const Dataset& d, int members,
                                  const RandomSplitParams& rsp, const TreeParams& params,
                                  std::uint64_t seed);

EnsembleModel build_random_tree_ensemble(const Dataset& d, int members,
                                         const RandomSplitParams& rsp,
                                         const TreeParams& params, std::uint64_t seed);

VoteBreakdown classify_ensemble(const EnsembleModel& e, const Dataset& d, std::size_t row);

}  // namespace dmt
