#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dmt/baselines.hpp"
#include "dmt/dataset.hpp"
#include "dmt/dmt.hpp"
#include "dmt/rng.hpp"
#include "dmt/tree.hpp"

namespace dmt {

/// Additive Gaussian corruption of a fraction of the continuous attributes,
/// re-drawn independently per trial. Sigma comes from the clean data being
/// noised unless sigma_from_train is set.
struct NoiseSpec {
  double attribute_fraction = 0.0;
  int trials = 100;
  std::uint64_t seed = 0;
  bool sigma_from_train = false;
};

struct TrialResult {
  int trial_index = 0;
  std::vector<std::string> noised_attributes;
  double accuracy = 0.0;
};

/// One experimental condition: protocol, resolved method, per-trial (or
/// per-fold) accuracies and their mean.
struct ExperimentReport {
  enum class Protocol { CrossLab, CrossValidation, NoiseSweepCell };

  Protocol protocol = Protocol::CrossLab;
  std::string train_name;
  std::string test_name;
  std::string method_name;
  std::uint64_t seed = 0;
  double noise_fraction = 0.0;
  int trials = 0;
  double clean_accuracy = 0.0;
  double mean_accuracy = 0.0;
  std::vector<TrialResult> trial_results;
  std::vector<int> tree_sizes;  // single tree and knockout models only
  std::string normalization_note;
  std::vector<std::string> warnings;
};

/// Parsed method descriptor: which learner plus its parameters.
struct MethodSpec {
  enum class Kind { C45, Dmt, Bagging, AdaBoost, RandomForest, RandomTree };

  Kind kind = Kind::C45;
  int k = 7;
  VoteScheme scheme = VoteScheme::Simple;
  bool literal_support = false;
  int members = 100;
  int rounds = 100;
  RandomSplitParams rsp;
  TreeParams tree;

  /// Canonical label, e.g. "dmt(k=7,scheme=simple)".
  std::string label() const;

  /// Parses "name" or "name:key=value,key=value". Keys: k, scheme, members,
  /// rounds, subset, pool, literal-support. `base` supplies the values the
  /// descriptor leaves out.
  static MethodSpec parse(std::string_view descriptor);
  static MethodSpec parse(std::string_view descriptor, const MethodSpec& base);
};

using TrainedModel = std::variant<DecisionTree, DmtModel, EnsembleModel>;

/// Standard-normal deviate from two uniforms: sqrt(-2 ln u1) cos(2 pi u2).
/// Requires u1 in (0, 1] and u2 in [0, 1).
double box_muller(double u1, double u2);

/// One Box-Muller deviate from a generator stream.
double normal_deviate(Pcg32& rng);

/// Returns a noised copy of the dataset plus the selected attribute names.
/// Selection and deviates are fully determined by (spec.seed, trial).
/// sigma_override, when non-empty, supplies one stddev per column.
std::pair<Dataset, std::vector<std::string>> inject_noise(
    const Dataset& test, const NoiseSpec& spec, int trial,
    std::span<const double> sigma_override = {});

TrainedModel train_method(const Dataset& train, const MethodSpec& method,
                          std::uint64_t seed);

VoteBreakdown classify_any(const TrainedModel& m, const Dataset& d, std::size_t row);

/// Node counts for reporting; empty for ensembles without the diagnostic.
std::vector<int> model_tree_sizes(const TrainedModel& m);

/// Aligns, normalizes on the training set, trains once, evaluates on the
/// clean test set and on `spec.trials` independently noised copies when a
/// noise spec is given. jobs > 1 evaluates trials concurrently.
ExperimentReport run_cross_lab(const Dataset& train, const Dataset& test,
                               const MethodSpec& method,
                               const std::optional<NoiseSpec>& spec,
                               std::uint64_t seed, int jobs = 1);

/// Stratified cross-validation; folds are reduced (with a recorded warning)
/// when a class has fewer members than folds.
ExperimentReport run_cv(const Dataset& d, int folds, const MethodSpec& method,
                        std::uint64_t seed, int jobs = 1);

/// Methods x fractions grid. Within one fraction every method is evaluated
/// on identical noised copies, so comparisons are noise-matched.
std::vector<ExperimentReport> run_noise_sweep(const Dataset& train, const Dataset& test,
                                              const std::vector<MethodSpec>& methods,
                                              const std::vector<double>& fractions,
                                              const NoiseSpec& base, std::uint64_t seed,
                                              int jobs = 1);

}  // namespace dmt
