#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dmt/dataset.hpp"
#include "dmt/rng.hpp"

namespace dmt {

/// Learner knobs. instance_weights, when non-empty, must have one
/// nonnegative entry per row; empty means uniform weight 1.
/// pruning_confidence >= 1 disables pruning.
struct TreeParams {
  int min_leaf_instances = 2;
  double pruning_confidence = 0.25;
  std::vector<double> instance_weights;
};

/// A single node test: either a multiway split over the categories of a
/// categorical attribute or a binary <= / > threshold on a continuous one.
struct SplitTest {
  std::string attribute;
  bool continuous = false;
  double threshold = 0.0;
};

struct ScoredSplit {
  SplitTest test;
  double gain = 0.0;        // information gain, penalized for thresholds
  double gain_ratio = 0.0;  // gain / split information
};

/// How a node picks its split. Best is plain gain-ratio selection;
/// RandomSubset restricts each node to a random attribute subset first;
/// TopPool picks uniformly among the highest-ranked valid tests.
struct SplitStrategy {
  enum class Mode { Best, RandomSubset, TopPool };
  Mode mode = Mode::Best;
  int subset_size = 0;
  int pool_size = 20;
  Pcg32* rng = nullptr;
};

/// Gain-ratio decision tree with multiway categorical splits and binary
/// continuous thresholds. Nodes are index-linked; nodes[0] is the root.
/// Treat built trees as immutable.
class DecisionTree {
 public:
  struct Node {
    std::string attribute;                        // split nodes only
    bool continuous = false;
    double threshold = 0.0;
    std::vector<std::int32_t> children;           // empty => leaf
    std::vector<std::string> branch_categories;   // categorical splits
    std::int32_t majority_branch = 0;
    std::int32_t leaf_class = -1;                 // leaves only
    std::vector<double> class_counts;             // per training class

    bool is_leaf() const { return children.empty(); }
  };

  std::vector<Node> nodes;
  std::vector<std::string> classes;
  std::vector<double> class_priors;

  int size() const { return static_cast<int>(nodes.size()); }
  bool leaf_only() const { return nodes.size() == 1; }
  const Node& root() const { return nodes.front(); }
};

struct Classification {
  std::int32_t class_index = -1;
  std::string label;
  const DecisionTree::Node* leaf = nullptr;
};

/// Entropy in bits of a nonnegative weight vector. Throws when all
/// weights are zero.
double entropy(std::span<const double> class_weights);

/// Argmax with deterministic ties: the larger prior wins, then the
/// lexicographically smaller label.
int argmax_with_prior_tiebreak(std::span<const double> scores,
                               std::span<const double> priors,
                               const std::vector<std::string>& labels);

/// Gain ratio of one concrete test over the whole dataset. Empty weights
/// mean uniform. Returns nullopt when the test does not partition the data
/// into at least two non-empty parts.
std::optional<double> gain_ratio(const Dataset& d, std::span<const double> weights,
                                 const SplitTest& test);

/// Scores every valid candidate test (>= 2 parts, min-leaf respected):
/// one entry per categorical candidate, the best threshold per continuous
/// candidate. Ordered by schema column. Threshold gains carry the
/// distinct-value penalty.
std::vector<ScoredSplit> score_splits(const Dataset& d, std::span<const double> weights,
                                      const std::set<std::string>& candidate_attrs,
                                      const TreeParams& params);

/// C4.5 selection: among positive-gain candidates whose gain reaches the
/// mean gain, the one with the highest gain ratio. nullopt when no
/// candidate qualifies.
std::optional<SplitTest> best_split(const Dataset& d, std::span<const double> weights,
                                    const std::set<std::string>& candidate_attrs,
                                    const TreeParams& params);

/// Builds a pruned tree on the given candidate attributes (all attributes
/// when omitted). Deterministic for a fixed (dataset, params, candidates).
DecisionTree build_tree(const Dataset& d, const TreeParams& params,
                        const std::set<std::string>& candidate_attrs,
                        const SplitStrategy& strategy = {});
DecisionTree build_tree(const Dataset& d, const TreeParams& params = {});

/// Routes one row to a leaf. Missing values and unseen categories follow
/// the majority branch. The dataset may be any table whose attribute names
/// and kinds cover the tree's tests.
Classification classify(const DecisionTree& t, const Dataset& d, std::size_t row);

/// Names of the attributes tested anywhere in the tree.
std::set<std::string> used_attributes(const DecisionTree& t);

}  // namespace dmt
