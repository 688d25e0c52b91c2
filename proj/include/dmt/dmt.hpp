#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dmt/dataset.hpp"
#include "dmt/tree.hpp"

namespace dmt {

enum class VoteScheme { Simple, Laplace, Support };

const char* vote_scheme_name(VoteScheme s);
VoteScheme vote_scheme_from_name(std::string_view name);

/// k attribute-disjoint trees built by knockout: each tree is trained on
/// the attributes no earlier tree used. Trees are in construction order;
/// the first one sees the full attribute set.
struct DmtModel {
  std::vector<DecisionTree> trees;
  VoteScheme scheme = VoteScheme::Simple;
  std::vector<std::string> classes;
  std::vector<double> class_priors;
  std::size_t training_size = 0;
  /// Weighs support votes by misclassified leaf mass instead of leaf
  /// coverage. Off by default; see README.
  bool literal_support = false;
};

struct VoteBreakdown {
  std::vector<double> class_weights;  // indexed like the model's classes
  std::int32_t winner_index = -1;
  std::string winner;
  std::vector<std::pair<std::string, double>> per_tree;  // (label, weight)
};

DmtModel build_dmt(const Dataset& d, int k, const TreeParams& params = {},
                   VoteScheme scheme = VoteScheme::Simple);

/// Smoothed leaf precision (tp + 1) / (tp + fp + c) for a leaf predicting
/// predicted_class; always strictly inside (0, 1).
double laplace_weight(std::span<const double> class_counts, int predicted_class,
                      int class_count);

/// Leaf coverage fraction: total leaf count over the training size.
double support_weight(std::span<const double> class_counts, std::size_t training_size);

/// Misclassified leaf mass over the training size.
double support_weight_literal(std::span<const double> class_counts, int predicted_class,
                              std::size_t training_size);

VoteBreakdown classify_dmt(const DmtModel& m, const Dataset& d, std::size_t row);

/// Node counts of the member trees, in construction order.
std::vector<int> tree_sizes(const DmtModel& m);

}  // namespace dmt
