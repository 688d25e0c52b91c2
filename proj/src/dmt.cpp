#include "dmt/dmt.hpp"

#include <algorithm>

#include "dmt/error.hpp"

namespace dmt {

const char* vote_scheme_name(VoteScheme s) {
  switch (s) {
    case VoteScheme::Simple: return "simple";
    case VoteScheme::Laplace: return "laplace";
    case VoteScheme::Support: return "support";
  }
  return "simple";
}

VoteScheme vote_scheme_from_name(std::string_view name) {
  if (name == "simple") return VoteScheme::Simple;
  if (name == "laplace") return VoteScheme::Laplace;
  if (name == "support") return VoteScheme::Support;
  throw Error("unknown vote scheme '" + std::string(name) + "'");
}

DmtModel build_dmt(const Dataset& d, int k, const TreeParams& params, VoteScheme scheme) {
  if (k < 1) throw Error("build_dmt: k must be >= 1");
  if (d.row_count() == 0) throw Error("build_dmt: empty dataset");
  if (d.class_count() < 2) throw Error("build_dmt: training data needs at least 2 classes");

  DmtModel model;
  model.scheme = scheme;
  model.classes = d.classes();
  model.class_priors = d.class_priors();
  model.training_size = d.row_count();

  std::set<std::string> surviving;
  for (const auto& attr : d.schema()) surviving.insert(attr.name);

  for (int i = 0; i < k; ++i) {
    DecisionTree tree = build_tree(d, params, surviving);
    for (const auto& name : used_attributes(tree)) surviving.erase(name);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double laplace_weight(std::span<const double> class_counts, int predicted_class,
                      int class_count) {
  double tp = 0.0, total = 0.0;
  for (std::size_t i = 0; i < class_counts.size(); ++i) {
    total += class_counts[i];
    if (static_cast<int>(i) == predicted_class) tp = class_counts[i];
  }
  return (tp + 1.0) / (total + static_cast<double>(class_count));
}

double support_weight(std::span<const double> class_counts, std::size_t training_size) {
  double total = 0.0;
  for (double c : class_counts) total += c;
  return total / static_cast<double>(training_size);
}

double support_weight_literal(std::span<const double> class_counts, int predicted_class,
                              std::size_t training_size) {
  double fp = 0.0;
  for (std::size_t i = 0; i < class_counts.size(); ++i)
    if (static_cast<int>(i) != predicted_class) fp += class_counts[i];
  return fp / static_cast<double>(training_size);
}

VoteBreakdown classify_dmt(const DmtModel& m, const Dataset& d, std::size_t row) {
  VoteBreakdown breakdown;
  breakdown.class_weights.assign(m.classes.size(), 0.0);

  for (const auto& tree : m.trees) {
    const Classification c = classify(tree, d, row);
    double w = 1.0;
    switch (m.scheme) {
      case VoteScheme::Simple:
        break;
      case VoteScheme::Laplace:
        w = laplace_weight(c.leaf->class_counts, c.class_index,
                           static_cast<int>(m.classes.size()));
        break;
      case VoteScheme::Support:
        w = m.literal_support
                ? support_weight_literal(c.leaf->class_counts, c.class_index,
                                         m.training_size)
                : support_weight(c.leaf->class_counts, m.training_size);
        break;
    }
    breakdown.class_weights[static_cast<std::size_t>(c.class_index)] += w;
    breakdown.per_tree.emplace_back(c.label, w);
  }

  breakdown.winner_index = argmax_with_prior_tiebreak(breakdown.class_weights,
                                                      m.class_priors, m.classes);
  breakdown.winner = m.classes[static_cast<std::size_t>(breakdown.winner_index)];
  return breakdown;
}

std::vector<int> tree_sizes(const DmtModel& m) {
  std::vector<int> sizes;
  sizes.reserve(m.trees.size());
  for (const auto& tree : m.trees) sizes.push_back(tree.size());
  return sizes;
}

}  // namespace dmt
