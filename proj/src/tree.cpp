#include "dmt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dmt/error.hpp"
#include "prob.hpp"

namespace dmt {

namespace {

constexpr double kEps = 1e-12;

double log2_pos(double x) { return std::log2(x); }

double entropy_of(std::span<const double> w) {
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double v : w)
    if (v > 0.0) h -= (v / total) * log2_pos(v / total);
  return h < 0.0 ? 0.0 : h;
}

struct ClassOrder {
  // class index -> tie rank; lower rank wins ties
  std::vector<int> rank;
};

ClassOrder make_class_order(const std::vector<double>& priors,
                            const std::vector<std::string>& labels) {
  std::vector<int> order(priors.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (priors[a] != priors[b]) return priors[a] > priors[b];
    return labels[a] < labels[b];
  });
  ClassOrder co;
  co.rank.resize(priors.size());
  for (std::size_t i = 0; i < order.size(); ++i) co.rank[order[i]] = static_cast<int>(i);
  return co;
}

int argmax_ranked(std::span<const double> scores, const ClassOrder& co) {
  int best = -1;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (best < 0 || scores[i] > scores[best] ||
        (scores[i] == scores[static_cast<std::size_t>(best)] &&
         co.rank[i] < co.rank[static_cast<std::size_t>(best)]))
      best = static_cast<int>(i);
  }
  return best;
}

struct NodeCandidate {
  int col = -1;
  bool continuous = false;
  double threshold = 0.0;
  double gain = 0.0;
  double ratio = 0.0;
};

struct BuildContext {
  const Dataset& d;
  std::vector<double> weights;
  TreeParams params;
  SplitStrategy strategy;
  std::vector<double> priors;
  ClassOrder order;
  std::size_t n_classes = 0;

  // scratch for threshold scans
  std::vector<std::pair<double, std::uint32_t>> sorted;
};

std::vector<double> class_weights_of(const BuildContext& ctx,
                                     const std::vector<std::uint32_t>& rows) {
  std::vector<double> counts(ctx.n_classes, 0.0);
  const auto& labels = ctx.d.labels();
  for (auto r : rows) counts[static_cast<std::size_t>(labels[r])] += ctx.weights[r];
  return counts;
}

// Scores a categorical attribute at a node: multiway partition over the
// categories with positive weight.
bool score_categorical(const BuildContext& ctx, const std::vector<std::uint32_t>& rows,
                       int col, NodeCandidate& out) {
  const auto& codes = ctx.d.categorical_column(static_cast<std::size_t>(col));
  const auto& labels = ctx.d.labels();
  const std::size_t n_cats = ctx.d.attribute(static_cast<std::size_t>(col)).categories.size();

  std::vector<double> part_weight(n_cats, 0.0);
  std::vector<double> part_class(n_cats * ctx.n_classes, 0.0);
  std::vector<double> parent(ctx.n_classes, 0.0);
  double known = 0.0;
  for (auto r : rows) {
    const std::int32_t c = codes[r];
    if (c == kMissingCode) continue;
    const double w = ctx.weights[r];
    part_weight[static_cast<std::size_t>(c)] += w;
    part_class[static_cast<std::size_t>(c) * ctx.n_classes +
               static_cast<std::size_t>(labels[r])] += w;
    parent[static_cast<std::size_t>(labels[r])] += w;
    known += w;
  }
  if (known <= 0.0) return false;

  int parts = 0, big_parts = 0;
  for (double w : part_weight) {
    if (w > 0.0) ++parts;
    if (w >= ctx.params.min_leaf_instances) ++big_parts;
  }
  if (parts < 2 || big_parts < 2) return false;

  double info = 0.0, split_info = 0.0;
  for (std::size_t c = 0; c < n_cats; ++c) {
    if (part_weight[c] <= 0.0) continue;
    const double frac = part_weight[c] / known;
    info += frac * entropy_of({&part_class[c * ctx.n_classes], ctx.n_classes});
    split_info -= frac * log2_pos(frac);
  }
  const double gain = entropy_of(parent) - info;
  if (split_info < kEps) return false;

  out = {col, false, 0.0, gain, gain / split_info};
  return true;
}

// Scores a continuous attribute: best boundary threshold by gain, then the
// distinct-value penalty, then the ratio at that threshold.
bool score_continuous(BuildContext& ctx, const std::vector<std::uint32_t>& rows, int col,
                      NodeCandidate& out) {
  const auto& values = ctx.d.continuous_column(static_cast<std::size_t>(col));
  const auto& labels = ctx.d.labels();

  auto& sorted = ctx.sorted;
  sorted.clear();
  for (auto r : rows) {
    const double v = values[r];
    if (!std::isnan(v) && ctx.weights[r] > 0.0) sorted.emplace_back(v, r);
  }
  if (sorted.size() < 2) return false;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.first < b.first;
  });

  std::vector<double> parent(ctx.n_classes, 0.0);
  double known = 0.0;
  for (const auto& [v, r] : sorted) {
    parent[static_cast<std::size_t>(labels[r])] += ctx.weights[r];
    known += ctx.weights[r];
  }
  const double parent_h = entropy_of(parent);

  // Group equal values; candidate cuts sit between groups whose class
  // distributions differ.
  std::vector<double> left(ctx.n_classes, 0.0);
  std::vector<double> group(ctx.n_classes, 0.0);
  std::vector<double> prev_group;
  double left_w = 0.0;
  double best_gain = -std::numeric_limits<double>::infinity();
  double best_threshold = 0.0;
  int distinct = 0;

  auto distributions_differ = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double ta = 0.0, tb = 0.0;
    for (double v : a) ta += v;
    for (double v : b) tb += v;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::fabs(a[i] / ta - b[i] / tb) > kEps) return true;
    return false;
  };

  std::size_t i = 0;
  double prev_value = 0.0;
  while (i < sorted.size()) {
    const double v = sorted[i].first;
    std::fill(group.begin(), group.end(), 0.0);
    double group_w = 0.0;
    while (i < sorted.size() && sorted[i].first == v) {
      const auto r = sorted[i].second;
      group[static_cast<std::size_t>(labels[r])] += ctx.weights[r];
      group_w += ctx.weights[r];
      ++i;
    }
    ++distinct;

    if (!prev_group.empty() && distributions_differ(prev_group, group)) {
      const double right_w = known - left_w;
      if (left_w >= ctx.params.min_leaf_instances &&
          right_w >= ctx.params.min_leaf_instances) {
        std::vector<double> right(ctx.n_classes);
        for (std::size_t k = 0; k < ctx.n_classes; ++k) right[k] = parent[k] - left[k];
        const double info = (left_w / known) * entropy_of(left) +
                            (right_w / known) * entropy_of(right);
        const double gain = parent_h - info;
        if (gain > best_gain + kEps) {
          best_gain = gain;
          double mid = (prev_value + v) / 2.0;
          if (!(mid < v)) mid = prev_value;  // fp guard for adjacent doubles
          best_threshold = mid;
        }
      }
    }

    for (std::size_t k = 0; k < ctx.n_classes; ++k) left[k] += group[k];
    left_w += group_w;
    prev_group = group;
    prev_value = v;
  }

  if (!std::isfinite(best_gain)) return false;
  if (distinct < 2) return false;

  const double penalty = distinct > 2 ? log2_pos(static_cast<double>(distinct - 1)) / known : 0.0;
  const double gain = best_gain - penalty;

  // split info of the chosen threshold
  double lw = 0.0;
  for (const auto& [v, r] : sorted)
    if (v <= best_threshold) lw += ctx.weights[r];
  const double fl = lw / known, fr = 1.0 - fl;
  if (fl <= 0.0 || fr <= 0.0) return false;
  const double split_info = -fl * log2_pos(fl) - fr * log2_pos(fr);
  if (split_info < kEps) return false;

  out = {col, true, best_threshold, gain, gain / split_info};
  return true;
}

bool score_column(BuildContext& ctx, const std::vector<std::uint32_t>& rows, int col,
                  NodeCandidate& out) {
  if (ctx.d.is_continuous(static_cast<std::size_t>(col)))
    return score_continuous(ctx, rows, col, out);
  return score_categorical(ctx, rows, col, out);
}

// C4.5 selection rule over a scored candidate list.
std::optional<NodeCandidate> select_best(const std::vector<NodeCandidate>& scored) {
  double gain_sum = 0.0;
  int positives = 0;
  for (const auto& c : scored)
    if (c.gain > kEps) {
      gain_sum += c.gain;
      ++positives;
    }
  if (positives == 0) return std::nullopt;
  const double mean_gain = gain_sum / positives;

  const NodeCandidate* best = nullptr;
  for (const auto& c : scored) {
    if (c.gain <= kEps || c.gain < mean_gain - kEps) continue;
    if (!best || c.ratio > best->ratio + kEps) best = &c;
  }
  if (!best) return std::nullopt;
  return *best;
}

std::optional<NodeCandidate> select_split(BuildContext& ctx,
                                          const std::vector<std::uint32_t>& rows,
                                          const std::vector<int>& candidates) {
  std::vector<NodeCandidate> scored;
  scored.reserve(candidates.size());

  switch (ctx.strategy.mode) {
    case SplitStrategy::Mode::Best: {
      NodeCandidate c;
      for (int col : candidates)
        if (score_column(ctx, rows, col, c)) scored.push_back(c);
      return select_best(scored);
    }
    case SplitStrategy::Mode::RandomSubset: {
      if (!ctx.strategy.rng) throw Error("random-subset strategy needs a generator");
      std::vector<int> pool = candidates;
      const std::size_t take =
          std::min<std::size_t>(pool.size(),
                                static_cast<std::size_t>(std::max(1, ctx.strategy.subset_size)));
      for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + uniform_below(*ctx.strategy.rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
      }
      NodeCandidate c;
      for (std::size_t i = 0; i < take; ++i)
        if (score_column(ctx, rows, pool[i], c)) scored.push_back(c);
      std::sort(scored.begin(), scored.end(),
                [](const NodeCandidate& a, const NodeCandidate& b) { return a.col < b.col; });
      return select_best(scored);
    }
    case SplitStrategy::Mode::TopPool: {
      if (!ctx.strategy.rng) throw Error("top-pool strategy needs a generator");
      NodeCandidate c;
      for (int col : candidates)
        if (score_column(ctx, rows, col, c) && c.gain > kEps) scored.push_back(c);
      if (scored.empty()) return std::nullopt;
      std::stable_sort(scored.begin(), scored.end(),
                       [](const NodeCandidate& a, const NodeCandidate& b) {
                         if (a.ratio != b.ratio) return a.ratio > b.ratio;
                         return a.col < b.col;
                       });
      const std::size_t pool =
          std::min<std::size_t>(scored.size(),
                                static_cast<std::size_t>(std::max(1, ctx.strategy.pool_size)));
      return scored[uniform_below(*ctx.strategy.rng, pool)];
    }
  }
  return std::nullopt;
}

struct Builder {
  BuildContext& ctx;
  std::vector<DecisionTree::Node> nodes;

  std::int32_t make_leaf(const std::vector<double>& counts) {
    DecisionTree::Node node;
    node.class_counts = counts;
    node.leaf_class = argmax_ranked(counts, ctx.order);
    nodes.push_back(std::move(node));
    return static_cast<std::int32_t>(nodes.size() - 1);
  }

  std::int32_t build(const std::vector<std::uint32_t>& rows, std::vector<int> candidates) {
    const std::vector<double> counts = class_weights_of(ctx, rows);
    double total = 0.0;
    int positive_classes = 0;
    for (double c : counts) {
      total += c;
      if (c > 0.0) ++positive_classes;
    }

    if (positive_classes <= 1 || total < 2.0 * ctx.params.min_leaf_instances ||
        candidates.empty())
      return make_leaf(counts);

    const auto chosen = select_split(ctx, rows, candidates);
    if (!chosen) return make_leaf(counts);

    // Partition rows into branches; missing values follow the branch that
    // received the most known-value weight.
    std::vector<std::vector<std::uint32_t>> branches;
    std::vector<std::string> branch_cats;
    std::vector<std::uint32_t> missing_rows;
    const auto col = static_cast<std::size_t>(chosen->col);

    if (chosen->continuous) {
      branches.resize(2);
      const auto& values = ctx.d.continuous_column(col);
      for (auto r : rows) {
        const double v = values[r];
        if (std::isnan(v))
          missing_rows.push_back(r);
        else
          branches[v <= chosen->threshold ? 0 : 1].push_back(r);
      }
    } else {
      const auto& codes = ctx.d.categorical_column(col);
      const auto& cats = ctx.d.attribute(col).categories;
      std::vector<double> weight_per_code(cats.size(), 0.0);
      for (auto r : rows) {
        if (codes[r] == kMissingCode) continue;
        weight_per_code[static_cast<std::size_t>(codes[r])] += ctx.weights[r];
      }
      std::vector<std::int32_t> branch_of_code(cats.size(), -1);
      for (std::size_t c = 0; c < cats.size(); ++c) {
        if (weight_per_code[c] <= 0.0) continue;
        branch_of_code[c] = static_cast<std::int32_t>(branches.size());
        branches.emplace_back();
        branch_cats.push_back(cats[c]);
      }
      for (auto r : rows) {
        if (codes[r] == kMissingCode)
          missing_rows.push_back(r);
        else
          branches[static_cast<std::size_t>(branch_of_code[static_cast<std::size_t>(codes[r])])]
              .push_back(r);
      }
      // categorical attributes are tested at most once per path
      candidates.erase(std::remove(candidates.begin(), candidates.end(), chosen->col),
                       candidates.end());
    }

    std::int32_t majority = 0;
    double majority_w = -1.0;
    for (std::size_t b = 0; b < branches.size(); ++b) {
      double w = 0.0;
      for (auto r : branches[b]) w += ctx.weights[r];
      if (w > majority_w) {
        majority_w = w;
        majority = static_cast<std::int32_t>(b);
      }
    }
    for (auto r : missing_rows) branches[static_cast<std::size_t>(majority)].push_back(r);

    DecisionTree::Node node;
    node.attribute = ctx.d.attribute(col).name;
    node.continuous = chosen->continuous;
    node.threshold = chosen->threshold;
    node.branch_categories = std::move(branch_cats);
    node.majority_branch = majority;
    node.class_counts = counts;
    const auto index = static_cast<std::int32_t>(nodes.size());
    nodes.push_back(std::move(node));

    std::vector<std::int32_t> children;
    children.reserve(branches.size());
    for (auto& branch_rows : branches) children.push_back(build(branch_rows, candidates));
    nodes[static_cast<std::size_t>(index)].children = std::move(children);
    return index;
  }
};

// Bottom-up subtree replacement using the pessimistic error bound.
double prune_node(std::vector<DecisionTree::Node>& nodes, std::int32_t idx,
                  const ClassOrder& order, double cf) {
  auto& node = nodes[static_cast<std::size_t>(idx)];
  double total = 0.0, top = 0.0;
  for (double c : node.class_counts) total += c;
  const int majority = argmax_ranked(node.class_counts, order);
  if (majority >= 0) top = node.class_counts[static_cast<std::size_t>(majority)];
  const double leaf_errors = (total - top) + detail::added_errors(total, total - top, cf);

  if (node.is_leaf()) return leaf_errors;

  double subtree_errors = 0.0;
  for (auto child : node.children) subtree_errors += prune_node(nodes, child, order, cf);

  if (leaf_errors <= subtree_errors + 1e-9) {
    node.children.clear();
    node.branch_categories.clear();
    node.attribute.clear();
    node.continuous = false;
    node.threshold = 0.0;
    node.majority_branch = 0;
    node.leaf_class = majority;
    return leaf_errors;
  }
  return subtree_errors;
}

// Drops nodes orphaned by pruning; preserves depth-first order.
void compact(DecisionTree& tree) {
  std::vector<DecisionTree::Node> out;
  out.reserve(tree.nodes.size());
  auto copy = [&](auto&& self, std::int32_t idx) -> std::int32_t {
    const auto pos = static_cast<std::int32_t>(out.size());
    out.push_back(std::move(tree.nodes[static_cast<std::size_t>(idx)]));
    auto children = out[static_cast<std::size_t>(pos)].children;
    for (auto& child : children) child = self(self, child);
    out[static_cast<std::size_t>(pos)].children = std::move(children);
    return pos;
  };
  copy(copy, 0);
  tree.nodes = std::move(out);
}

std::vector<double> resolve_weights(const Dataset& d, const TreeParams& params) {
  if (params.instance_weights.empty()) return std::vector<double>(d.row_count(), 1.0);
  if (params.instance_weights.size() != d.row_count())
    throw Error("instance weights length does not match row count");
  for (double w : params.instance_weights)
    if (!(w >= 0.0)) throw Error("instance weights must be nonnegative");
  return params.instance_weights;
}

std::vector<int> resolve_candidates(const Dataset& d,
                                    const std::set<std::string>& candidate_attrs) {
  std::vector<int> cols;
  cols.reserve(candidate_attrs.size());
  for (const auto& name : candidate_attrs) {
    const int col = d.column_index(name);
    if (col < 0) throw Error("unknown candidate attribute '" + name + "'");
    cols.push_back(col);
  }
  std::sort(cols.begin(), cols.end());
  return cols;
}

std::set<std::string> all_attribute_names(const Dataset& d) {
  std::set<std::string> names;
  for (const auto& attr : d.schema()) names.insert(attr.name);
  return names;
}

}  // namespace

double entropy(std::span<const double> class_weights) {
  double total = 0.0;
  for (double w : class_weights) {
    if (!(w >= 0.0)) throw Error("entropy: weights must be nonnegative");
    total += w;
  }
  if (total <= 0.0) throw Error("entropy: all weights are zero");
  return entropy_of(class_weights);
}

int argmax_with_prior_tiebreak(std::span<const double> scores,
                               std::span<const double> priors,
                               const std::vector<std::string>& labels) {
  const ClassOrder order =
      make_class_order(std::vector<double>(priors.begin(), priors.end()), labels);
  return argmax_ranked(scores, order);
}

std::optional<double> gain_ratio(const Dataset& d, std::span<const double> weights,
                                 const SplitTest& test) {
  const int col = d.column_index(test.attribute);
  if (col < 0) throw Error("gain_ratio: unknown attribute '" + test.attribute + "'");
  if (test.continuous != d.is_continuous(static_cast<std::size_t>(col)))
    throw Error("gain_ratio: test kind does not match attribute '" + test.attribute + "'");
  if (test.continuous && !std::isfinite(test.threshold))
    throw Error("gain_ratio: non-finite threshold");

  TreeParams params;
  params.min_leaf_instances = 0;
  if (!weights.empty()) params.instance_weights.assign(weights.begin(), weights.end());
  BuildContext ctx{d,
                   resolve_weights(d, params),
                   params,
                   {},
                   d.class_priors(),
                   {},
                   d.class_count(),
                   {}};

  std::vector<std::uint32_t> rows(d.row_count());
  std::iota(rows.begin(), rows.end(), 0u);

  if (!test.continuous) {
    NodeCandidate c;
    if (!score_categorical(ctx, rows, col, c)) return std::nullopt;
    return c.ratio;
  }

  // Evaluate the supplied threshold directly.
  const auto& values = d.continuous_column(static_cast<std::size_t>(col));
  const auto& labels = d.labels();
  std::vector<double> left(ctx.n_classes, 0.0), right(ctx.n_classes, 0.0);
  double lw = 0.0, rw = 0.0, known = 0.0;
  std::set<double> distinct;
  for (auto r : rows) {
    const double v = values[r];
    const double w = ctx.weights[r];
    if (std::isnan(v) || w <= 0.0) continue;
    known += w;
    distinct.insert(v);
    auto& side = v <= test.threshold ? left : right;
    (v <= test.threshold ? lw : rw) += w;
    side[static_cast<std::size_t>(labels[r])] += w;
  }
  if (lw <= 0.0 || rw <= 0.0) return std::nullopt;

  std::vector<double> parent(ctx.n_classes, 0.0);
  for (std::size_t k = 0; k < ctx.n_classes; ++k) parent[k] = left[k] + right[k];
  const double penalty =
      distinct.size() > 2 ? log2_pos(static_cast<double>(distinct.size() - 1)) / known : 0.0;
  const double gain = entropy_of(parent) -
                      (lw / known) * entropy_of(left) - (rw / known) * entropy_of(right) -
                      penalty;
  const double fl = lw / known;
  const double split_info = -fl * log2_pos(fl) - (1 - fl) * log2_pos(1 - fl);
  if (split_info < kEps) return std::nullopt;
  return gain / split_info;
}

std::vector<ScoredSplit> score_splits(const Dataset& d, std::span<const double> weights,
                                      const std::set<std::string>& candidate_attrs,
                                      const TreeParams& params) {
  TreeParams p = params;
  if (!weights.empty()) p.instance_weights.assign(weights.begin(), weights.end());
  BuildContext ctx{d,      resolve_weights(d, p), p, {}, d.class_priors(),
                   {},     d.class_count(),       {}};
  std::vector<std::uint32_t> rows;
  for (std::size_t r = 0; r < d.row_count(); ++r)
    if (ctx.weights[r] > 0.0) rows.push_back(static_cast<std::uint32_t>(r));

  std::vector<ScoredSplit> out;
  NodeCandidate c;
  for (int col : resolve_candidates(d, candidate_attrs)) {
    if (!score_column(ctx, rows, col, c)) continue;
    out.push_back({{d.attribute(static_cast<std::size_t>(col)).name, c.continuous, c.threshold},
                   c.gain,
                   c.ratio});
  }
  return out;
}

std::optional<SplitTest> best_split(const Dataset& d, std::span<const double> weights,
                                    const std::set<std::string>& candidate_attrs,
                                    const TreeParams& params) {
  TreeParams p = params;
  if (!weights.empty()) p.instance_weights.assign(weights.begin(), weights.end());
  BuildContext ctx{d,      resolve_weights(d, p), p, {}, d.class_priors(),
                   {},     d.class_count(),       {}};
  std::vector<std::uint32_t> rows;
  for (std::size_t r = 0; r < d.row_count(); ++r)
    if (ctx.weights[r] > 0.0) rows.push_back(static_cast<std::uint32_t>(r));

  std::vector<NodeCandidate> scored;
  NodeCandidate c;
  for (int col : resolve_candidates(d, candidate_attrs))
    if (score_column(ctx, rows, col, c)) scored.push_back(c);

  const auto chosen = select_best(scored);
  if (!chosen) return std::nullopt;
  return SplitTest{d.attribute(static_cast<std::size_t>(chosen->col)).name,
                   chosen->continuous, chosen->threshold};
}

DecisionTree build_tree(const Dataset& d, const TreeParams& params,
                        const std::set<std::string>& candidate_attrs,
                        const SplitStrategy& strategy) {
  if (d.row_count() == 0) throw Error("build_tree: empty dataset");
  if (params.min_leaf_instances < 1) throw Error("build_tree: min_leaf_instances must be >= 1");
  if (!(params.pruning_confidence > 0.0))
    throw Error("build_tree: pruning confidence must be positive");

  BuildContext ctx{d,  resolve_weights(d, params), params, strategy, {}, {},
                   d.class_count(), {}};

  std::vector<std::uint32_t> rows;
  double total_weight = 0.0;
  for (std::size_t r = 0; r < d.row_count(); ++r)
    if (ctx.weights[r] > 0.0) {
      rows.push_back(static_cast<std::uint32_t>(r));
      total_weight += ctx.weights[r];
    }
  if (rows.empty()) throw Error("build_tree: total instance weight is zero");

  // Priors follow the (weighted) training distribution; they break every
  // class tie in the tree.
  std::vector<double> priors(ctx.n_classes, 0.0);
  for (auto r : rows) priors[static_cast<std::size_t>(d.labels()[r])] += ctx.weights[r];
  for (double& p : priors) p /= total_weight;
  ctx.priors = priors;
  ctx.order = make_class_order(ctx.priors, d.classes());

  Builder builder{ctx, {}};
  builder.build(rows, resolve_candidates(d, candidate_attrs));

  DecisionTree tree;
  tree.nodes = std::move(builder.nodes);
  tree.classes = d.classes();
  tree.class_priors = std::move(priors);

  if (params.pruning_confidence < 1.0) {
    prune_node(tree.nodes, 0, ctx.order, params.pruning_confidence);
    compact(tree);
  }
  return tree;
}

DecisionTree build_tree(const Dataset& d, const TreeParams& params) {
  return build_tree(d, params, all_attribute_names(d));
}

Classification classify(const DecisionTree& t, const Dataset& d, std::size_t row) {
  if (row >= d.row_count()) throw Error("classify: row index out of range");
  const DecisionTree::Node* node = &t.nodes.front();
  while (!node->is_leaf()) {
    const int col = d.column_index(node->attribute);
    if (col < 0)
      throw Error("classify: dataset lacks attribute '" + node->attribute + "'");
    if (d.is_continuous(static_cast<std::size_t>(col)) != node->continuous)
      throw Error("classify: attribute '" + node->attribute + "' kind mismatch");

    std::int32_t branch;
    if (node->continuous) {
      const double v = d.value(row, static_cast<std::size_t>(col));
      branch = std::isnan(v) ? node->majority_branch : (v <= node->threshold ? 0 : 1);
    } else {
      branch = node->majority_branch;
      const auto tok = d.token(row, static_cast<std::size_t>(col));
      if (!tok.empty()) {
        for (std::size_t b = 0; b < node->branch_categories.size(); ++b)
          if (node->branch_categories[b] == tok) {
            branch = static_cast<std::int32_t>(b);
            break;
          }
      }
    }
    node = &t.nodes[static_cast<std::size_t>(node->children[static_cast<std::size_t>(branch)])];
  }
  return {node->leaf_class, t.classes[static_cast<std::size_t>(node->leaf_class)], node};
}

std::set<std::string> used_attributes(const DecisionTree& t) {
  std::set<std::string> names;
  for (const auto& node : t.nodes)
    if (!node.is_leaf()) names.insert(node.attribute);
  return names;
}

}  // namespace dmt
