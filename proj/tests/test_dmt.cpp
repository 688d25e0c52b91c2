#include <chrono>
#include <sstream>

#include "doctest.h"
#include "dmt/dmt.hpp"
#include "dmt/error.hpp"
#include "dmt/model_io.hpp"
#include "support/synth.hpp"

using namespace dmt;

namespace {

std::string tree_text(const DecisionTree& t) {
  std::ostringstream os;
  write_tree(os, t);
  return os.str();
}

// stump voting a fixed class, for hand-built vote scenarios
DecisionTree stump(const std::vector<std::string>& classes, int cls,
                   std::vector<double> counts) {
  DecisionTree t;
  t.classes = classes;
  t.class_priors.assign(classes.size(), 1.0 / static_cast<double>(classes.size()));
  DecisionTree::Node n;
  n.leaf_class = cls;
  n.class_counts = std::move(counts);
  t.nodes.push_back(std::move(n));
  return t;
}

}  // namespace

TEST_CASE("k=1 reproduces the single tree") {
  const Dataset d = synth::grouped_redundant(80, 3, 2, 0.4, 99);
  const DmtModel m = build_dmt(d, 1);
  REQUIRE(m.trees.size() == 1);
  CHECK(tree_text(m.trees[0]) == tree_text(build_tree(d)));

  // simple-vote equivalence on every row
  for (std::size_t r = 0; r < d.row_count(); ++r)
    CHECK(classify_dmt(m, d, r).winner == classify(m.trees[0], d, r).label);
}

TEST_CASE("two disjoint separating groups produce two disjoint single-split trees") {
  // a1 and a2 are independent exact copies of the label
  const Dataset d = synth::continuous_dataset(
      {"a1", "a2"},
      {{0, 0, 0, 1, 1, 1, 0, 1}, {0, 0, 0, 1, 1, 1, 0, 1}},
      {"n", "n", "n", "p", "p", "p", "n", "p"});
  const DmtModel m = build_dmt(d, 2);
  REQUIRE(m.trees.size() == 2);
  CHECK(m.trees[0].size() == 3);
  CHECK(m.trees[1].size() == 3);
  const auto used0 = used_attributes(m.trees[0]);
  const auto used1 = used_attributes(m.trees[1]);
  REQUIRE(used0.size() == 1);
  REQUIRE(used1.size() == 1);
  CHECK(*used0.begin() != *used1.begin());
}

TEST_CASE("pairwise disjointness holds on random data") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Dataset d = synth::random_mixed(50 + seed * 17, 8 + seed * 5, seed);
    const DmtModel m = build_dmt(d, 7);
    REQUIRE(m.trees.size() == 7);
    std::set<std::string> seen;
    for (const auto& t : m.trees)
      for (const auto& name : used_attributes(t)) {
        CAPTURE(name);
        CHECK(seen.insert(name).second);  // never used by an earlier tree
      }
  }
}

TEST_CASE("knockout monotonicity: later trees avoid earlier attributes") {
  const Dataset d = synth::grouped_redundant(120, 6, 2, 0.45, 31);
  const DmtModel m = build_dmt(d, 4);
  std::set<std::string> consumed;
  for (const auto& t : m.trees) {
    for (const auto& name : used_attributes(t)) CHECK_FALSE(consumed.count(name));
    const auto used = used_attributes(t);
    consumed.insert(used.begin(), used.end());
  }
}

TEST_CASE("leaf-only trees keep the loop running to k") {
  // one informative attribute: tree 1 uses it, trees 2..k are stumps
  const Dataset d = synth::continuous_dataset(
      {"x"}, {{1, 2, 3, 10, 11, 12}}, {"a", "a", "a", "b", "b", "b"});
  const DmtModel m = build_dmt(d, 3);
  REQUIRE(m.trees.size() == 3);
  CHECK(m.trees[0].size() == 3);
  CHECK(m.trees[1].size() == 1);
  CHECK(m.trees[2].size() == 1);
  CHECK(tree_sizes(m) == std::vector<int>{3, 1, 1});
}

TEST_CASE("build_dmt input validation") {
  const Dataset d = synth::continuous_dataset({"x"}, {{1, 2}}, {"a", "b"});
  CHECK_THROWS_AS(build_dmt(d, 0), Error);
  CHECK_THROWS_AS(build_dmt(Dataset{}, 3), Error);
  const Dataset one_class = synth::continuous_dataset({"x"}, {{1, 2}}, {"a", "a"});
  CHECK_THROWS_AS(build_dmt(one_class, 3), Error);
}

TEST_CASE("laplace weight arithmetic") {
  CHECK(laplace_weight(std::vector<double>{9, 1}, 0, 2) ==
        doctest::Approx(10.0 / 12.0).epsilon(1e-9));
  CHECK(laplace_weight(std::vector<double>{0, 0}, 0, 2) == doctest::Approx(0.5));
  CHECK(laplace_weight(std::vector<double>{1, 1, 0}, 0, 3) == doctest::Approx(0.4));
  // always strictly inside (0, 1)
  for (double tp : {0.0, 1.0, 50.0})
    for (double fp : {0.0, 3.0, 100.0}) {
      const double w = laplace_weight(std::vector<double>{tp, fp}, 0, 2);
      CHECK(w > 0.0);
      CHECK(w < 1.0);
    }
}

TEST_CASE("support weight arithmetic") {
  CHECK(support_weight(std::vector<double>{6, 4}, 100) == doctest::Approx(0.10));
  CHECK(support_weight(std::vector<double>{60, 40}, 100) == doctest::Approx(1.0));
  CHECK(support_weight(std::vector<double>{0, 0}, 100) == doctest::Approx(0.0));
  // literal variant counts only the misclassified mass
  CHECK(support_weight_literal(std::vector<double>{6, 4}, 0, 100) ==
        doctest::Approx(0.04));
}

TEST_CASE("simple vote takes the most frequent prediction") {
  const std::vector<std::string> classes{"n", "y"};
  DmtModel m;
  m.classes = classes;
  m.class_priors = {0.5, 0.5};
  m.training_size = 4;
  m.trees = {stump(classes, 1, {0, 4}), stump(classes, 1, {1, 3}),
             stump(classes, 0, {4, 0})};
  const Dataset probe = synth::continuous_dataset({"x"}, {{0, 0}}, {"n", "y"});
  const VoteBreakdown b = classify_dmt(m, probe, 0);
  CHECK(b.winner == "y");
  CHECK(b.class_weights[0] == doctest::Approx(1.0));
  CHECK(b.class_weights[1] == doctest::Approx(2.0));
  REQUIRE(b.per_tree.size() == 3);
  CHECK(b.per_tree[0].first == "y");
}

TEST_CASE("laplace vote can overturn a simple majority") {
  // leaves: (tp=9,fp=1)->y, (tp=1,fp=1)->n, (tp=0,fp=0)->n
  const std::vector<std::string> classes{"n", "y"};
  DmtModel m;
  m.scheme = VoteScheme::Laplace;
  m.classes = classes;
  m.class_priors = {0.5, 0.5};
  m.training_size = 12;
  m.trees = {stump(classes, 1, {1, 9}), stump(classes, 0, {1, 1}),
             stump(classes, 0, {0, 0})};
  const Dataset probe = synth::continuous_dataset({"x"}, {{0, 0}}, {"n", "y"});
  const VoteBreakdown b = classify_dmt(m, probe, 0);
  CHECK(b.class_weights[1] == doctest::Approx(10.0 / 12.0).epsilon(1e-9));
  CHECK(b.class_weights[0] == doctest::Approx(0.5 + 0.5).epsilon(1e-9));
  CHECK(b.winner == "n");
}

TEST_CASE("vote ties break toward the larger prior") {
  const std::vector<std::string> classes{"n", "y"};
  DmtModel m;
  m.classes = classes;
  m.class_priors = {0.11, 0.89};
  m.training_size = 100;
  m.trees = {stump(classes, 1, {0, 89}), stump(classes, 0, {11, 0})};
  const Dataset probe = synth::continuous_dataset({"x"}, {{0, 0}}, {"n", "y"});
  CHECK(classify_dmt(m, probe, 0).winner == "y");
}

TEST_CASE("winner is invariant under positive rescaling of vote weights") {
  Pcg32 rng = make_stream(7, 70);
  const std::vector<std::string> labels{"a", "b", "c"};
  const std::vector<double> priors{0.5, 0.3, 0.2};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> weights(3);
    for (auto& w : weights) w = uniform_closed_open(rng) * 3.0;
    const double scale = 0.01 + uniform_closed_open(rng) * 40.0;
    std::vector<double> scaled = weights;
    for (auto& w : scaled) w *= scale;
    CHECK(argmax_with_prior_tiebreak(weights, priors, labels) ==
          argmax_with_prior_tiebreak(scaled, priors, labels));
  }
}

TEST_CASE("support scheme uses coverage unless the literal flag is set") {
  const std::vector<std::string> classes{"n", "y"};
  DmtModel m;
  m.scheme = VoteScheme::Support;
  m.classes = classes;
  m.class_priors = {0.5, 0.5};
  m.training_size = 10;
  // tree 1: y-leaf covering 8 rows (2 wrong); tree 2: n-leaf covering 2 rows
  m.trees = {stump(classes, 1, {2, 6}), stump(classes, 0, {2, 0})};
  const Dataset probe = synth::continuous_dataset({"x"}, {{0, 0}}, {"n", "y"});

  const VoteBreakdown coverage = classify_dmt(m, probe, 0);
  CHECK(coverage.class_weights[1] == doctest::Approx(0.8));
  CHECK(coverage.class_weights[0] == doctest::Approx(0.2));
  CHECK(coverage.winner == "y");

  m.literal_support = true;
  const VoteBreakdown literal = classify_dmt(m, probe, 0);
  CHECK(literal.class_weights[1] == doctest::Approx(0.2));  // fp mass of tree 1
  CHECK(literal.class_weights[0] == doctest::Approx(0.0));
  CHECK(literal.winner == "y");
}

TEST_CASE("many strong attribute groups keep every tree small") {
  // microarray-like shape: each group alone separates the classes well,
  // so the knockout finds one small quality tree after another
  const Dataset d = synth::grouped_redundant(156, 10, 2, 0.3, 808, "lab_like");
  const DmtModel m = build_dmt(d, 8);
  const auto sizes = tree_sizes(m);
  REQUIRE(sizes.size() == 8);
  CHECK(sizes[0] <= 5);
  for (int s : sizes) {
    CHECK(s <= 9);
    CHECK(s >= 1);
  }
}

TEST_CASE("build time grows no worse than linearly in k") {
  const Dataset d = synth::grouped_redundant(200, 24, 2, 0.5, 1234);
  const auto time_build = [&](int k) {
    const auto start = std::chrono::steady_clock::now();
    build_dmt(d, k);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };
  time_build(1);  // warm-up
  const double t1 = std::max(time_build(1), 1e-3);
  const double t13 = time_build(13);
  CHECK(t13 <= 13.0 * t1 * 3.0);  // generous constant for timing noise
}
