#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "dmt/dataset.hpp"
#include "dmt/harness.hpp"

namespace dmt {

/// Accuracies of two methods over the same experimental conditions.
struct PairedAccuracies {
  std::array<std::string, 2> labels;
  std::vector<std::pair<double, double>> pairs;
};

enum class WilcoxonMethod { Exact, NormalApprox };

struct WilcoxonResult {
  int n_effective = 0;  // pairs left after dropping zero differences
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_one_sided = 1.0;
  WilcoxonMethod method = WilcoxonMethod::Exact;
};

/// One-sided signed-rank test of "method A is better than method B".
/// Zero differences are dropped; tied magnitudes get average ranks. Exact
/// distribution up to 25 effective pairs, tie-adjusted normal approximation
/// with continuity correction beyond.
WilcoxonResult wilcoxon_signed_rank(const PairedAccuracies& p);

/// Fraction of rows whose winning vote equals the true label.
double accuracy(const TrainedModel& m, const Dataset& test);

/// Normal CDF and quantile used by the test statistics and pruning bound.
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace dmt
