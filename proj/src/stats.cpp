#include "dmt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dmt/error.hpp"
#include "prob.hpp"

namespace dmt {

namespace {

struct RankedDifferences {
  std::vector<double> ranks;      // rank of |d_i|, average ranks on ties
  std::vector<bool> negative;     // sign of d_i
  std::vector<std::size_t> ties;  // tie-group sizes
};

RankedDifferences rank_differences(const std::vector<double>& diffs) {
  const std::size_t n = diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(diffs[a]) < std::fabs(diffs[b]);
  });

  RankedDifferences out;
  out.ranks.resize(n);
  out.negative.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.negative[i] = diffs[i] < 0.0;

  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n &&
           std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]]))
      ++j;
    // positions i..j share the average rank
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = avg;
    out.ties.push_back(j - i + 1);
    i = j + 1;
  }
  return out;
}

// Exact null distribution of the rank sum, counted over all 2^n sign
// assignments. Ranks are half-integers, so doubling them makes every
// achievable sum an integer and the count table stays small.
double exact_p_at_most(const std::vector<double>& ranks, double w) {
  const std::size_t n = ranks.size();
  long long max_sum = 0;
  std::vector<long long> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = std::llround(ranks[i] * 2.0);
    max_sum += scaled[i];
  }

  std::vector<std::uint64_t> count(static_cast<std::size_t>(max_sum) + 1, 0);
  count[0] = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (long long s = max_sum; s >= scaled[i]; --s)
      count[static_cast<std::size_t>(s)] +=
          count[static_cast<std::size_t>(s - scaled[i])];

  const auto limit = static_cast<long long>(std::floor(w * 2.0 + 1e-9));
  std::uint64_t at_most = 0;
  for (long long s = 0; s <= std::min(limit, max_sum); ++s)
    at_most += count[static_cast<std::size_t>(s)];
  return static_cast<double>(at_most) / std::ldexp(1.0, static_cast<int>(n));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const PairedAccuracies& p) {
  if (p.pairs.empty()) throw Error("wilcoxon: no pairs");
  std::vector<double> diffs;
  for (const auto& [a, b] : p.pairs) {
    if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
      throw Error("wilcoxon: accuracies must be in [0,1]");
    const double d = a - b;
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) throw Error("wilcoxon: all differences are zero");

  const auto ranked = rank_differences(diffs);
  WilcoxonResult result;
  result.n_effective = static_cast<int>(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (ranked.negative[i])
      result.w_minus += ranked.ranks[i];
    else
      result.w_plus += ranked.ranks[i];
  }

  const auto n = static_cast<double>(result.n_effective);
  if (result.n_effective <= 25) {
    result.method = WilcoxonMethod::Exact;
    result.p_one_sided = exact_p_at_most(ranked.ranks, result.w_minus);
  } else {
    result.method = WilcoxonMethod::NormalApprox;
    const double mu = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    for (std::size_t t : ranked.ties) {
      const auto td = static_cast<double>(t);
      var -= (td * td * td - td) / 48.0;
    }
    const double z = (result.w_minus + 0.5 - mu) / std::sqrt(var);
    result.p_one_sided = detail::normal_cdf_impl(z);
  }
  if (result.p_one_sided > 1.0) result.p_one_sided = 1.0;
  return result;
}

double accuracy(const TrainedModel& m, const Dataset& test) {
  if (test.row_count() == 0) throw Error("accuracy: empty test set");
  std::size_t correct = 0;
  for (std::size_t r = 0; r < test.row_count(); ++r)
    if (classify_any(m, test, r).winner == test.label_name(r)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(test.row_count());
}

double normal_cdf(double z) { return detail::normal_cdf_impl(z); }
double normal_quantile(double p) { return detail::normal_quantile_impl(p); }

}  // namespace dmt
