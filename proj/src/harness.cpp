#include "dmt/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "dmt/error.hpp"
#include "dmt/parallel.hpp"
#include "dmt/stats.hpp"
#include "text_util.hpp"

namespace dmt {

namespace {

constexpr std::uint64_t kModelTag = 0x6d6f64656cULL;
constexpr std::uint64_t kSelectTag = 0x73656c6563ULL;
constexpr std::uint64_t kDeviateTag = 0x646576ULL;
constexpr std::uint64_t kFoldTag = 0x666f6c64ULL;

Dataset take_rows(const Dataset& d, const std::vector<std::uint32_t>& rows) {
  Schema schema = d.schema();
  std::vector<ColumnData> columns;
  for (std::size_t c = 0; c < d.attribute_count(); ++c) {
    if (d.is_continuous(c)) {
      const auto& src = d.continuous_column(c);
      std::vector<double> values;
      values.reserve(rows.size());
      for (auto r : rows) values.push_back(src[r]);
      columns.emplace_back(std::move(values));
    } else {
      const auto& src = d.categorical_column(c);
      std::vector<std::int32_t> codes;
      codes.reserve(rows.size());
      for (auto r : rows) codes.push_back(src[r]);
      columns.emplace_back(std::move(codes));
    }
  }
  std::vector<std::int32_t> labels;
  labels.reserve(rows.size());
  for (auto r : rows) labels.push_back(d.labels()[r]);
  return Dataset(std::move(schema), std::move(columns), std::move(labels),
                 std::vector<std::string>(d.classes()), d.name(), d.class_column());
}

double mean_of(const std::vector<TrialResult>& trials) {
  double sum = 0.0;
  for (const auto& t : trials) sum += t.accuracy;
  return trials.empty() ? 0.0 : sum / static_cast<double>(trials.size());
}

std::string normalization_note(const Dataset& train, bool sigma_from_train, bool noised) {
  std::ostringstream out;
  out << "z-score fitted on '" << train.name() << "' after alignment, applied to both sides";
  if (noised)
    out << "; noise sigma: sample stddev (n-1) of the clean "
        << (sigma_from_train ? "training" : "test") << " set";
  return out.str();
}

void append_method_warnings(ExperimentReport& report, const MethodSpec& method) {
  if (method.kind == MethodSpec::Kind::Dmt && method.scheme == VoteScheme::Support)
    report.warnings.push_back(
        method.literal_support
            ? "support weights use the literal misclassified-mass ratio"
            : "support weights use leaf coverage, not the literal misclassified-mass ratio");
}

}  // namespace

double box_muller(double u1, double u2) {
  if (!(u1 > 0.0) || u1 > 1.0) throw Error("box_muller: u1 must be in (0,1]");
  if (!(u2 >= 0.0) || u2 >= 1.0) throw Error("box_muller: u2 must be in [0,1)");
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double normal_deviate(Pcg32& rng) {
  const double u1 = uniform_open_closed(rng);
  const double u2 = uniform_closed_open(rng);
  return box_muller(u1, u2);
}

std::pair<Dataset, std::vector<std::string>> inject_noise(
    const Dataset& test, const NoiseSpec& spec, int trial,
    std::span<const double> sigma_override) {
  if (spec.attribute_fraction < 0.0 || spec.attribute_fraction > 1.0)
    throw Error("inject_noise: attribute fraction must be in [0,1]");

  Dataset noised = test;
  if (spec.attribute_fraction == 0.0) return {std::move(noised), {}};

  std::vector<std::uint32_t> continuous_cols;
  for (std::size_t c = 0; c < test.attribute_count(); ++c)
    if (test.is_continuous(c)) continuous_cols.push_back(static_cast<std::uint32_t>(c));
  if (continuous_cols.empty())
    throw Error("inject_noise: no continuous attributes to noise");

  const auto count = static_cast<std::size_t>(std::floor(
      spec.attribute_fraction * static_cast<double>(continuous_cols.size()) + 0.5));
  if (count == 0) return {std::move(noised), {}};

  std::vector<double> sigma;
  if (sigma_override.empty()) {
    sigma = attribute_stddevs(test);
  } else {
    if (sigma_override.size() != test.attribute_count())
      throw Error("inject_noise: sigma override length mismatch");
    sigma.assign(sigma_override.begin(), sigma_override.end());
  }

  Pcg32 select_rng =
      make_stream(spec.seed, mix64(kSelectTag ^ static_cast<std::uint64_t>(trial)));
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_below(select_rng, continuous_cols.size() - i);
    std::swap(continuous_cols[i], continuous_cols[j]);
  }

  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t col = continuous_cols[i];
    const std::uint64_t stream =
        mix64(mix64(kDeviateTag ^ static_cast<std::uint64_t>(trial)) ^ col);
    Pcg32 rng = make_stream(spec.seed, stream);
    const double s = sigma[col];
    for (std::size_t r = 0; r < noised.row_count(); ++r) {
      const double v = noised.value(r, col);
      if (std::isnan(v)) continue;
      noised.set_value(r, col, v + s * normal_deviate(rng));
    }
    names.push_back(test.attribute(col).name);
  }
  std::sort(names.begin(), names.end());
  return {std::move(noised), std::move(names)};
}

std::string MethodSpec::label() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::C45:
      out << "c45";
      break;
    case Kind::Dmt:
      out << "dmt(k=" << k << ",scheme=" << vote_scheme_name(scheme) << ")";
      break;
    case Kind::Bagging:
      out << "bagging(members=" << members << ")";
      break;
    case Kind::AdaBoost:
      out << "adaboost(rounds=" << rounds << ")";
      break;
    case Kind::RandomForest:
      out << "random_forest(members=" << members << ",subset=";
      if (rsp.forest_subset_size > 0)
        out << rsp.forest_subset_size;
      else
        out << "auto";
      out << ")";
      break;
    case Kind::RandomTree:
      out << "random_tree(members=" << members << ",pool=" << rsp.top_k_pool << ")";
      break;
  }
  return out.str();
}

MethodSpec MethodSpec::parse(std::string_view descriptor) {
  return parse(descriptor, MethodSpec{});
}

MethodSpec MethodSpec::parse(std::string_view descriptor, const MethodSpec& base) {
  MethodSpec spec = base;
  std::string_view name = descriptor;
  std::string_view args;
  if (const auto colon = descriptor.find(':'); colon != std::string_view::npos) {
    name = descriptor.substr(0, colon);
    args = descriptor.substr(colon + 1);
  }

  if (name == "c45") spec.kind = Kind::C45;
  else if (name == "dmt") spec.kind = Kind::Dmt;
  else if (name == "bagging") spec.kind = Kind::Bagging;
  else if (name == "adaboost") spec.kind = Kind::AdaBoost;
  else if (name == "random_forest" || name == "rf") spec.kind = Kind::RandomForest;
  else if (name == "random_tree" || name == "rt") spec.kind = Kind::RandomTree;
  else throw Error("unknown method '" + std::string(name) + "'");

  if (!args.empty()) {
    for (const auto kv : detail::split(args, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos)
        throw Error("bad method parameter '" + std::string(kv) + "' (expected key=value)");
      const auto key = kv.substr(0, eq);
      const auto value = kv.substr(eq + 1);
      if (key == "k") spec.k = static_cast<int>(detail::parse_long_or_throw(value, "k"));
      else if (key == "scheme") spec.scheme = vote_scheme_from_name(value);
      else if (key == "members")
        spec.members = static_cast<int>(detail::parse_long_or_throw(value, "members"));
      else if (key == "rounds")
        spec.rounds = static_cast<int>(detail::parse_long_or_throw(value, "rounds"));
      else if (key == "subset")
        spec.rsp.forest_subset_size =
            static_cast<int>(detail::parse_long_or_throw(value, "subset"));
      else if (key == "pool")
        spec.rsp.top_k_pool = static_cast<int>(detail::parse_long_or_throw(value, "pool"));
      else if (key == "literal-support")
        spec.literal_support = value == "true" || value == "1";
      else
        throw Error("unknown method parameter '" + std::string(key) + "'");
    }
  }
  return spec;
}

TrainedModel train_method(const Dataset& train, const MethodSpec& method,
                          std::uint64_t seed) {
  switch (method.kind) {
    case MethodSpec::Kind::C45:
      return build_tree(train, method.tree);
    case MethodSpec::Kind::Dmt: {
      DmtModel m = build_dmt(train, method.k, method.tree, method.scheme);
      m.literal_support = method.literal_support;
      return m;
    }
    case MethodSpec::Kind::Bagging:
      return build_bagging(train, method.members, method.tree, seed);
    case MethodSpec::Kind::AdaBoost:
      return build_adaboost(train, method.rounds, method.tree, seed);
    case MethodSpec::Kind::RandomForest:
      return build_random_forest(train, method.members, method.rsp, method.tree, seed);
    case MethodSpec::Kind::RandomTree:
      return build_random_tree_ensemble(train, method.members, method.rsp, method.tree,
                                        seed);
  }
  throw Error("unreachable method kind");
}

VoteBreakdown classify_any(const TrainedModel& m, const Dataset& d, std::size_t row) {
  return std::visit(
      [&](const auto& model) -> VoteBreakdown {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, DecisionTree>) {
          const Classification c = classify(model, d, row);
          VoteBreakdown b;
          b.class_weights.assign(model.classes.size(), 0.0);
          b.class_weights[static_cast<std::size_t>(c.class_index)] = 1.0;
          b.winner_index = c.class_index;
          b.winner = c.label;
          b.per_tree.emplace_back(c.label, 1.0);
          return b;
        } else if constexpr (std::is_same_v<T, DmtModel>) {
          return classify_dmt(model, d, row);
        } else {
          return classify_ensemble(model, d, row);
        }
      },
      m);
}

std::vector<int> model_tree_sizes(const TrainedModel& m) {
  return std::visit(
      [](const auto& model) -> std::vector<int> {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, DecisionTree>) {
          return {model.size()};
        } else if constexpr (std::is_same_v<T, DmtModel>) {
          return tree_sizes(model);
        } else {
          return {};
        }
      },
      m);
}

ExperimentReport run_cross_lab(const Dataset& train, const Dataset& test,
                               const MethodSpec& method,
                               const std::optional<NoiseSpec>& spec,
                               std::uint64_t seed, int jobs) {
  auto [tr, te] = align_datasets(train, test);
  auto [trn, stats] = znormalize(tr);
  const Dataset ten = apply_normalization(te, stats);

  const TrainedModel model = train_method(trn, method, mix64(seed ^ kModelTag));

  ExperimentReport report;
  report.protocol = ExperimentReport::Protocol::CrossLab;
  report.train_name = train.name();
  report.test_name = test.name();
  report.method_name = method.label();
  report.seed = seed;
  report.clean_accuracy = accuracy(model, ten);
  report.tree_sizes = model_tree_sizes(model);
  report.normalization_note = normalization_note(train, spec && spec->sigma_from_train,
                                                 spec.has_value());
  append_method_warnings(report, method);

  if (!spec) {
    report.mean_accuracy = report.clean_accuracy;
    return report;
  }
  if (spec->trials < 1) throw Error("run_cross_lab: trials must be >= 1");

  report.noise_fraction = spec->attribute_fraction;
  report.trials = spec->trials;
  const std::vector<double> sigma =
      spec->sigma_from_train ? attribute_stddevs(trn) : attribute_stddevs(ten);

  report.trial_results.resize(static_cast<std::size_t>(spec->trials));
  parallel_for(static_cast<std::size_t>(spec->trials), jobs, [&](std::size_t t) {
    auto [noised, names] = inject_noise(ten, *spec, static_cast<int>(t), sigma);
    report.trial_results[t] = {static_cast<int>(t), std::move(names),
                               accuracy(model, noised)};
  });
  report.mean_accuracy = mean_of(report.trial_results);
  return report;
}

ExperimentReport run_cv(const Dataset& d, int folds, const MethodSpec& method,
                        std::uint64_t seed, int jobs) {
  if (folds < 2) throw Error("run_cv: folds must be >= 2");
  if (d.class_count() < 1 || d.row_count() == 0) throw Error("run_cv: empty dataset");

  ExperimentReport report;
  report.protocol = ExperimentReport::Protocol::CrossValidation;
  report.train_name = d.name();
  report.test_name = d.name();
  report.method_name = method.label();
  report.seed = seed;
  append_method_warnings(report, method);

  // Stratified assignment: shuffle each class's rows, deal them round-robin.
  std::vector<std::vector<std::uint32_t>> by_class(d.class_count());
  for (std::size_t r = 0; r < d.row_count(); ++r)
    by_class[static_cast<std::size_t>(d.labels()[r])].push_back(
        static_cast<std::uint32_t>(r));

  std::size_t min_class = d.row_count();
  for (const auto& rows : by_class) min_class = std::min(min_class, rows.size());
  if (min_class < 2)
    throw Error("run_cv: cannot stratify, a class has fewer than 2 rows");
  int effective_folds = folds;
  if (min_class < static_cast<std::size_t>(folds)) {
    effective_folds = static_cast<int>(min_class);
    report.warnings.push_back("folds reduced from " + std::to_string(folds) + " to " +
                              std::to_string(effective_folds) +
                              " (smallest class has " + std::to_string(min_class) +
                              " rows)");
  }

  Pcg32 rng = make_stream(seed, kFoldTag);
  std::vector<int> fold_of(d.row_count());
  for (auto& rows : by_class) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const std::size_t j = i + uniform_below(rng, rows.size() - i);
      std::swap(rows[i], rows[j]);
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
      fold_of[rows[i]] = static_cast<int>(i % static_cast<std::size_t>(effective_folds));
  }

  report.trials = effective_folds;
  report.trial_results.resize(static_cast<std::size_t>(effective_folds));
  parallel_for(static_cast<std::size_t>(effective_folds), jobs, [&](std::size_t f) {
    std::vector<std::uint32_t> train_rows, test_rows;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
      if (fold_of[r] == static_cast<int>(f))
        test_rows.push_back(static_cast<std::uint32_t>(r));
      else
        train_rows.push_back(static_cast<std::uint32_t>(r));
    }
    const Dataset train = take_rows(d, train_rows);
    const Dataset test = take_rows(d, test_rows);
    auto [trn, stats] = znormalize(train);
    const Dataset ten = apply_normalization(test, stats);
    const TrainedModel model =
        train_method(trn, method, mix64(seed ^ kModelTag ^ static_cast<std::uint64_t>(f)));
    report.trial_results[f] = {static_cast<int>(f), {}, accuracy(model, ten)};
  });

  report.mean_accuracy = mean_of(report.trial_results);
  report.clean_accuracy = report.mean_accuracy;
  report.normalization_note =
      "z-score fitted per fold on the training portion, applied to both portions";
  return report;
}

std::vector<ExperimentReport> run_noise_sweep(const Dataset& train, const Dataset& test,
                                              const std::vector<MethodSpec>& methods,
                                              const std::vector<double>& fractions,
                                              const NoiseSpec& base, std::uint64_t seed,
                                              int jobs) {
  if (methods.empty()) throw Error("run_noise_sweep: no methods");
  for (double f : fractions)
    if (f < 0.0 || f > 1.0) throw Error("run_noise_sweep: fractions must be in [0,1]");
  if (base.trials < 1) throw Error("run_noise_sweep: trials must be >= 1");

  auto [tr, te] = align_datasets(train, test);
  auto [trn, stats] = znormalize(tr);
  const Dataset ten = apply_normalization(te, stats);

  std::vector<TrainedModel> models;
  models.reserve(methods.size());
  for (const auto& method : methods)
    models.push_back(train_method(trn, method, mix64(seed ^ kModelTag)));

  std::vector<double> clean(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) clean[m] = accuracy(models[m], ten);

  const std::vector<double> sigma =
      base.sigma_from_train ? attribute_stddevs(trn) : attribute_stddevs(ten);

  std::vector<ExperimentReport> reports;
  for (double fraction : fractions) {
    NoiseSpec cell = base;
    cell.attribute_fraction = fraction;
    cell.seed = mix64(base.seed ^ std::bit_cast<std::uint64_t>(fraction));

    // method-major result slots, filled trial-parallel
    std::vector<std::vector<TrialResult>> per_method(
        methods.size(), std::vector<TrialResult>(static_cast<std::size_t>(cell.trials)));
    parallel_for(static_cast<std::size_t>(cell.trials), jobs, [&](std::size_t t) {
      auto [noised, names] = inject_noise(ten, cell, static_cast<int>(t), sigma);
      for (std::size_t m = 0; m < methods.size(); ++m)
        per_method[m][t] = {static_cast<int>(t), names, accuracy(models[m], noised)};
    });

    for (std::size_t m = 0; m < methods.size(); ++m) {
      ExperimentReport report;
      report.protocol = ExperimentReport::Protocol::NoiseSweepCell;
      report.train_name = train.name();
      report.test_name = test.name();
      report.method_name = methods[m].label();
      report.seed = seed;
      report.noise_fraction = fraction;
      report.trials = cell.trials;
      report.clean_accuracy = clean[m];
      report.trial_results = std::move(per_method[m]);
      report.mean_accuracy = mean_of(report.trial_results);
      report.tree_sizes = model_tree_sizes(models[m]);
      report.normalization_note =
          normalization_note(train, base.sigma_from_train, true);
      append_method_warnings(report, methods[m]);
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

}  // namespace dmt
