#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dmt/dataset.hpp"
#include "dmt/error.hpp"
#include "dmt/harness.hpp"
#include "dmt/model_io.hpp"
#include "dmt/report.hpp"
#include "dmt/stats.hpp"
#include "dmt/version.hpp"
#include "text_util.hpp"

namespace {

using dmt::Error;
using dmt::MethodSpec;

// Everything a run needs, with every default materialized. The echo of
// this structure is sufficient to reproduce the run byte for byte.
struct Options {
  std::string command;
  std::string train_path;
  std::string test_path;
  std::string model_path;
  std::string norm_path;
  std::string input_path;
  std::string class_col = "class";
  std::vector<std::string> methods;
  int k = 7;
  std::string scheme = "simple";
  bool support_literal = false;
  int members = 100;
  int rounds = 100;
  int subset = 0;
  int pool = 20;
  double noise_frac = -1.0;  // <0: no noise
  std::vector<double> fractions;
  int trials = 100;
  bool sigma_from_train = false;
  int folds = 10;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;
  std::string out_path;
  std::string format = "structured";
  std::string col_a;
  std::string col_b;
};

std::string resolved_config(const Options& o) {
  std::ostringstream os;
  os << "command " << o.command << '\n';
  if (!o.train_path.empty()) os << "train " << dmt::detail::quote(o.train_path) << '\n';
  if (!o.test_path.empty()) os << "test " << dmt::detail::quote(o.test_path) << '\n';
  if (!o.model_path.empty()) os << "model " << dmt::detail::quote(o.model_path) << '\n';
  if (!o.norm_path.empty()) os << "norm " << dmt::detail::quote(o.norm_path) << '\n';
  if (!o.input_path.empty()) os << "input " << dmt::detail::quote(o.input_path) << '\n';
  os << "class-col " << dmt::detail::quote(o.class_col) << '\n';
  for (const auto& m : o.methods) os << "method " << dmt::detail::quote(m) << '\n';
  os << "k " << o.k << '\n';
  os << "scheme " << o.scheme << '\n';
  os << "support-literal " << (o.support_literal ? "true" : "false") << '\n';
  os << "members " << o.members << '\n';
  os << "rounds " << o.rounds << '\n';
  os << "subset " << o.subset << '\n';
  os << "pool " << o.pool << '\n';
  if (o.noise_frac >= 0.0)
    os << "noise-frac " << dmt::detail::format_double(o.noise_frac) << '\n';
  if (!o.fractions.empty()) {
    os << "fractions";
    for (double f : o.fractions) os << ' ' << dmt::detail::format_double(f);
    os << '\n';
  }
  os << "trials " << o.trials << '\n';
  os << "sigma-from-train " << (o.sigma_from_train ? "true" : "false") << '\n';
  os << "folds " << o.folds << '\n';
  os << "seed " << o.seed << '\n';
  os << "jobs " << o.jobs << '\n';
  if (!o.out_path.empty()) os << "out " << dmt::detail::quote(o.out_path) << '\n';
  os << "format " << o.format << '\n';
  if (!o.col_a.empty()) os << "col-a " << dmt::detail::quote(o.col_a) << '\n';
  if (!o.col_b.empty()) os << "col-b " << dmt::detail::quote(o.col_b) << '\n';
  os << "version " << dmt::kVersion << '\n';
  return os.str();
}

void materialize_seed(Options& o) {
  if (o.seed_given) return;
  std::random_device rd;
  o.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed not given; using " << o.seed << "\n";
}

void write_config_echo(const Options& o) {
  if (o.out_path.empty()) return;
  dmt::write_file_atomic(o.out_path + ".config", resolved_config(o));
}

MethodSpec method_from_flags(const Options& o) {
  MethodSpec base;
  base.k = o.k;
  base.scheme = dmt::vote_scheme_from_name(o.scheme);
  base.literal_support = o.support_literal;
  base.members = o.members;
  base.rounds = o.rounds;
  base.rsp.forest_subset_size = o.subset;
  base.rsp.top_k_pool = o.pool;
  return base;
}

std::vector<MethodSpec> parse_methods(const Options& o) {
  if (o.methods.empty()) throw Error("no --method given");
  // flat flags supply defaults, inline descriptor parameters override them
  std::vector<MethodSpec> specs;
  for (const auto& m : o.methods)
    specs.push_back(MethodSpec::parse(m, method_from_flags(o)));
  return specs;
}

void emit(const Options& o, const std::string& content) {
  if (o.out_path.empty()) {
    std::cout << content;
    // keep the run reproducible even without an output file
    std::istringstream cfg(resolved_config(o));
    std::string line;
    while (std::getline(cfg, line)) std::cerr << "config: " << line << '\n';
  } else {
    dmt::write_file_atomic(o.out_path, content);
    write_config_echo(o);
  }
}

int cmd_train(Options& o) {
  materialize_seed(o);
  if (o.out_path.empty()) throw Error("train needs --out");
  const dmt::Dataset raw = dmt::load_dataset(o.train_path, o.class_col);
  auto [train, stats] = dmt::znormalize(raw);
  const MethodSpec method = parse_methods(o).front();
  const dmt::TrainedModel model =
      dmt::train_method(train, method, dmt::mix64(o.seed ^ 0x6d6f64656cULL));
  dmt::save_model(model, o.out_path);
  dmt::save_normalization(stats, o.out_path + ".norm");
  write_config_echo(o);
  std::cerr << "model written to " << o.out_path << " (+ .norm, .config)\n";
  return 0;
}

int cmd_predict(Options& o) {
  materialize_seed(o);
  const dmt::TrainedModel model = dmt::load_model(o.model_path);
  dmt::Dataset test = dmt::load_dataset(o.test_path, o.class_col);

  std::string norm_path = o.norm_path;
  if (norm_path.empty() &&
      std::filesystem::exists(o.model_path + ".norm"))
    norm_path = o.model_path + ".norm";
  if (!norm_path.empty()) {
    const auto stats = dmt::load_normalization(norm_path);
    // attributes unknown to the training stats pass through unscaled; the
    // model cannot test them, and a genuinely missing tested attribute
    // still fails at classification time by name
    dmt::NormalizationStats used;
    for (const auto& attr : test.schema())
      if (attr.kind == dmt::AttrKind::Continuous) {
        const auto* e = stats.find(attr.name);
        used.entries.push_back(e ? *e : dmt::NormalizationStats::Entry{attr.name, 0.0, 1.0});
      }
    test = dmt::apply_normalization(test, used);
  }

  const std::vector<std::string>* classes = nullptr;
  std::visit([&](const auto& m) { classes = &m.classes; }, model);

  std::ostringstream out;
  {
    std::istringstream cfg(resolved_config(o));
    std::string line;
    while (std::getline(cfg, line)) out << "# " << line << '\n';
  }
  out << "row,winner";
  for (const auto& c : *classes) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < test.row_count(); ++r) {
    const dmt::VoteBreakdown b = dmt::classify_any(model, test, r);
    out << r << ',' << b.winner;
    for (double w : b.class_weights) out << ',' << dmt::detail::format_double(w);
    out << '\n';
  }
  emit(o, out.str());
  return 0;
}

int cmd_benchmark_cross_lab(Options& o) {
  materialize_seed(o);
  const dmt::Dataset train = dmt::load_dataset(o.train_path, o.class_col);
  const dmt::Dataset test = dmt::load_dataset(o.test_path, o.class_col);
  std::optional<dmt::NoiseSpec> spec;
  if (o.noise_frac >= 0.0) {
    spec = dmt::NoiseSpec{o.noise_frac, o.trials,
                          dmt::mix64(o.seed ^ 0x6e6f697365ULL), o.sigma_from_train};
  }
  std::vector<dmt::ExperimentReport> reports;
  for (const auto& method : parse_methods(o))
    reports.push_back(dmt::run_cross_lab(train, test, method, spec, o.seed, o.jobs));
  emit(o, dmt::render_report(reports, dmt::report_format_from_name(o.format)));
  return 0;
}

int cmd_benchmark_sweep(Options& o) {
  materialize_seed(o);
  if (o.fractions.empty()) throw Error("sweep needs --fractions");
  const dmt::Dataset train = dmt::load_dataset(o.train_path, o.class_col);
  const dmt::Dataset test = dmt::load_dataset(o.test_path, o.class_col);
  dmt::NoiseSpec base{0.0, o.trials, dmt::mix64(o.seed ^ 0x6e6f697365ULL),
                      o.sigma_from_train};
  const auto reports = dmt::run_noise_sweep(train, test, parse_methods(o), o.fractions,
                                            base, o.seed, o.jobs);
  emit(o, dmt::render_report(reports, dmt::report_format_from_name(o.format)));
  return 0;
}

int cmd_benchmark_cv(Options& o) {
  materialize_seed(o);
  const dmt::Dataset data = dmt::load_dataset(o.train_path, o.class_col);
  std::vector<dmt::ExperimentReport> reports;
  for (const auto& method : parse_methods(o))
    reports.push_back(dmt::run_cv(data, o.folds, method, o.seed, o.jobs));
  emit(o, dmt::render_report(reports, dmt::report_format_from_name(o.format)));
  return 0;
}

// --- stats wilcoxon ---------------------------------------------------

std::vector<std::string> csv_split_quoted(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  out.push_back(std::move(cell));
  return out;
}

struct AccuracyTable {
  std::vector<std::string> methods;
  // per method, accuracy per condition (same condition order everywhere)
  std::vector<std::vector<double>> columns;
};

AccuracyTable load_accuracy_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  do {
    if (!std::getline(in, line)) throw Error(path + ": no header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
  } while (line.empty() || line[0] == '#');
  const auto header = csv_split_quoted(line);

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = csv_split_quoted(line);
    if (fields.size() != header.size())
      throw Error(path + ": row width does not match header");
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw Error(path + ": no data rows");

  int method_col = -1, mean_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "method") method_col = static_cast<int>(i);
    if (header[i] == "mean") mean_col = static_cast<int>(i);
  }

  AccuracyTable table;
  if (method_col >= 0 && mean_col >= 0) {
    // long form (the benchmark's delimited output): pivot on the condition
    std::vector<int> key_cols;
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == "train" || header[i] == "test" || header[i] == "protocol" ||
          header[i] == "fraction")
        key_cols.push_back(static_cast<int>(i));

    std::vector<std::string> conditions;
    std::map<std::string, std::size_t> method_index;
    std::map<std::string, std::size_t> condition_index;
    for (const auto& row : rows) {
      std::string key;
      for (int c : key_cols) key += row[static_cast<std::size_t>(c)] + "\x1f";
      if (!condition_index.count(key)) {
        condition_index[key] = conditions.size();
        conditions.push_back(key);
      }
      const auto& method = row[static_cast<std::size_t>(method_col)];
      if (!method_index.count(method)) {
        method_index[method] = table.methods.size();
        table.methods.push_back(method);
        table.columns.emplace_back();
      }
    }
    for (auto& col : table.columns)
      col.assign(conditions.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& row : rows) {
      std::string key;
      for (int c : key_cols) key += row[static_cast<std::size_t>(c)] + "\x1f";
      const auto m = method_index[row[static_cast<std::size_t>(method_col)]];
      table.columns[m][condition_index[key]] = dmt::detail::parse_double_or_throw(
          row[static_cast<std::size_t>(mean_col)], "mean");
    }
    for (std::size_t m = 0; m < table.columns.size(); ++m)
      for (double v : table.columns[m])
        if (std::isnan(v))
          throw Error(path + ": method '" + table.methods[m] +
                      "' is missing some conditions");
  } else {
    // wide form: every fully numeric column is a method column
    for (std::size_t i = 0; i < header.size(); ++i) {
      bool numeric = true;
      std::vector<double> values;
      for (const auto& row : rows) {
        double v = 0.0;
        if (!dmt::detail::parse_finite_double(row[i], v)) {
          numeric = false;
          break;
        }
        values.push_back(v);
      }
      if (numeric) {
        table.methods.push_back(header[i]);
        table.columns.push_back(std::move(values));
      }
    }
    if (table.methods.size() < 2)
      throw Error(path + ": need at least two numeric method columns");
  }

  // accept percentages as well as fractions
  bool any_above_one = false;
  for (const auto& col : table.columns)
    for (double v : col)
      if (v > 1.0) any_above_one = true;
  if (any_above_one)
    for (auto& col : table.columns)
      for (double& v : col) v /= 100.0;
  return table;
}

int cmd_stats_wilcoxon(Options& o) {
  materialize_seed(o);
  const AccuracyTable table = load_accuracy_table(o.input_path);

  auto column_of = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < table.methods.size(); ++i)
      if (table.methods[i] == name) return i;
    throw Error("method column '" + name + "' not found");
  };

  std::ostringstream out;
  if (!o.col_a.empty() || !o.col_b.empty()) {
    if (o.col_a.empty() || o.col_b.empty())
      throw Error("--col-a and --col-b must be given together");
    const auto a = column_of(o.col_a), b = column_of(o.col_b);
    dmt::PairedAccuracies pairs{{table.methods[a], table.methods[b]}, {}};
    for (std::size_t i = 0; i < table.columns[a].size(); ++i)
      pairs.pairs.emplace_back(table.columns[a][i], table.columns[b][i]);
    const auto r = dmt::wilcoxon_signed_rank(pairs);
    out << "a " << dmt::detail::quote(o.col_a) << '\n';
    out << "b " << dmt::detail::quote(o.col_b) << '\n';
    out << "n-effective " << r.n_effective << '\n';
    out << "w-plus " << dmt::detail::format_double(r.w_plus) << '\n';
    out << "w-minus " << dmt::detail::format_double(r.w_minus) << '\n';
    out << "method " << (r.method == dmt::WilcoxonMethod::Exact ? "exact" : "normal-approximation")
        << '\n';
    out << "p-one-sided " << dmt::detail::format_double(r.p_one_sided) << '\n';
  } else {
    const std::size_t n = table.methods.size();
    std::vector<std::vector<std::optional<dmt::WilcoxonResult>>> cells(
        n, std::vector<std::optional<dmt::WilcoxonResult>>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        dmt::PairedAccuracies pairs{{table.methods[a], table.methods[b]}, {}};
        for (std::size_t i = 0; i < table.columns[a].size(); ++i)
          pairs.pairs.emplace_back(table.columns[a][i], table.columns[b][i]);
        bool all_zero = true;
        for (const auto& [x, y] : pairs.pairs)
          if (x != y) all_zero = false;
        if (!all_zero) cells[a][b] = dmt::wilcoxon_signed_rank(pairs);
      }
    out << dmt::render_wilcoxon_matrix(table.methods, cells);
  }
  emit(o, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attribute-disjoint decision tree ensembles and noise-robustness benchmarks"};
  app.set_version_flag("--version", dmt::kVersion);
  app.set_config("--config", "", "Config file (INI key=value; flags override)");
  app.require_subcommand(1);

  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--class-col", o.class_col, "Class column name")->envname("DMT_CLASS_COL");
    cmd->add_option("--seed", o.seed, "Top-level RNG seed (all randomness derives from it)");
    cmd->add_option("--jobs", o.jobs, "Concurrent workers")->check(CLI::PositiveNumber)
        ->envname("DMT_JOBS");
    cmd->add_option("--out", o.out_path, "Output file path");
    cmd->add_option("--format", o.format, "Report format: table|delimited|structured")
        ->check(CLI::IsMember({"table", "delimited", "structured"}))
        ->envname("DMT_FORMAT");
  };
  auto add_method_flags = [&](CLI::App* cmd) {
    cmd->add_option("--method", o.methods,
                    "Method descriptor: c45 | dmt | bagging | adaboost | random_forest | "
                    "random_tree, optionally with :key=value,... (repeatable)");
    cmd->add_option("--k", o.k, "Tree count for dmt (presets 3,7,13,21)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--scheme", o.scheme, "dmt vote scheme: simple|laplace|support")
        ->check(CLI::IsMember({"simple", "laplace", "support"}));
    cmd->add_flag("--support-literal", o.support_literal,
                  "Use the literal misclassified-mass support weight");
    cmd->add_option("--members", o.members, "Member count for bagging/forest/random-tree")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rounds", o.rounds, "AdaBoost rounds")->check(CLI::PositiveNumber);
    cmd->add_option("--subset", o.subset,
                    "Random-forest per-node attribute count (0 = floor(log2 m)+1)");
    cmd->add_option("--pool", o.pool, "Random-tree candidate pool size")
        ->check(CLI::PositiveNumber);
  };

  auto* train = app.add_subcommand("train", "Train a model and write it to disk");
  train->add_option("--train", o.train_path, "Training data (CSV)")->required()
      ->check(CLI::ExistingFile);
  add_method_flags(train);
  add_common(train);

  auto* predict = app.add_subcommand("predict", "Classify rows of a test file");
  predict->add_option("--model", o.model_path, "Model file")->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--test", o.test_path, "Test data (CSV)")->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--norm", o.norm_path, "Normalization sidecar (default <model>.norm)");
  add_common(predict);

  auto* benchmark = app.add_subcommand("benchmark", "Run evaluation protocols");
  benchmark->require_subcommand(1);

  auto* cross = benchmark->add_subcommand("cross-lab", "Train on one dataset, test on another");
  cross->add_option("--train", o.train_path, "Training data (CSV)")->required()
      ->check(CLI::ExistingFile);
  cross->add_option("--test", o.test_path, "Test data (CSV)")->required()
      ->check(CLI::ExistingFile);
  cross->add_option("--noise-frac", o.noise_frac,
                    "Fraction of continuous attributes to noise (omit for clean run)")
      ->check(CLI::Range(0.0, 1.0));
  cross->add_option("--trials", o.trials, "Noised evaluation repeats")
      ->check(CLI::PositiveNumber);
  cross->add_flag("--sigma-from-train", o.sigma_from_train,
                  "Scale noise by training-set stddevs instead of test-set stddevs");
  add_method_flags(cross);
  add_common(cross);

  auto* sweep = benchmark->add_subcommand("sweep", "Noise-level sweep over methods");
  sweep->add_option("--train", o.train_path, "Training data (CSV)")->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--test", o.test_path, "Test data (CSV)")->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--fractions", o.fractions, "Noise fractions, e.g. 0 0.05 0.1")
      ->required()->delimiter(',');
  sweep->add_option("--trials", o.trials, "Trials per fraction")->check(CLI::PositiveNumber);
  sweep->add_flag("--sigma-from-train", o.sigma_from_train,
                  "Scale noise by training-set stddevs instead of test-set stddevs");
  add_method_flags(sweep);
  add_common(sweep);

  auto* cv = benchmark->add_subcommand("cv", "Stratified cross-validation");
  cv->add_option("--train", o.train_path, "Data (CSV)")->required()->check(CLI::ExistingFile);
  cv->add_option("--folds", o.folds, "Fold count")->check(CLI::Range(2, 1000));
  add_method_flags(cv);
  add_common(cv);

  auto* stats = app.add_subcommand("stats", "Statistical comparisons");
  stats->require_subcommand(1);
  auto* wilcoxon = stats->add_subcommand("wilcoxon", "Signed-rank test over method columns");
  wilcoxon->add_option("--input", o.input_path, "Accuracy table (CSV, wide or delimited report)")
      ->required()->check(CLI::ExistingFile);
  wilcoxon->add_option("--col-a", o.col_a, "First method column (default: all pairs)");
  wilcoxon->add_option("--col-b", o.col_b, "Second method column");
  add_common(wilcoxon);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* cmd : {train, predict, cross, sweep, cv, wilcoxon})
      if (!cmd->get_option("--seed")->empty()) o.seed_given = true;

    if (app.got_subcommand(train)) {
      o.command = "train";
      if (o.methods.empty()) throw Error("train needs --method");
      return cmd_train(o);
    }
    if (app.got_subcommand(predict)) {
      o.command = "predict";
      return cmd_predict(o);
    }
    if (app.got_subcommand(benchmark)) {
      if (benchmark->got_subcommand(cross)) {
        o.command = "benchmark cross-lab";
        return cmd_benchmark_cross_lab(o);
      }
      if (benchmark->got_subcommand(sweep)) {
        o.command = "benchmark sweep";
        return cmd_benchmark_sweep(o);
      }
      o.command = "benchmark cv";
      return cmd_benchmark_cv(o);
    }
    o.command = "stats wilcoxon";
    return cmd_stats_wilcoxon(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
