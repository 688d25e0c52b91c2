#include "dmt/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dmt/error.hpp"
#include "dmt/version.hpp"
#include "text_util.hpp"

namespace dmt {

namespace {

std::string percent1(double accuracy) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", accuracy * 100.0);
  return buf;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string protocol_name(ExperimentReport::Protocol p) {
  switch (p) {
    case ExperimentReport::Protocol::CrossLab: return "cross-lab";
    case ExperimentReport::Protocol::CrossValidation: return "cross-validation";
    case ExperimentReport::Protocol::NoiseSweepCell: return "noise-sweep";
  }
  return "cross-lab";
}

double stderr_of(const ExperimentReport& r) {
  const auto n = r.trial_results.size();
  if (n < 2) return 0.0;
  double ss = 0.0;
  for (const auto& t : r.trial_results) {
    const double d = t.accuracy - r.mean_accuracy;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

std::string csv_cell(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out.push_back(',');
    out += names[i];
  }
  return out;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(values[i]);
  }
  return out;
}

void require_same_protocol(const std::vector<ExperimentReport>& reports) {
  for (const auto& r : reports)
    if (r.protocol != reports.front().protocol)
      throw Error("render_report: mixed report kinds");
}

// Comment-style provenance header shared by the table and delimited forms;
// the structured form carries the same facts as first-class fields.
std::string provenance_header(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  const auto& first = reports.front();
  os << "# dmt-report " << kVersion << '\n';
  os << "# protocol " << protocol_name(first.protocol) << " seed " << first.seed
     << '\n';
  std::vector<std::string> conditions, methods;
  for (const auto& r : reports) {
    const std::string cond = r.train_name + " -> " + r.test_name;
    if (std::find(conditions.begin(), conditions.end(), cond) == conditions.end())
      conditions.push_back(cond);
    if (std::find(methods.begin(), methods.end(), r.method_name) == methods.end())
      methods.push_back(r.method_name);
  }
  os << "# conditions:";
  for (const auto& c : conditions) os << ' ' << detail::quote(c);
  os << '\n';
  os << "# methods:";
  for (const auto& m : methods) os << ' ' << detail::quote(m);
  os << '\n';
  if (!first.normalization_note.empty())
    os << "# normalization " << detail::quote(first.normalization_note) << '\n';
  return os.str();
}

std::string render_structured(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  os << "dmt-report-set v1\n";
  os << "version " << kVersion << '\n';
  os << "count " << reports.size() << '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    os << "[report " << i << "]\n";
    os << "protocol " << protocol_name(r.protocol) << '\n';
    os << "train " << detail::quote(r.train_name) << '\n';
    os << "test " << detail::quote(r.test_name) << '\n';
    os << "method " << detail::quote(r.method_name) << '\n';
    os << "seed " << r.seed << '\n';
    os << "noise-fraction " << detail::format_double(r.noise_fraction) << '\n';
    os << "trials " << r.trials << '\n';
    os << "clean-accuracy " << detail::format_double(r.clean_accuracy) << '\n';
    os << "mean-accuracy " << detail::format_double(r.mean_accuracy) << '\n';
    if (!r.tree_sizes.empty()) os << "tree-sizes " << join_ints(r.tree_sizes) << '\n';
    if (!r.normalization_note.empty())
      os << "normalization " << detail::quote(r.normalization_note) << '\n';
    for (const auto& w : r.warnings) os << "warning " << detail::quote(w) << '\n';
    for (const auto& t : r.trial_results) {
      os << "trial " << t.trial_index << " accuracy="
         << detail::format_double(t.accuracy);
      if (!t.noised_attributes.empty())
        os << " noised=" << detail::quote(join_names(t.noised_attributes));
      os << '\n';
    }
  }
  os << "[end]\n";
  return os.str();
}

std::string render_delimited(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  os << provenance_header(reports);
  os << "train,test,protocol,method,fraction,trials,mean,stderr,clean\n";
  for (const auto& r : reports) {
    os << csv_cell(r.train_name) << ',' << csv_cell(r.test_name) << ','
       << protocol_name(r.protocol) << ',' << csv_cell(r.method_name) << ','
       << detail::format_double(r.noise_fraction) << ',' << r.trials << ','
       << detail::format_double(r.mean_accuracy) << ','
       << detail::format_double(stderr_of(r)) << ','
       << detail::format_double(r.clean_accuracy) << '\n';
  }
  return os.str();
}

// One accuracy matrix: rows in first-seen order, methods as columns,
// best-per-row (at display precision) starred.
void render_matrix(std::ostringstream& os, const std::string& row_title,
                   const std::vector<std::string>& rows,
                   const std::vector<std::string>& methods,
                   const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> widths;
  widths.push_back(row_title.size());
  for (const auto& r : rows) widths[0] = std::max(widths[0], r.size());
  for (std::size_t c = 0; c < methods.size(); ++c) {
    std::size_t w = methods[c].size();
    for (const auto& row : cells) w = std::max(w, row[c].size());
    widths.push_back(w);
  }

  auto pad = [&](const std::string& s, std::size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  os << pad(row_title, widths[0]);
  for (std::size_t c = 0; c < methods.size(); ++c)
    os << "  " << pad(methods[c], widths[c + 1]);
  os << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << pad(rows[r], widths[0]);
    for (std::size_t c = 0; c < methods.size(); ++c)
      os << "  " << pad(cells[r][c], widths[c + 1]);
    os << '\n';
  }
}

std::string render_table(const std::vector<ExperimentReport>& reports) {
  // group into blocks: one per fraction for sweeps, a single block otherwise
  std::vector<double> fractions;
  const bool sweep = reports.front().protocol == ExperimentReport::Protocol::NoiseSweepCell;
  if (sweep) {
    for (const auto& r : reports)
      if (std::find(fractions.begin(), fractions.end(), r.noise_fraction) ==
          fractions.end())
        fractions.push_back(r.noise_fraction);
  } else {
    fractions.push_back(-1.0);
  }

  std::ostringstream os;
  os << provenance_header(reports) << '\n';
  bool first_block = true;
  for (double fraction : fractions) {
    std::vector<std::string> methods, rows;
    std::vector<std::vector<double>> values;
    for (const auto& r : reports) {
      if (sweep && r.noise_fraction != fraction) continue;
      const std::string row = r.protocol == ExperimentReport::Protocol::CrossValidation
                                  ? r.train_name + " (cv)"
                                  : r.train_name + " -> " + r.test_name;
      auto row_it = std::find(rows.begin(), rows.end(), row);
      if (row_it == rows.end()) {
        rows.push_back(row);
        values.emplace_back();
        row_it = rows.end() - 1;
      }
      const auto row_idx = static_cast<std::size_t>(row_it - rows.begin());
      auto m_it = std::find(methods.begin(), methods.end(), r.method_name);
      if (m_it == methods.end()) {
        methods.push_back(r.method_name);
        m_it = methods.end() - 1;
      }
      const auto col_idx = static_cast<std::size_t>(m_it - methods.begin());
      for (auto& v : values) v.resize(methods.size(), -1.0);
      values[row_idx][col_idx] = r.mean_accuracy;
    }
    for (auto& v : values) v.resize(methods.size(), -1.0);

    // ties at display precision are all starred
    std::vector<std::vector<std::string>> cells(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::string best;
      double best_value = -1.0;
      for (double v : values[r]) {
        if (v < 0.0) continue;
        const std::string p = percent1(v);
        double shown = 0.0;
        detail::parse_finite_double(p, shown);
        if (best.empty() || shown > best_value) {
          best = p;
          best_value = shown;
        }
      }
      for (double v : values[r]) {
        if (v < 0.0) {
          cells[r].push_back("-");
          continue;
        }
        std::string cell = percent1(v);
        if (cell == best) cell += "*";
        cells[r].push_back(std::move(cell));
      }
    }

    if (!first_block) os << '\n';
    first_block = false;
    if (sweep) os << "noise fraction " << detail::format_double(fraction) << "\n";
    render_matrix(os, "train -> test", rows, methods, cells);
  }
  os << "\naccuracies in percent; * marks the best value in each row\n";
  return os.str();
}

}  // namespace

ReportFormat report_format_from_name(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "delimited") return ReportFormat::Delimited;
  if (name == "structured") return ReportFormat::Structured;
  throw Error("unknown report format '" + std::string(name) + "'");
}

std::string render_report(const std::vector<ExperimentReport>& reports,
                          ReportFormat format) {
  if (reports.empty()) throw Error("render_report: no reports");
  require_same_protocol(reports);
  switch (format) {
    case ReportFormat::Table: return render_table(reports);
    case ReportFormat::Delimited: return render_delimited(reports);
    case ReportFormat::Structured: return render_structured(reports);
  }
  throw Error("unreachable report format");
}

std::string render_wilcoxon_matrix(
    const std::vector<std::string>& methods,
    const std::vector<std::vector<std::optional<WilcoxonResult>>>& cells) {
  if (cells.size() != methods.size())
    throw Error("wilcoxon matrix: row count mismatch");

  std::ostringstream os;
  std::vector<std::string> rows = methods;
  std::vector<std::vector<std::string>> text(methods.size());
  for (std::size_t r = 0; r < methods.size(); ++r) {
    if (cells[r].size() != methods.size())
      throw Error("wilcoxon matrix: column count mismatch");
    for (std::size_t c = 0; c < methods.size(); ++c)
      text[r].push_back(cells[r][c] ? fixed3(cells[r][c]->p_one_sided) : "-");
  }
  render_matrix(os, "p-value", rows, methods, text);
  os << "\none-sided p: the row method is more accurate than the column method\n";
  return os.str();
}

}  // namespace dmt
