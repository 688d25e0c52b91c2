#include "dmt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "dmt/error.hpp"
#include "text_util.hpp"

namespace dmt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_missing_token(std::string_view s) { return s == "?" || s.empty(); }

std::string read_whole_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  if (content.size() >= 3 && content.compare(0, 3, "\xEF\xBB\xBF") == 0)
    content.erase(0, 3);
  return content;
}

// Relative guard for "constant column": fp noise in the variance of a
// truly constant column must not blow up into huge z-scores.
bool effectively_zero_stddev(double sd, double mean) {
  return sd <= 1e-12 * std::max(1.0, std::fabs(mean));
}

void check_writable_token(const std::string& s, const char* what) {
  if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos ||
      s.find('\r') != std::string::npos)
    throw Error(std::string(what) + " '" + s + "' cannot be written to delimited text");
}

}  // namespace

Dataset::Dataset(Schema schema, std::vector<ColumnData> columns,
                 std::vector<std::int32_t> labels, std::vector<std::string> classes,
                 std::string name, std::string class_column)
    : schema_(std::make_shared<const Schema>(std::move(schema))),
      columns_(std::move(columns)),
      labels_(std::move(labels)),
      classes_(std::move(classes)),
      name_(std::move(name)),
      class_column_(std::move(class_column)) {
  if (columns_.size() != schema_->size())
    throw Error("dataset: column count does not match schema");
  const std::size_t n = labels_.size();
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& col = (*schema_)[c];
    const bool cont = col.kind == AttrKind::Continuous;
    const std::size_t len = cont ? std::get<std::vector<double>>(columns_[c]).size()
                                 : std::get<std::vector<std::int32_t>>(columns_[c]).size();
    if (len != n) throw Error("dataset: column '" + col.name + "' length mismatch");
    if (!cont && col.categories.empty())
      throw Error("dataset: categorical attribute '" + col.name + "' has no categories");
    if (col.name.empty()) throw Error("dataset: empty attribute name");
    if (!name_to_col_.emplace(col.name, static_cast<int>(c)).second)
      throw Error("dataset: duplicate attribute name '" + col.name + "'");
  }
  for (std::int32_t l : labels_)
    if (l < 0 || static_cast<std::size_t>(l) >= classes_.size())
      throw Error("dataset: label index out of range");
}

int Dataset::column_index(std::string_view name) const {
  auto it = name_to_col_.find(std::string(name));
  return it == name_to_col_.end() ? -1 : it->second;
}

bool Dataset::is_missing(std::size_t row, std::size_t col) const {
  if (is_continuous(col)) return std::isnan(continuous_column(col)[row]);
  return categorical_column(col)[row] == kMissingCode;
}

std::string_view Dataset::token(std::size_t row, std::size_t col) const {
  const std::int32_t c = categorical_column(col)[row];
  if (c == kMissingCode) return {};
  return (*schema_)[col].categories[static_cast<std::size_t>(c)];
}

std::vector<double> Dataset::class_priors() const {
  std::vector<double> priors(classes_.size(), 0.0);
  for (std::int32_t l : labels_) priors[static_cast<std::size_t>(l)] += 1.0;
  if (!labels_.empty())
    for (double& p : priors) p /= static_cast<double>(labels_.size());
  return priors;
}

bool Dataset::equals(const Dataset& other) const {
  if (attribute_count() != other.attribute_count()) return false;
  if (schema() != other.schema()) return false;
  if (classes_ != other.classes_ || labels_ != other.labels_) return false;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (is_continuous(c)) {
      const auto& a = continuous_column(c);
      const auto& b = other.continuous_column(c);
      for (std::size_t r = 0; r < a.size(); ++r) {
        const bool am = std::isnan(a[r]), bm = std::isnan(b[r]);
        if (am != bm || (!am && a[r] != b[r])) return false;
      }
    } else if (categorical_column(c) != other.categorical_column(c)) {
      return false;
    }
  }
  return true;
}

const NormalizationStats::Entry* NormalizationStats::find(std::string_view attribute) const {
  for (const auto& e : entries)
    if (e.attribute == attribute) return &e;
  return nullptr;
}

Dataset load_dataset(const std::filesystem::path& path, std::string_view class_column) {
  const std::string content = read_whole_file(path);

  // Collect (line number, line) pairs, tolerating a trailing newline.
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  {
    std::string_view rest(content);
    std::size_t line_no = 0;
    while (!rest.empty()) {
      ++line_no;
      const std::size_t nl = rest.find('\n');
      std::string_view line =
          nl == std::string_view::npos ? rest : rest.substr(0, nl);
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.emplace_back(line_no, line);
    }
    while (!lines.empty() && lines.back().second.empty()) lines.pop_back();
  }
  if (lines.empty()) throw Error(path.string() + ": empty file");

  const auto header = detail::split(lines.front().second, ',');
  const std::size_t width = header.size();
  int class_col = -1;
  {
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < width; ++i) {
      if (header[i].empty())
        throw Error(path.string() + ": empty column name in header");
      if (!seen.insert(header[i]).second)
        throw Error(path.string() + ": duplicate column name '" + std::string(header[i]) + "'");
      if (header[i] == class_column) class_col = static_cast<int>(i);
    }
  }
  if (class_col < 0)
    throw Error(path.string() + ": class column '" + std::string(class_column) +
                "' not found in header");

  // Cells stay as views into the file buffer until kinds are known.
  std::vector<std::vector<std::string_view>> cells(width);
  std::vector<std::string_view> raw_labels;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto [line_no, line] = lines[li];
    if (line.empty())
      throw Error(path.string() + ": line " + std::to_string(line_no) + ": empty row");
    const auto fields = detail::split(line, ',');
    if (fields.size() != width)
      throw Error(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                  std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    for (std::size_t i = 0; i < width; ++i) {
      if (static_cast<int>(i) == class_col) {
        if (is_missing_token(fields[i]))
          throw Error(path.string() + ": line " + std::to_string(line_no) +
                      ": missing class label");
        raw_labels.push_back(fields[i]);
      } else {
        cells[i].push_back(fields[i]);
      }
    }
  }
  const std::size_t n = raw_labels.size();
  if (n < 2) throw Error(path.string() + ": fewer than 2 data rows");

  Schema schema;
  std::vector<ColumnData> columns;
  for (std::size_t i = 0; i < width; ++i) {
    if (static_cast<int>(i) == class_col) continue;
    const auto& raw = cells[i];

    bool continuous = true;
    double parsed = 0.0;
    for (const auto& cell : raw) {
      if (is_missing_token(cell)) continue;
      if (!detail::parse_finite_double(cell, parsed)) {
        continuous = false;
        break;
      }
    }

    AttributeSchema attr;
    attr.name = std::string(header[i]);
    if (continuous) {
      attr.kind = AttrKind::Continuous;
      std::vector<double> values(n, kNaN);
      for (std::size_t r = 0; r < n; ++r)
        if (!is_missing_token(raw[r])) {
          detail::parse_finite_double(raw[r], parsed);
          values[r] = parsed;
        }
      columns.emplace_back(std::move(values));
    } else {
      attr.kind = AttrKind::Categorical;
      std::set<std::string_view> distinct;
      for (const auto& cell : raw)
        if (!is_missing_token(cell)) distinct.insert(cell);
      attr.categories.assign(distinct.begin(), distinct.end());
      std::map<std::string_view, std::int32_t> code_of;
      for (std::size_t k = 0; k < attr.categories.size(); ++k)
        code_of[attr.categories[k]] = static_cast<std::int32_t>(k);
      std::vector<std::int32_t> codes(n, kMissingCode);
      for (std::size_t r = 0; r < n; ++r)
        if (!is_missing_token(raw[r])) codes[r] = code_of[raw[r]];
      columns.emplace_back(std::move(codes));
    }
    schema.push_back(std::move(attr));
  }

  std::set<std::string_view> class_set(raw_labels.begin(), raw_labels.end());
  std::vector<std::string> classes(class_set.begin(), class_set.end());
  std::map<std::string_view, std::int32_t> class_code;
  for (std::size_t k = 0; k < classes.size(); ++k)
    class_code[classes[k]] = static_cast<std::int32_t>(k);
  std::vector<std::int32_t> labels(n);
  for (std::size_t r = 0; r < n; ++r) labels[r] = class_code[raw_labels[r]];

  return Dataset(std::move(schema), std::move(columns), std::move(labels),
                 std::move(classes), path.stem().string(), std::string(class_column));
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& attr : d.schema()) {
    check_writable_token(attr.name, "attribute name");
    out << attr.name << ',';
  }
  check_writable_token(d.class_column(), "class column name");
  out << d.class_column() << '\n';

  const std::size_t n = d.row_count();
  const std::size_t m = d.attribute_count();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      if (d.is_missing(r, c)) {
        out << '?';
      } else if (d.is_continuous(c)) {
        out << detail::format_double(d.value(r, c));
      } else {
        const auto tok = d.token(r, c);
        check_writable_token(std::string(tok), "category");
        out << tok;
      }
      out << ',';
    }
    out << d.label_name(r) << '\n';
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write file: " + path.string());
  f << out.str();
}

namespace {

// Rebuilds one dataset restricted to `names`, recoding categoricals onto
// the supplied unified category lists.
Dataset project_columns(const Dataset& d, const std::vector<std::string>& names,
                        const std::vector<AttributeSchema>& unified) {
  Schema schema;
  std::vector<ColumnData> columns;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const int src = d.column_index(names[i]);
    schema.push_back(unified[i]);
    if (unified[i].kind == AttrKind::Continuous) {
      columns.emplace_back(d.continuous_column(static_cast<std::size_t>(src)));
    } else {
      std::map<std::string_view, std::int32_t> code_of;
      for (std::size_t k = 0; k < unified[i].categories.size(); ++k)
        code_of[unified[i].categories[k]] = static_cast<std::int32_t>(k);
      const auto& old = d.categorical_column(static_cast<std::size_t>(src));
      std::vector<std::int32_t> codes(old.size(), kMissingCode);
      const auto& old_cats = d.attribute(static_cast<std::size_t>(src)).categories;
      for (std::size_t r = 0; r < old.size(); ++r)
        if (old[r] != kMissingCode)
          codes[r] = code_of[old_cats[static_cast<std::size_t>(old[r])]];
      columns.emplace_back(std::move(codes));
    }
  }
  return Dataset(std::move(schema), std::move(columns),
                 std::vector<std::int32_t>(d.labels()),
                 std::vector<std::string>(d.classes()), d.name(), d.class_column());
}

}  // namespace

std::pair<Dataset, Dataset> align_datasets(const Dataset& a, const Dataset& b) {
  if (a.classes() != b.classes())
    throw Error("align: class sets differ ('" + a.name() + "' vs '" + b.name() + "')");

  std::vector<std::string> shared;
  for (const auto& attr : a.schema())
    if (b.column_index(attr.name) >= 0) shared.push_back(attr.name);
  std::sort(shared.begin(), shared.end());
  if (shared.empty()) throw Error("align: no shared attributes");

  std::vector<AttributeSchema> unified;
  for (const auto& name : shared) {
    const auto& sa = a.attribute(static_cast<std::size_t>(a.column_index(name)));
    const auto& sb = b.attribute(static_cast<std::size_t>(b.column_index(name)));
    if (sa.kind != sb.kind)
      throw Error("align: attribute '" + name + "' is continuous in one dataset and "
                  "categorical in the other");
    AttributeSchema u = sa;
    if (sa.kind == AttrKind::Categorical) {
      std::set<std::string> cats(sa.categories.begin(), sa.categories.end());
      cats.insert(sb.categories.begin(), sb.categories.end());
      u.categories.assign(cats.begin(), cats.end());
    }
    unified.push_back(std::move(u));
  }

  return {project_columns(a, shared, unified), project_columns(b, shared, unified)};
}

namespace {

std::pair<double, double> mean_stddev(const std::vector<double>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values)
    if (!std::isnan(v)) {
      sum += v;
      ++n;
    }
  if (n == 0) return {0.0, 0.0};
  const double mean = sum / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values)
    if (!std::isnan(v)) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(n - 1))};
}

}  // namespace

std::pair<Dataset, NormalizationStats> znormalize(const Dataset& d) {
  if (d.row_count() < 2) throw Error("znormalize: dataset has fewer than 2 rows");
  NormalizationStats stats;
  for (std::size_t c = 0; c < d.attribute_count(); ++c) {
    if (!d.is_continuous(c)) continue;
    const auto [mean, sd] = mean_stddev(d.continuous_column(c));
    stats.entries.push_back({d.attribute(c).name, mean, sd});
  }
  return {apply_normalization(d, stats), std::move(stats)};
}

Dataset apply_normalization(const Dataset& d, const NormalizationStats& s) {
  Schema schema = d.schema();
  std::vector<ColumnData> columns;
  for (std::size_t c = 0; c < d.attribute_count(); ++c) {
    if (!d.is_continuous(c)) {
      columns.emplace_back(d.categorical_column(c));
      continue;
    }
    const auto* e = s.find(d.attribute(c).name);
    if (!e)
      throw Error("normalization stats missing attribute '" + d.attribute(c).name + "'");
    std::vector<double> values = d.continuous_column(c);
    const bool zero_sd = effectively_zero_stddev(e->stddev, e->mean);
    for (double& v : values) {
      if (std::isnan(v)) continue;
      v = zero_sd ? 0.0 : (v - e->mean) / e->stddev;
    }
    columns.emplace_back(std::move(values));
  }
  return Dataset(std::move(schema), std::move(columns),
                 std::vector<std::int32_t>(d.labels()),
                 std::vector<std::string>(d.classes()), d.name(), d.class_column());
}

void save_normalization(const NormalizationStats& s, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "attribute,mean,stddev\n";
  for (const auto& e : s.entries) {
    check_writable_token(e.attribute, "attribute name");
    out << e.attribute << ',' << detail::format_double(e.mean) << ','
        << detail::format_double(e.stddev) << '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write file: " + path.string());
  f << out.str();
}

NormalizationStats load_normalization(const std::filesystem::path& path) {
  const std::string content = read_whole_file(path);
  NormalizationStats stats;
  std::string_view rest(content);
  bool first = true;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view line = nl == std::string_view::npos ? rest : rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 3)
      throw Error(path.string() + ": malformed normalization row '" + std::string(line) + "'");
    stats.entries.push_back({std::string(fields[0]),
                             detail::parse_double_or_throw(fields[1], "mean"),
                             detail::parse_double_or_throw(fields[2], "stddev")});
  }
  return stats;
}

std::vector<double> attribute_stddevs(const Dataset& d) {
  std::vector<double> out(d.attribute_count(), kNaN);
  for (std::size_t c = 0; c < d.attribute_count(); ++c) {
    if (!d.is_continuous(c)) continue;
    out[c] = mean_stddev(d.continuous_column(c)).second;
  }
  return out;
}

}  // namespace dmt
