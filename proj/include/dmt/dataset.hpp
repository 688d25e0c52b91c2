#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace dmt {

enum class AttrKind { Continuous, Categorical };

/// One named column of a dataset. Categorical attributes carry their
/// category tokens in lexicographic order; cell codes index into it.
struct AttributeSchema {
  std::string name;
  AttrKind kind = AttrKind::Continuous;
  std::vector<std::string> categories;  // categorical only, sorted

  bool operator==(const AttributeSchema&) const = default;
};

using Schema = std::vector<AttributeSchema>;

/// Continuous columns store doubles (NaN marks a missing cell); categorical
/// columns store category codes (-1 marks a missing cell).
using ColumnData = std::variant<std::vector<double>, std::vector<std::int32_t>>;

constexpr std::int32_t kMissingCode = -1;

/// In-memory table of named attribute columns plus one class-label column.
/// Immutable in normal use; the few mutators exist for construction and for
/// building perturbed copies, never for shared instances.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Schema schema, std::vector<ColumnData> columns,
          std::vector<std::int32_t> labels, std::vector<std::string> classes,
          std::string name = "", std::string class_column = "class");

  std::size_t row_count() const { return labels_.size(); }
  std::size_t attribute_count() const { return schema_->size(); }

  const Schema& schema() const { return *schema_; }
  std::shared_ptr<const Schema> schema_ptr() const { return schema_; }
  const AttributeSchema& attribute(std::size_t col) const { return (*schema_)[col]; }

  /// Column index for an attribute name, or -1 when absent.
  int column_index(std::string_view name) const;

  bool is_continuous(std::size_t col) const {
    return (*schema_)[col].kind == AttrKind::Continuous;
  }
  const std::vector<double>& continuous_column(std::size_t col) const {
    return std::get<std::vector<double>>(columns_[col]);
  }
  const std::vector<std::int32_t>& categorical_column(std::size_t col) const {
    return std::get<std::vector<std::int32_t>>(columns_[col]);
  }

  double value(std::size_t row, std::size_t col) const {
    return continuous_column(col)[row];
  }
  std::int32_t code(std::size_t row, std::size_t col) const {
    return categorical_column(col)[row];
  }
  bool is_missing(std::size_t row, std::size_t col) const;

  /// Category token for a cell; empty view for missing cells.
  std::string_view token(std::size_t row, std::size_t col) const;

  const std::vector<std::int32_t>& labels() const { return labels_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::string& label_name(std::size_t row) const { return classes_[labels_[row]]; }
  std::size_t class_count() const { return classes_.size(); }

  /// Training class proportions, indexed like classes().
  std::vector<double> class_priors() const;

  void set_value(std::size_t row, std::size_t col, double v) {
    std::get<std::vector<double>>(columns_[col])[row] = v;
  }

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const std::string& class_column() const { return class_column_; }

  /// Structural equality: schema, cells (missing == missing), labels,
  /// classes. The display name is not part of identity.
  bool equals(const Dataset& other) const;

 private:
  std::shared_ptr<const Schema> schema_ = std::make_shared<const Schema>();
  std::vector<ColumnData> columns_;
  std::vector<std::int32_t> labels_;
  std::vector<std::string> classes_;
  std::unordered_map<std::string, int> name_to_col_;
  std::string name_;
  std::string class_column_;
};

/// Per-attribute mean and sample (n-1) standard deviation of the continuous
/// attributes of one dataset. Reusable on a paired test set.
struct NormalizationStats {
  struct Entry {
    std::string attribute;
    double mean = 0.0;
    double stddev = 0.0;
  };
  std::vector<Entry> entries;

  const Entry* find(std::string_view attribute) const;
};

/// Loads a comma-separated file with a header row. A column is continuous
/// iff every non-missing cell parses as a finite real; `?` (or an empty
/// field) marks a missing cell. Row order is preserved.
Dataset load_dataset(const std::filesystem::path& path, std::string_view class_column);

/// Writes a dataset back to the comma-separated form load_dataset reads.
void save_dataset(const Dataset& d, const std::filesystem::path& path);

/// Restricts both datasets to the attributes whose names appear in both,
/// in lexicographic order. Rows and labels are unchanged.
std::pair<Dataset, Dataset> align_datasets(const Dataset& a, const Dataset& b);

/// Z-scores every continuous attribute using its non-missing cells.
/// Zero-variance attributes map to all zeros.
std::pair<Dataset, NormalizationStats> znormalize(const Dataset& d);

/// Applies previously fitted stats; every continuous attribute of d must
/// have an entry.
Dataset apply_normalization(const Dataset& d, const NormalizationStats& s);

void save_normalization(const NormalizationStats& s, const std::filesystem::path& path);
NormalizationStats load_normalization(const std::filesystem::path& path);

/// Sample (n-1) standard deviation per attribute over non-missing cells;
/// NaN for categorical columns.
std::vector<double> attribute_stddevs(const Dataset& d);

}  // namespace dmt
