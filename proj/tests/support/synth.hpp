#pragma once

// Deterministic synthetic datasets for the test and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dmt/dataset.hpp"
#include "dmt/harness.hpp"
#include "dmt/rng.hpp"

namespace synth {

using dmt::AttrKind;
using dmt::AttributeSchema;
using dmt::ColumnData;
using dmt::Dataset;
using dmt::Pcg32;
using dmt::Schema;

inline std::string padded_name(const char* prefix, std::size_t i, int width = 3) {
  std::string n = std::to_string(i);
  while (static_cast<int>(n.size()) < width) n.insert(n.begin(), '0');
  return std::string(prefix) + n;
}

/// Builds a dataset from continuous columns and string labels.
inline Dataset continuous_dataset(const std::vector<std::string>& names,
                                  const std::vector<std::vector<double>>& columns,
                                  const std::vector<std::string>& labels,
                                  std::string name = "synthetic") {
  Schema schema;
  std::vector<ColumnData> data;
  for (std::size_t c = 0; c < names.size(); ++c) {
    schema.push_back({names[c], AttrKind::Continuous, {}});
    data.emplace_back(columns[c]);
  }
  std::set<std::string> class_set(labels.begin(), labels.end());
  std::vector<std::string> classes(class_set.begin(), class_set.end());
  std::vector<std::int32_t> codes;
  for (const auto& l : labels)
    codes.push_back(static_cast<std::int32_t>(
        std::find(classes.begin(), classes.end(), l) - classes.begin()));
  return Dataset(std::move(schema), std::move(data), std::move(codes),
                 std::move(classes), std::move(name), "class");
}

/// Adds a categorical column built from tokens ("" = missing).
struct MixedBuilder {
  Schema schema;
  std::vector<ColumnData> columns;
  std::vector<std::string> labels;
  std::string dataset_name = "synthetic";

  MixedBuilder& continuous(std::string name, std::vector<double> values) {
    schema.push_back({std::move(name), AttrKind::Continuous, {}});
    columns.emplace_back(std::move(values));
    return *this;
  }

  MixedBuilder& categorical(std::string name, const std::vector<std::string>& tokens) {
    std::set<std::string> cats;
    for (const auto& t : tokens)
      if (!t.empty()) cats.insert(t);
    AttributeSchema attr{std::move(name), AttrKind::Categorical,
                         {cats.begin(), cats.end()}};
    std::vector<std::int32_t> codes;
    for (const auto& t : tokens) {
      if (t.empty()) {
        codes.push_back(dmt::kMissingCode);
      } else {
        codes.push_back(static_cast<std::int32_t>(
            std::find(attr.categories.begin(), attr.categories.end(), t) -
            attr.categories.begin()));
      }
    }
    schema.push_back(std::move(attr));
    columns.emplace_back(std::move(codes));
    return *this;
  }

  MixedBuilder& with_labels(std::vector<std::string> l) {
    labels = std::move(l);
    return *this;
  }

  Dataset build() const {
    std::set<std::string> class_set(labels.begin(), labels.end());
    std::vector<std::string> classes(class_set.begin(), class_set.end());
    std::vector<std::int32_t> codes;
    for (const auto& l : labels)
      codes.push_back(static_cast<std::int32_t>(
          std::find(classes.begin(), classes.end(), l) - classes.begin()));
    return Dataset(schema, columns, codes, classes, dataset_name, "class");
  }
};

/// The classic 14-row weather table.
inline Dataset weather() {
  MixedBuilder b;
  b.categorical("outlook", {"sunny", "sunny", "overcast", "rainy", "rainy", "rainy",
                            "overcast", "sunny", "sunny", "rainy", "sunny", "overcast",
                            "overcast", "rainy"});
  b.continuous("temperature", {85, 80, 83, 70, 68, 65, 64, 72, 69, 75, 75, 72, 81, 71});
  b.continuous("humidity", {85, 90, 86, 96, 80, 70, 65, 95, 70, 80, 70, 90, 75, 91});
  b.categorical("windy", {"false", "true", "false", "false", "false", "true", "true",
                          "false", "false", "false", "true", "true", "false", "true"});
  b.with_labels({"no", "no", "yes", "yes", "yes", "no", "yes", "no", "yes", "yes",
                 "yes", "yes", "yes", "no"});
  b.dataset_name = "weather";
  return b.build();
}

/// Balanced two-attribute XOR (categorical), optionally with an extra
/// zero-gain attribute.
inline Dataset xor_dataset(bool with_noise_attr = false) {
  MixedBuilder b;
  b.categorical("a", {"0", "0", "1", "1"});
  b.categorical("b", {"0", "1", "0", "1"});
  if (with_noise_attr) b.categorical("junk", {"x", "y", "x", "y"});
  b.with_labels({"lo", "hi", "hi", "lo"});
  b.dataset_name = "xor";
  return b.build();
}

/// `groups` independent attribute groups, each of `per_group` noisy copies
/// of the binary label: value = (+1 | -1) + N(0, sigma). Each group alone
/// predicts the label with accuracy Phi(1/sigma).
inline Dataset grouped_redundant(std::size_t rows, std::size_t groups,
                                 std::size_t per_group, double sigma,
                                 std::uint64_t seed, std::string name = "grouped",
                                 double class_balance = 0.5) {
  Pcg32 label_rng = dmt::make_stream(seed, 1);
  std::vector<std::string> labels;
  std::vector<double> sign;
  for (std::size_t r = 0; r < rows; ++r) {
    const bool pos = dmt::uniform_closed_open(label_rng) < class_balance;
    labels.push_back(pos ? "pos" : "neg");
    sign.push_back(pos ? 1.0 : -1.0);
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t a = 0; a < per_group; ++a) {
      Pcg32 rng = dmt::make_stream(seed, 1000 + g * 97 + a);
      std::vector<double> col(rows);
      for (std::size_t r = 0; r < rows; ++r)
        col[r] = sign[r] + sigma * dmt::normal_deviate(rng);
      names.push_back(padded_name("g", g) + "_" + std::to_string(a));
      columns.push_back(std::move(col));
    }
  }
  return continuous_dataset(names, columns, labels, std::move(name));
}

/// Pure-noise continuous attributes appended to an existing generator's
/// output are easier to express as a second dataset; this builds one whole
/// table: `strong_groups` informative groups plus `noise_attrs` N(0,1)
/// probes, with a class_balance prior.
inline Dataset grouped_with_probes(std::size_t rows, std::size_t strong_groups,
                                   std::size_t per_group, double sigma,
                                   std::size_t noise_attrs, double class_balance,
                                   std::uint64_t seed, std::string name = "probes") {
  Pcg32 label_rng = dmt::make_stream(seed, 1);
  std::vector<std::string> labels;
  std::vector<double> sign;
  for (std::size_t r = 0; r < rows; ++r) {
    const bool pos = dmt::uniform_closed_open(label_rng) < class_balance;
    labels.push_back(pos ? "pos" : "neg");
    sign.push_back(pos ? 1.0 : -1.0);
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (std::size_t g = 0; g < strong_groups; ++g)
    for (std::size_t a = 0; a < per_group; ++a) {
      Pcg32 rng = dmt::make_stream(seed, 1000 + g * 97 + a);
      std::vector<double> col(rows);
      for (std::size_t r = 0; r < rows; ++r)
        col[r] = sign[r] + sigma * dmt::normal_deviate(rng);
      names.push_back(padded_name("g", g) + "_" + std::to_string(a));
      columns.push_back(std::move(col));
    }
  for (std::size_t j = 0; j < noise_attrs; ++j) {
    Pcg32 rng = dmt::make_stream(seed, 50000 + j);
    std::vector<double> col(rows);
    for (std::size_t r = 0; r < rows; ++r) col[r] = dmt::normal_deviate(rng);
    names.push_back(padded_name("noise", j));
    columns.push_back(std::move(col));
  }
  return continuous_dataset(names, columns, labels, std::move(name));
}

/// Random mixed-kind dataset with a weak label signal; for structural
/// property tests over many shapes. missing_rate > 0 blanks that share
/// of cells.
inline Dataset random_mixed(std::size_t rows, std::size_t attrs, std::uint64_t seed,
                            double missing_rate = 0.0) {
  Pcg32 rng = dmt::make_stream(seed, 7);
  std::vector<std::string> labels;
  std::vector<double> sign;
  for (std::size_t r = 0; r < rows; ++r) {
    const bool pos = (rng() & 1u) != 0;
    labels.push_back(pos ? "a" : "b");
    sign.push_back(pos ? 1.0 : -1.0);
  }

  MixedBuilder b;
  b.with_labels(labels);
  for (std::size_t c = 0; c < attrs; ++c) {
    const std::uint32_t die = rng() % 4;
    const double relevance = dmt::uniform_closed_open(rng) < 0.3 ? 0.8 : 0.0;
    if (die == 0) {
      // categorical with 2..4 categories, weakly label-linked
      const std::size_t n_cats = 2 + rng() % 3;
      std::vector<std::string> tokens;
      for (std::size_t r = 0; r < rows; ++r) {
        if (missing_rate > 0.0 && dmt::uniform_closed_open(rng) < missing_rate) {
          tokens.emplace_back();
          continue;
        }
        double shift = relevance * sign[r];
        auto idx = static_cast<std::size_t>(
            std::clamp<double>(std::floor(dmt::uniform_closed_open(rng) *
                                              static_cast<double>(n_cats) +
                                          shift),
                               0.0, static_cast<double>(n_cats - 1)));
        tokens.push_back(std::string(1, static_cast<char>('u' + idx)));
      }
      bool any = false;
      for (const auto& t : tokens) any = any || !t.empty();
      if (!any) tokens[0] = "u";  // categorical columns need a category
      b.categorical(padded_name("c", c), tokens);
    } else {
      std::vector<double> col(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        if (missing_rate > 0.0 && dmt::uniform_closed_open(rng) < missing_rate) {
          col[r] = std::nan("");
          continue;
        }
        col[r] = relevance * sign[r] + dmt::normal_deviate(rng);
      }
      b.continuous(padded_name("x", c), col);
    }
  }
  b.dataset_name = "random_mixed_" + std::to_string(seed);
  return b.build();
}

/// Hypercube-cluster data in the shape of the UCI Madelon generator:
/// 32 unit-variance Gaussian clusters on the vertices of a 5-dimensional
/// hypercube, 16 clusters per class, 15 redundant linear combinations of
/// the 5 informative coordinates, and N(0,1) probe attributes up to 500
/// columns. Balanced train/test splits.
struct MadelonLike {
  Dataset train;
  Dataset test;
};

inline MadelonLike madelon_like(std::uint64_t seed, std::size_t train_rows = 2000,
                                std::size_t test_rows = 1800) {
  constexpr std::size_t kInformative = 5;
  constexpr std::size_t kRedundant = 15;
  constexpr std::size_t kTotal = 500;
  constexpr double kSep = 1.6;

  // assign the 32 vertices to two balanced classes
  std::vector<int> vertex_class(32);
  for (std::size_t v = 0; v < 32; ++v) vertex_class[v] = v % 2 == 0 ? 0 : 1;
  Pcg32 shuffle_rng = dmt::make_stream(seed, 11);
  for (std::size_t i = 0; i + 1 < vertex_class.size(); ++i) {
    const std::size_t j = i + dmt::uniform_below(shuffle_rng, vertex_class.size() - i);
    std::swap(vertex_class[i], vertex_class[j]);
  }
  std::vector<std::size_t> class_vertices[2];
  for (std::size_t v = 0; v < 32; ++v)
    class_vertices[vertex_class[v]].push_back(v);

  // fixed random mixing matrix for the redundant coordinates
  Pcg32 mix_rng = dmt::make_stream(seed, 13);
  std::vector<std::vector<double>> mix(kRedundant, std::vector<double>(kInformative));
  for (auto& row : mix)
    for (double& v : row) v = 2.0 * dmt::uniform_closed_open(mix_rng) - 1.0;

  // deterministic column placement of informative + redundant among probes
  std::vector<std::size_t> position(kTotal);
  for (std::size_t i = 0; i < kTotal; ++i) position[i] = i;
  Pcg32 place_rng = dmt::make_stream(seed, 17);
  for (std::size_t i = 0; i + 1 < position.size(); ++i) {
    const std::size_t j = i + dmt::uniform_below(place_rng, position.size() - i);
    std::swap(position[i], position[j]);
  }

  auto generate = [&](std::size_t rows, std::uint64_t part) {
    std::vector<std::vector<double>> columns(kTotal, std::vector<double>(rows));
    std::vector<std::string> labels(rows);
    Pcg32 rng = dmt::make_stream(seed, 1000 + part);
    for (std::size_t r = 0; r < rows; ++r) {
      const int cls = static_cast<int>(r % 2);
      const auto& vertices = class_vertices[cls];
      const std::size_t vertex = vertices[dmt::uniform_below(rng, vertices.size())];
      labels[r] = cls == 0 ? "c0" : "c1";

      double info[kInformative];
      for (std::size_t d = 0; d < kInformative; ++d) {
        const double center = ((vertex >> d) & 1u) ? kSep : -kSep;
        info[d] = center + dmt::normal_deviate(rng);
      }
      for (std::size_t d = 0; d < kInformative; ++d)
        columns[position[d]][r] = info[d];
      for (std::size_t j = 0; j < kRedundant; ++j) {
        double v = 0.0;
        for (std::size_t d = 0; d < kInformative; ++d) v += mix[j][d] * info[d];
        columns[position[kInformative + j]][r] = v;
      }
      for (std::size_t j = kInformative + kRedundant; j < kTotal; ++j)
        columns[position[j]][r] = dmt::normal_deviate(rng);
    }

    std::vector<std::string> names;
    for (std::size_t c = 0; c < kTotal; ++c) names.push_back(padded_name("f", c));
    return continuous_dataset(names, columns, labels,
                              part == 0 ? "madelon_train" : "madelon_test");
  };

  return {generate(train_rows, 0), generate(test_rows, 1)};
}

}  // namespace synth
