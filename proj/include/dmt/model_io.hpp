#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dmt/harness.hpp"

namespace dmt {

/// Indented text form of one tree: one node per line, children indented by
/// two spaces, quoted strings where needed. Grammar documented in the
/// README; stable across versions.
void write_tree(std::ostream& os, const DecisionTree& t, int indent = 0);

/// Model envelope: header lines (kind, classes, priors, scheme or member
/// weights) followed by the concatenated tree blocks.
void write_model(std::ostream& os, const TrainedModel& m);
TrainedModel read_model(std::istream& is);

/// File variants write atomically (temp file + rename).
void save_model(const TrainedModel& m, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

/// Writes a whole file atomically.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dmt
