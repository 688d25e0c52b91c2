#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmt/harness.hpp"
#include "dmt/stats.hpp"

namespace dmt {

enum class ReportFormat { Table, Delimited, Structured };

ReportFormat report_format_from_name(std::string_view name);

/// Deterministic rendering of a report set.
///   Table: accuracy matrix, one row per (train, test) condition, one
///     column per method, percentages at one decimal, best per row starred.
///   Delimited: flat comma-separated rows for plotting.
///   Structured: key-value document with full provenance and per-trial
///     records.
/// All reports in one call must share a protocol.
std::string render_report(const std::vector<ExperimentReport>& reports,
                          ReportFormat format);

/// Lower-triangular p-value matrix: cell (row, col) tests "row method is
/// better than column method". Empty cells render as "-".
std::string render_wilcoxon_matrix(
    const std::vector<std::string>& methods,
    const std::vector<std::vector<std::optional<WilcoxonResult>>>& cells);

}  // namespace dmt
