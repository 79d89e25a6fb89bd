#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aindex/cohort.hpp"
#include "aindex/credit.hpp"
#include "aindex/funding.hpp"
#include "aindex/ingest.hpp"

namespace aindex {

/// A table cell: `text` is the rounded display form, `exact` the full
/// precision form used by CSV and JSON output.
struct Cell {
  std::string text;
  std::string exact;

  Cell() = default;
  Cell(std::string display);  // NOLINT: implicit from text
  Cell(std::string display, std::string full);
};

struct ReportTable {
  std::string title;
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;
  std::string footnote;

  /// Throws Error unless every row has one cell per header.
  void validate() const;
};

enum class TableFormat { text, csv, json };

std::string render(const ReportTable& table, TableFormat format);
std::string render(std::span<const ReportTable> tables, TableFormat format);

/// Fixed-decimal cell that keeps the exact value alongside.
Cell number_cell(double value, int decimals);

ReportTable credit_table(const CreditVector& credit,
                         const std::optional<OracleEstimate>& oracle = {},
                         std::optional<int> subject_group = {});

ReportTable pairs_table(const MatchResult& matches);

/// Group summaries per stratum in the "mean±sd" layout, stars on the case
/// row, and a case/control ratio-of-means row.
ReportTable productivity_table(std::span<const StratumReport> strata,
                               const std::string& case_label,
                               const std::string& control_label);

ReportTable ttest_table(std::span<const StratumReport> strata);

/// Raw and normalized funding (or project) values with the ratio row.
/// Dollars-per-index use 2 decimals, projects-per-index 3.
ReportTable funding_table(const GroupAggregate& case_group,
                          const GroupAggregate& control_group,
                          const NormalizedRatios& ratios, FundingMetric metric);

/// Members of `label` from the roster, joined with their scores and funding.
/// People without a funding record count as unfunded and add a warning.
std::vector<GroupMember> group_members(
    std::span<const FacultyRecord> roster, const ScoreTable& scores,
    const std::map<std::string, FundingRecord>& funding,
    const std::string& label, std::vector<std::string>& warnings);

}  // namespace aindex
