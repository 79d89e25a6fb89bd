#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aindex/productivity.hpp"

namespace aindex {

struct FacultyRecord {
  std::string person_id;
  std::string group_label;
  std::string gender;
  std::string degree;
  std::string title;
  std::string specialty;
  std::string school_id;
  int tier = 1;  // 1..3

  void validate() const;

  /// Same gender, degree, title, specialty and school.
  bool matches_criteria(const FacultyRecord& other) const;

  bool operator==(const FacultyRecord&) const = default;
};

struct MatchedPair {
  std::string case_id;
  std::vector<std::string> control_ids;

  bool operator==(const MatchedPair&) const = default;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<std::string> unmatched;
  std::vector<std::string> warnings;
};

/// Greedy matching in roster order. Each case takes `ratio` distinct unused
/// controls drawn uniformly from those meeting every criterion; cases without
/// enough eligible controls are left unmatched. A warning is raised when an
/// unmatched case could have been matched under another processing order.
MatchResult match_pairs(std::span<const FacultyRecord> roster,
                        std::string_view case_label,
                        std::string_view control_label, int ratio,
                        std::uint64_t seed);

enum class Feature { papers, citations, pr, pc, pcif };

inline constexpr std::array<Feature, 5> kFeatures{
    Feature::papers, Feature::citations, Feature::pr, Feature::pc,
    Feature::pcif};

std::string_view feature_name(Feature feature);

/// Feature values in kFeatures order.
using FeatureVector = std::array<double, kFeatures.size()>;

FeatureVector features_of(const ProductivityScores& scores);

struct CollapsedPair {
  FeatureVector case_values{};
  FeatureVector control_values{};
};

using ScoreTable = std::map<std::string, ProductivityScores, std::less<>>;

/// Case features against the mean of the control features. Throws Error
/// naming every member without scores.
CollapsedPair collapse_controls(const MatchedPair& pair,
                                const ScoreTable& scores);

struct TTestResult {
  int n_pairs = 0;
  double mean_diff = 0.0;
  double sd_diff = 0.0;
  double t = 0.0;
  int df = 0;
  double p_two_tailed = 1.0;
  std::string stars;
  /// Set when every difference is identical, so sd_diff is zero.
  bool degenerate_variance = false;
};

/// "**" for p < 0.01, "*" for p < 0.05, otherwise empty.
std::string significance_stars(double p);

/// Paired two-tailed Student t-test on case - control differences.
TTestResult paired_t_test(std::span<const double> case_values,
                          std::span<const double> control_values);

struct GroupSummary {
  std::string feature;
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator, zero when n == 1

  /// "mean±sd" with fixed decimals.
  std::string format(int decimals = 2) const;
};

GroupSummary summarize_group(std::span<const double> values,
                             std::string feature = {});

enum class Stratification { title, tier, gender, all };

std::optional<Stratification> parse_stratification(std::string_view name);

struct FeatureComparison {
  Feature feature = Feature::papers;
  GroupSummary case_summary;
  GroupSummary control_summary;
  /// Absent when the stratum holds fewer than two pairs.
  std::optional<TTestResult> test;
};

struct StratumReport {
  std::string stratum;
  int n_pairs = 0;
  int n_case = 0;
  int n_control = 0;
  std::vector<FeatureComparison> features;
};

/// One report per stratum (keyed on the case's title, tier or gender, or a
/// single "Total" stratum). Summaries are over individuals, tests over
/// collapsed pairs.
std::vector<StratumReport> stratified_tests(
    std::span<const MatchedPair> pairs, std::span<const FacultyRecord> roster,
    const ScoreTable& scores, Stratification by);

}  // namespace aindex
