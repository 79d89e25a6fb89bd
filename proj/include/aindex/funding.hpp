#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "aindex/productivity.hpp"

namespace aindex {

struct FundingRecord {
  std::string person_id;
  long long project_count = 0;
  double funding_total = 0.0;  // US dollars

  /// Counts and totals are non-negative; no funding without a project.
  void validate() const;

  bool operator==(const FundingRecord&) const = default;
};

struct GroupMember {
  ProductivityScores scores;
  FundingRecord funding;
};

/// Group-wise sums of funding and productivity.
struct GroupAggregate {
  std::string label;
  int n_people = 0;
  double funding_total = 0.0;
  long long project_count = 0;
  double pr_sum = 0.0;
  double pc_sum = 0.0;
  double pcif_sum = 0.0;
};

/// Sums over members in person_id order. Throws on an empty group.
GroupAggregate aggregate_group(std::span<const GroupMember> members,
                               std::string label);

enum class FundingMetric { funding_total, project_count };
enum class Normalizer { none, pr, pc, pcif };

inline constexpr std::array<FundingMetric, 2> kFundingMetrics{
    FundingMetric::funding_total, FundingMetric::project_count};
inline constexpr std::array<Normalizer, 4> kNormalizers{
    Normalizer::none, Normalizer::pr, Normalizer::pc, Normalizer::pcif};

std::string_view metric_name(FundingMetric metric);
std::string_view normalizer_name(Normalizer normalizer);

struct RatioCell {
  double case_value = 0.0;
  double control_value = 0.0;
  /// case_value / control_value; empty when `error` is set.
  std::optional<double> ratio;
  std::string error;
};

struct NormalizedRatios {
  std::array<std::array<RatioCell, kNormalizers.size()>,
             kFundingMetrics.size()>
      cells;

  const RatioCell& at(FundingMetric metric, Normalizer normalizer) const;
};

/// Metric sum divided by normalizer sum for each group, and the case/control
/// ratio of those. A zero normalizer only invalidates its own cells.
NormalizedRatios normalized_funding(const GroupAggregate& case_group,
                                    const GroupAggregate& control_group);

}  // namespace aindex
