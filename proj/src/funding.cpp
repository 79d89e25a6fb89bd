#include "aindex/funding.hpp"

#include <algorithm>
#include <vector>

#include "aindex/error.hpp"

namespace aindex {

void FundingRecord::validate() const {
  if (project_count < 0) {
    throw InvalidArgument("person " + person_id +
                          ": project count must be non-negative");
  }
  if (!(funding_total >= 0.0)) {
    throw InvalidArgument("person " + person_id +
                          ": funding total must be non-negative");
  }
  if (project_count == 0 && funding_total != 0.0) {
    throw InvalidArgument("person " + person_id +
                          ": funding reported without any project");
  }
}

GroupAggregate aggregate_group(std::span<const GroupMember> members,
                               std::string label) {
  if (members.empty()) {
    throw InvalidArgument("group '" + label + "' has no members");
  }
  std::vector<const GroupMember*> ordered;
  ordered.reserve(members.size());
  for (const auto& member : members) {
    member.funding.validate();
    if (member.funding.person_id != member.scores.person_id) {
      throw InvalidArgument("funding record for " + member.funding.person_id +
                            " paired with scores for " +
                            member.scores.person_id);
    }
    ordered.push_back(&member);
  }
  std::ranges::stable_sort(ordered, {}, [](const GroupMember* m) {
    return m->scores.person_id;
  });

  GroupAggregate aggregate;
  aggregate.label = std::move(label);
  aggregate.n_people = static_cast<int>(ordered.size());
  for (const auto* member : ordered) {
    aggregate.funding_total += member->funding.funding_total;
    aggregate.project_count += member->funding.project_count;
    aggregate.pr_sum += member->scores.pr;
    aggregate.pc_sum += member->scores.pc;
    aggregate.pcif_sum += member->scores.pcif;
  }
  return aggregate;
}

std::string_view metric_name(FundingMetric metric) {
  return metric == FundingMetric::funding_total ? "funding_total"
                                                : "project_count";
}

std::string_view normalizer_name(Normalizer normalizer) {
  switch (normalizer) {
    case Normalizer::none:
      return "none";
    case Normalizer::pr:
      return "pr";
    case Normalizer::pc:
      return "pc";
    case Normalizer::pcif:
      return "pcif";
  }
  return "unknown";
}

const RatioCell& NormalizedRatios::at(FundingMetric metric,
                                      Normalizer normalizer) const {
  return cells[static_cast<std::size_t>(metric)]
              [static_cast<std::size_t>(normalizer)];
}

namespace {

double metric_value(const GroupAggregate& group, FundingMetric metric) {
  return metric == FundingMetric::funding_total
             ? group.funding_total
             : static_cast<double>(group.project_count);
}

double normalizer_value(const GroupAggregate& group, Normalizer normalizer) {
  switch (normalizer) {
    case Normalizer::none:
      return 1.0;
    case Normalizer::pr:
      return group.pr_sum;
    case Normalizer::pc:
      return group.pc_sum;
    case Normalizer::pcif:
      return group.pcif_sum;
  }
  return 1.0;
}

}  // namespace

NormalizedRatios normalized_funding(const GroupAggregate& case_group,
                                    const GroupAggregate& control_group) {
  NormalizedRatios out;
  for (auto metric : kFundingMetrics) {
    for (auto normalizer : kNormalizers) {
      RatioCell& cell = out.cells[static_cast<std::size_t>(metric)]
                                 [static_cast<std::size_t>(normalizer)];
      const double case_norm = normalizer_value(case_group, normalizer);
      const double control_norm = normalizer_value(control_group, normalizer);
      const std::string column(normalizer_name(normalizer));
      if (!(control_norm > 0.0)) {
        cell.error = "control group " + control_group.label + " has zero " +
                     column + " sum";
        continue;
      }
      if (!(case_norm > 0.0)) {
        cell.error =
            "case group " + case_group.label + " has zero " + column + " sum";
        continue;
      }
      cell.case_value = metric_value(case_group, metric) / case_norm;
      cell.control_value = metric_value(control_group, metric) / control_norm;
      if (!(cell.control_value > 0.0)) {
        cell.error = "control group " + control_group.label + " has zero " +
                     std::string(metric_name(metric));
        continue;
      }
      cell.ratio = cell.case_value / cell.control_value;
    }
  }
  return out;
}

}  // namespace aindex
