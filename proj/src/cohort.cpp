#include "aindex/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include "aindex/error.hpp"
#include "aindex/student_t.hpp"

namespace aindex {

void FacultyRecord::validate() const {
  if (person_id.empty()) {
    throw InvalidArgument("faculty record has an empty person_id");
  }
  if (tier < 1 || tier > 3) {
    throw InvalidArgument("person " + person_id + ": tier must be 1, 2 or 3");
  }
}

bool FacultyRecord::matches_criteria(const FacultyRecord& other) const {
  return gender == other.gender && degree == other.degree &&
         title == other.title && specialty == other.specialty &&
         school_id == other.school_id;
}

MatchResult match_pairs(std::span<const FacultyRecord> roster,
                        std::string_view case_label,
                        std::string_view control_label, int ratio,
                        std::uint64_t seed) {
  if (ratio != 1 && ratio != 2) {
    throw InvalidArgument("pairing ratio must be 1 or 2");
  }
  std::set<std::string_view> ids;
  bool has_case = false;
  bool has_control = false;
  for (const auto& person : roster) {
    person.validate();
    if (!ids.insert(person.person_id).second) {
      throw InvalidArgument("duplicate person_id in roster: " +
                            person.person_id);
    }
    has_case |= person.group_label == case_label;
    has_control |= person.group_label == control_label;
  }
  if (!has_case) {
    throw InvalidArgument("case label '" + std::string(case_label) +
                          "' not present in roster");
  }
  if (!has_control) {
    throw InvalidArgument("control label '" + std::string(control_label) +
                          "' not present in roster");
  }

  std::vector<const FacultyRecord*> controls;
  for (const auto& person : roster) {
    if (person.group_label == control_label) controls.push_back(&person);
  }
  std::vector<bool> used(controls.size(), false);

  std::mt19937_64 rng(seed);
  MatchResult result;
  for (const auto& person : roster) {
    if (person.group_label != case_label) continue;

    std::vector<std::size_t> eligible;
    std::size_t eligible_ignoring_use = 0;
    for (std::size_t i = 0; i < controls.size(); ++i) {
      if (!person.matches_criteria(*controls[i])) continue;
      ++eligible_ignoring_use;
      if (!used[i]) eligible.push_back(i);
    }

    if (eligible.size() < static_cast<std::size_t>(ratio)) {
      result.unmatched.push_back(person.person_id);
      if (eligible_ignoring_use >= static_cast<std::size_t>(ratio)) {
        result.warnings.push_back(
            "case " + person.person_id +
            " is unmatched because earlier cases took its eligible controls;"
            " another processing order could match it");
      }
      continue;
    }

    // Partial Fisher-Yates: the first `ratio` slots become a uniform sample.
    MatchedPair pair{person.person_id, {}};
    for (std::size_t k = 0; k < static_cast<std::size_t>(ratio); ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, eligible.size() - 1);
      std::swap(eligible[k], eligible[pick(rng)]);
      used[eligible[k]] = true;
      pair.control_ids.push_back(controls[eligible[k]]->person_id);
    }
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

std::string_view feature_name(Feature feature) {
  switch (feature) {
    case Feature::papers:
      return "papers";
    case Feature::citations:
      return "citations";
    case Feature::pr:
      return "pr";
    case Feature::pc:
      return "pc";
    case Feature::pcif:
      return "pcif";
  }
  return "unknown";
}

FeatureVector features_of(const ProductivityScores& scores) {
  return {static_cast<double>(scores.papers),
          static_cast<double>(scores.citations), scores.pr, scores.pc,
          scores.pcif};
}

CollapsedPair collapse_controls(const MatchedPair& pair,
                                const ScoreTable& scores) {
  std::vector<std::string> missing;
  auto lookup = [&](const std::string& id) -> const ProductivityScores* {
    auto it = scores.find(id);
    if (it == scores.end()) {
      missing.push_back(id);
      return nullptr;
    }
    return &it->second;
  };

  const ProductivityScores* case_scores = lookup(pair.case_id);
  std::vector<const ProductivityScores*> control_scores;
  for (const auto& id : pair.control_ids) control_scores.push_back(lookup(id));

  if (!missing.empty()) {
    std::string message = "missing productivity scores for";
    for (const auto& id : missing) message += " " + id;
    throw Error(message);
  }
  if (control_scores.empty()) {
    throw InvalidArgument("pair for " + pair.case_id + " has no controls");
  }

  CollapsedPair collapsed;
  collapsed.case_values = features_of(*case_scores);
  for (const auto* control : control_scores) {
    const auto values = features_of(*control);
    for (std::size_t f = 0; f < values.size(); ++f) {
      collapsed.control_values[f] += values[f];
    }
  }
  for (double& v : collapsed.control_values) {
    v /= static_cast<double>(control_scores.size());
  }
  return collapsed;
}

std::string significance_stars(double p) {
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

TTestResult paired_t_test(std::span<const double> case_values,
                          std::span<const double> control_values) {
  if (case_values.size() != control_values.size()) {
    throw InvalidArgument("paired t-test needs equally long samples");
  }
  const std::size_t n = case_values.size();
  if (n < 2) {
    throw InvalidArgument("paired t-test needs at least two pairs");
  }

  std::vector<double> diffs(n);
  for (std::size_t i = 0; i < n; ++i) {
    diffs[i] = case_values[i] - control_values[i];
  }
  const auto summary = summarize_group(diffs);

  TTestResult result;
  result.n_pairs = static_cast<int>(n);
  result.df = static_cast<int>(n) - 1;
  result.mean_diff = summary.mean;
  result.sd_diff = summary.sd;

  if (summary.sd == 0.0) {
    result.degenerate_variance = true;
    if (summary.mean == 0.0) {
      result.t = 0.0;
      result.p_two_tailed = 1.0;
    } else {
      result.t = std::copysign(std::numeric_limits<double>::infinity(),
                               summary.mean);
      result.p_two_tailed = 0.0;
    }
  } else {
    result.t = summary.mean / (summary.sd / std::sqrt(static_cast<double>(n)));
    result.p_two_tailed = student_t_two_tailed_p(result.t, result.df);
  }
  result.stars = significance_stars(result.p_two_tailed);
  return result;
}

std::string GroupSummary::format(int decimals) const {
  char buffer[96];
  std::snprintf(buffer, sizeof buffer, "%.*f±%.*f", decimals, mean,
                decimals, sd);
  return buffer;
}

GroupSummary summarize_group(std::span<const double> values,
                             std::string feature) {
  if (values.empty()) {
    throw InvalidArgument("cannot summarize an empty group");
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return GroupSummary{std::move(feature), static_cast<int>(values.size()), mean,
                      sd};
}

std::optional<Stratification> parse_stratification(std::string_view name) {
  if (name == "title") return Stratification::title;
  if (name == "tier") return Stratification::tier;
  if (name == "gender") return Stratification::gender;
  if (name == "all") return Stratification::all;
  return std::nullopt;
}

std::vector<StratumReport> stratified_tests(
    std::span<const MatchedPair> pairs, std::span<const FacultyRecord> roster,
    const ScoreTable& scores, Stratification by) {
  std::unordered_map<std::string_view, const FacultyRecord*> people;
  for (const auto& person : roster) people.emplace(person.person_id, &person);

  auto stratum_of = [&](const MatchedPair& pair) -> std::string {
    auto it = people.find(pair.case_id);
    if (it == people.end()) {
      throw Error("paired case " + pair.case_id + " not in roster");
    }
    const FacultyRecord& person = *it->second;
    switch (by) {
      case Stratification::title:
        return person.title;
      case Stratification::tier:
        return "Tier " + std::to_string(person.tier);
      case Stratification::gender:
        return person.gender;
      case Stratification::all:
        break;
    }
    return "Total";
  };

  std::map<std::string, std::vector<const MatchedPair*>> strata;
  for (const auto& pair : pairs) strata[stratum_of(pair)].push_back(&pair);

  std::vector<StratumReport> reports;
  for (const auto& [name, members] : strata) {
    std::vector<CollapsedPair> collapsed;
    std::vector<FeatureVector> case_people;
    std::vector<FeatureVector> control_people;
    for (const auto* pair : members) {
      collapsed.push_back(collapse_controls(*pair, scores));
      case_people.push_back(collapsed.back().case_values);
      for (const auto& id : pair->control_ids) {
        control_people.push_back(features_of(scores.find(id)->second));
      }
    }

    StratumReport report;
    report.stratum = name;
    report.n_pairs = static_cast<int>(members.size());
    report.n_case = static_cast<int>(case_people.size());
    report.n_control = static_cast<int>(control_people.size());
    for (std::size_t f = 0; f < kFeatures.size(); ++f) {
      auto column = [f](const std::vector<FeatureVector>& rows) {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row[f]);
        return out;
      };
      FeatureComparison comparison;
      comparison.feature = kFeatures[f];
      const std::string label(feature_name(kFeatures[f]));
      comparison.case_summary = summarize_group(column(case_people), label);
      comparison.control_summary =
          summarize_group(column(control_people), label);
      if (collapsed.size() >= 2) {
        std::vector<double> case_values;
        std::vector<double> control_values;
        for (const auto& c : collapsed) {
          case_values.push_back(c.case_values[f]);
          control_values.push_back(c.control_values[f]);
        }
        comparison.test = paired_t_test(case_values, control_values);
      }
      report.features.push_back(std::move(comparison));
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace aindex
