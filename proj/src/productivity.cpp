#include "aindex/productivity.hpp"

#include <algorithm>

#include "aindex/error.hpp"

namespace aindex {

void PublicationRecord::validate() const {
  if (!(impact_factor >= 0.0)) {
    throw InvalidArgument("publication " + pub_id +
                          ": impact factor must be non-negative");
  }
  if (citations < 0) {
    throw InvalidArgument("publication " + pub_id +
                          ": citation count must be non-negative");
  }
  byline.validate();
}

double credit_share(const PublicationRecord& record, bool merge_corresponding) {
  record.validate();
  const auto grouped = pattern_from_byline(record.byline, merge_corresponding);
  return a_index(grouped.pattern).group_share(grouped.subject_group);
}

ProductivityScores score_profile(std::string person_id,
                                 std::vector<PublicationRecord> records,
                                 bool merge_corresponding) {
  std::ranges::stable_sort(records, {}, &PublicationRecord::pub_id);

  ProductivityScores scores;
  scores.person_id = std::move(person_id);
  for (const auto& record : records) {
    const double share = credit_share(record, merge_corresponding);
    const double citations = static_cast<double>(record.citations);
    scores.papers += 1;
    scores.citations += record.citations;
    scores.pr += share * record.impact_factor;
    scores.pc += share * citations;
    scores.pcif += share * record.impact_factor * citations;
  }
  return scores;
}

}  // namespace aindex
