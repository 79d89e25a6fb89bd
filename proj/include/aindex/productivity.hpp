#pragma once

#include <string>
#include <vector>

#include "aindex/credit.hpp"

namespace aindex {

/// One paper from the point of view of one of its authors.
struct PublicationRecord {
  std::string pub_id;
  Byline byline;
  std::string journal_key;
  double impact_factor = 0.0;
  long long citations = 0;
  /// False when the source gave no corresponding-author flag.
  bool roles_known = true;

  /// Throws InvalidArgument on a negative impact factor or citation count, or
  /// on an invalid byline.
  void validate() const;

  bool operator==(const PublicationRecord&) const = default;
};

/// The five per-researcher features.
struct ProductivityScores {
  std::string person_id;
  long long papers = 0;
  long long citations = 0;
  double pr = 0.0;    // sum of share * IF
  double pc = 0.0;    // sum of share * citations
  double pcif = 0.0;  // sum of share * IF * citations

  bool operator==(const ProductivityScores&) const = default;
};

/// a-index share of the subject author on one paper, in (0, 1].
double credit_share(const PublicationRecord& record, bool merge_corresponding);

/// Scores a researcher. Records are summed in pub_id order so the result does
/// not depend on input order.
ProductivityScores score_profile(std::string person_id,
                                 std::vector<PublicationRecord> records,
                                 bool merge_corresponding = true);

}  // namespace aindex
