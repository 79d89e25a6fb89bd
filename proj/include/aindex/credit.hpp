#pragma once

// Co-author credit allocation.
//
// A byline with n authors is partitioned into m ordered tie groups of sizes
// c_1..c_m; every author in group i receives the same share x_i. Admissible
// share vectors satisfy
//
//   x_1 >= x_2 >= ... >= x_m > 0        (ordering)
//   c_1 x_1 + c_2 x_2 + ... + c_m x_m = 1  (normalization)
//
// and the a-index is the expectation of x under the uniform law on that
// polytope. Writing y_j = x_j - x_{j+1} (x_{m+1} = 0) gives x_k = sum_{j>=k} y_j
// and the normalization becomes sum_j C_j y_j = 1 with C_j = c_1 + ... + c_j.
// With z_j = C_j y_j the polytope is the standard (m-1)-simplex and the map is
// linear, so z is uniform there and E[z_j] = 1/m. Hence
//
//   E[x_k] = (1/m) * sum_{j=k}^{m} 1 / C_j.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace aindex {

/// Ordered tie-group sizes of a byline; group 1 carries the highest credit.
class AuthorGroupPattern {
 public:
  /// Throws InvalidArgument on an empty list or a non-positive group size.
  explicit AuthorGroupPattern(std::vector<int> counts);

  /// n authors, each in a group of its own.
  static AuthorGroupPattern singletons(int n);

  std::span<const int> counts() const { return counts_; }
  int group_count() const { return static_cast<int>(counts_.size()); }
  int author_count() const { return cumulative_.back(); }

  /// C_1..C_m; strictly increasing, last element equals author_count().
  std::span<const int> cumulative_counts() const { return cumulative_; }

  bool operator==(const AuthorGroupPattern&) const = default;

 private:
  std::vector<int> counts_;
  std::vector<int> cumulative_;
};

/// Per-group credit shares for a pattern.
struct CreditVector {
  AuthorGroupPattern pattern;
  std::vector<double> group_shares;

  /// Share of the 1-based group index.
  double group_share(int group) const;

  /// Shares expanded to one entry per author in byline-group order.
  std::vector<double> per_author() const;

  /// sum_i c_i x_i.
  double total() const;
};

/// Authorship roles of one paper as seen from a single subject author.
struct Byline {
  int author_count = 1;
  int subject_position = 1;  // 1-based
  std::set<int> corresponding_positions;
  /// When present, must partition 1..author_count.
  std::optional<std::vector<std::vector<int>>> explicit_ties;

  /// Throws InvalidArgument when positions fall outside 1..author_count or
  /// explicit_ties is not a partition.
  void validate() const;

  bool operator==(const Byline&) const = default;
};

struct BylinePattern {
  AuthorGroupPattern pattern;
  int subject_group = 1;  // 1-based
};

/// Closed-form a-index.
CreditVector a_index(const AuthorGroupPattern& pattern);

struct OracleEstimate {
  CreditVector estimate;
  std::vector<double> standard_errors;
  std::uint64_t accepted = 0;
  std::uint64_t draws = 0;
};

/// Rejection-sampling estimate of the a-index.
///
/// Draws w uniformly on the standard simplex (normalized unit exponentials),
/// maps x_i = w_i / c_i and keeps draws with x_1 >= ... >= x_m. At most
/// `sample_budget` draws are made; when `accepted_target` is non-zero sampling
/// stops as soon as that many draws were accepted. Deterministic for a seed.
/// Throws Error when no draw was accepted.
OracleEstimate a_index_oracle(const AuthorGroupPattern& pattern,
                              std::uint64_t sample_budget, std::uint64_t seed,
                              std::uint64_t accepted_target = 0);

/// Groups a byline into a pattern. With `merge_corresponding`, position 1 and
/// every corresponding author share group 1; other authors keep their
/// (explicit or singleton) groups in byline order.
BylinePattern pattern_from_byline(const Byline& byline,
                                  bool merge_corresponding);

/// Share of author k proportional to 1/k.
CreditVector harmonic_credit(int n);

/// Equal split 1/n.
CreditVector fractional_credit(int n);

/// Full credit for every author; the result does not sum to one.
std::vector<double> inflated_credit(int n);

}  // namespace aindex
