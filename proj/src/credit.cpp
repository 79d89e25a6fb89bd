#include "aindex/credit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "aindex/error.hpp"

namespace aindex {
namespace {

double integer_power(double base, int exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

}  // namespace

AuthorGroupPattern::AuthorGroupPattern(std::vector<int> counts)
    : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw InvalidArgument("author group pattern must have at least one group");
  }
  cumulative_.reserve(counts_.size());
  int running = 0;
  for (int c : counts_) {
    if (c < 1) {
      throw InvalidArgument("author group size must be positive, got " +
                            std::to_string(c));
    }
    running += c;
    cumulative_.push_back(running);
  }
}

AuthorGroupPattern AuthorGroupPattern::singletons(int n) {
  if (n < 1) {
    throw InvalidArgument("author count must be positive, got " +
                          std::to_string(n));
  }
  return AuthorGroupPattern(std::vector<int>(static_cast<std::size_t>(n), 1));
}

double CreditVector::group_share(int group) const {
  if (group < 1 || group > pattern.group_count()) {
    throw InvalidArgument("group index " + std::to_string(group) +
                          " out of range");
  }
  return group_shares[static_cast<std::size_t>(group - 1)];
}

std::vector<double> CreditVector::per_author() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(pattern.author_count()));
  auto counts = pattern.counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.insert(out.end(), static_cast<std::size_t>(counts[i]), group_shares[i]);
  }
  return out;
}

double CreditVector::total() const {
  double sum = 0.0;
  auto counts = pattern.counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    sum += counts[i] * group_shares[i];
  }
  return sum;
}

void Byline::validate() const {
  if (author_count < 1) {
    throw InvalidArgument("byline must have at least one author");
  }
  if (subject_position < 1 || subject_position > author_count) {
    throw InvalidArgument("subject position " +
                          std::to_string(subject_position) +
                          " outside 1.." + std::to_string(author_count));
  }
  for (int p : corresponding_positions) {
    if (p < 1 || p > author_count) {
      throw InvalidArgument("corresponding position " + std::to_string(p) +
                            " outside 1.." + std::to_string(author_count));
    }
  }
  if (explicit_ties) {
    std::vector<int> seen(static_cast<std::size_t>(author_count) + 1, 0);
    for (const auto& group : *explicit_ties) {
      if (group.empty()) {
        throw InvalidArgument("explicit tie group is empty");
      }
      for (int p : group) {
        if (p < 1 || p > author_count) {
          throw InvalidArgument("tie position " + std::to_string(p) +
                                " outside 1.." + std::to_string(author_count));
        }
        if (seen[static_cast<std::size_t>(p)]++) {
          throw InvalidArgument("tie position " + std::to_string(p) +
                                " listed more than once");
        }
      }
    }
    for (int p = 1; p <= author_count; ++p) {
      if (!seen[static_cast<std::size_t>(p)]) {
        throw InvalidArgument("explicit ties do not cover position " +
                              std::to_string(p));
      }
    }
  }
}

CreditVector a_index(const AuthorGroupPattern& pattern) {
  auto cumulative = pattern.cumulative_counts();
  const std::size_t m = cumulative.size();
  std::vector<double> shares(m);
  double tail = 0.0;
  for (std::size_t k = m; k-- > 0;) {
    tail += 1.0 / cumulative[k];
    shares[k] = tail / static_cast<double>(m);
  }
  return CreditVector{pattern, std::move(shares)};
}

OracleEstimate a_index_oracle(const AuthorGroupPattern& pattern,
                              std::uint64_t sample_budget, std::uint64_t seed,
                              std::uint64_t accepted_target) {
  if (sample_budget < 1) {
    throw InvalidArgument("oracle sample budget must be positive");
  }
  auto counts = pattern.counts();
  const std::size_t m = counts.size();

  std::mt19937_64 rng(seed);
  // Each engine call yields two uniforms on (0, 1] at 32-bit resolution;
  // w = -log(u) is then a unit exponential truncated at 32 log 2.
  auto low = [](std::uint64_t bits) {
    return static_cast<double>((bits & 0xffffffffULL) + 1) * 0x1.0p-32;
  };
  auto high = [](std::uint64_t bits) {
    return static_cast<double>((bits >> 32) + 1) * 0x1.0p-32;
  };

  std::vector<double> u(m);
  std::vector<double> w(m);
  std::vector<double> mean(m, 0.0);
  std::vector<double> m2(m, 0.0);
  std::uint64_t accepted = 0;
  std::uint64_t draws = 0;

  while (draws < sample_budget &&
         (accepted_target == 0 || accepted < accepted_target)) {
    ++draws;
    // Ordering is scale free, so it is tested while the exponentials are
    // drawn and most rejections stop after two variates. With w = -log(u),
    // w_{i-1}/c_{i-1} >= w_i/c_i  <=>  u_{i-1}^{c_i} <= u_i^{c_{i-1}}.
    std::uint64_t bits = rng();
    u[0] = low(bits);
    bool ordered = true;
    for (std::size_t i = 1; i < m; ++i) {
      if (i % 2 == 0) {
        bits = rng();
        u[i] = low(bits);
      } else {
        u[i] = high(bits);
      }
      if (integer_power(u[i - 1], counts[i]) >
          integer_power(u[i], counts[i - 1])) {
        ordered = false;
        break;
      }
    }
    if (!ordered) continue;

    for (std::size_t i = 0; i < m; ++i) w[i] = -std::log(u[i]);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    ++accepted;
    const double inv_n = 1.0 / static_cast<double>(accepted);
    for (std::size_t i = 0; i < m; ++i) {
      const double x = w[i] / sum / counts[i];
      const double delta = x - mean[i];
      mean[i] += delta * inv_n;
      m2[i] += delta * (x - mean[i]);
    }
  }

  if (accepted == 0) {
    throw Error("a-index oracle accepted no draws out of " +
                std::to_string(draws) + "; raise the sample budget");
  }

  std::vector<double> stderrs(m, 0.0);
  if (accepted > 1) {
    const double n = static_cast<double>(accepted);
    for (std::size_t i = 0; i < m; ++i) {
      stderrs[i] = std::sqrt(m2[i] / (n - 1.0) / n);
    }
  }
  return OracleEstimate{CreditVector{pattern, std::move(mean)},
                        std::move(stderrs), accepted, draws};
}

BylinePattern pattern_from_byline(const Byline& byline,
                                  bool merge_corresponding) {
  byline.validate();
  const int n = byline.author_count;

  std::vector<std::vector<int>> groups;
  if (byline.explicit_ties) {
    groups = *byline.explicit_ties;
    std::ranges::sort(groups, {}, [](const std::vector<int>& g) {
      return *std::ranges::min_element(g);
    });
  } else {
    groups.reserve(static_cast<std::size_t>(n));
    for (int p = 1; p <= n; ++p) groups.push_back({p});
  }

  if (merge_corresponding && !byline.corresponding_positions.empty()) {
    // The group holding position 1 sorts first; absorb every later group
    // that holds a corresponding author.
    std::vector<std::vector<int>> merged{groups.front()};
    for (std::size_t g = 1; g < groups.size(); ++g) {
      const bool has_corresponding =
          std::ranges::any_of(groups[g], [&](int p) {
            return byline.corresponding_positions.contains(p);
          });
      if (has_corresponding) {
        merged.front().insert(merged.front().end(), groups[g].begin(),
                              groups[g].end());
      } else {
        merged.push_back(groups[g]);
      }
    }
    groups = std::move(merged);
  }

  std::vector<int> counts;
  counts.reserve(groups.size());
  int subject_group = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    counts.push_back(static_cast<int>(groups[g].size()));
    if (std::ranges::find(groups[g], byline.subject_position) !=
        groups[g].end()) {
      subject_group = static_cast<int>(g) + 1;
    }
  }
  return BylinePattern{AuthorGroupPattern(std::move(counts)), subject_group};
}

CreditVector harmonic_credit(int n) {
  auto pattern = AuthorGroupPattern::singletons(n);
  double harmonic_number = 0.0;
  for (int k = n; k >= 1; --k) harmonic_number += 1.0 / k;
  std::vector<double> shares(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    shares[static_cast<std::size_t>(k - 1)] = (1.0 / k) / harmonic_number;
  }
  return CreditVector{std::move(pattern), std::move(shares)};
}

CreditVector fractional_credit(int n) {
  auto pattern = AuthorGroupPattern::singletons(n);
  return CreditVector{std::move(pattern),
                      std::vector<double>(static_cast<std::size_t>(n),
                                          1.0 / static_cast<double>(n))};
}

std::vector<double> inflated_credit(int n) {
  if (n < 1) {
    throw InvalidArgument("author count must be positive, got " +
                          std::to_string(n));
  }
  return std::vector<double>(static_cast<std::size_t>(n), 1.0);
}

}  // namespace aindex
