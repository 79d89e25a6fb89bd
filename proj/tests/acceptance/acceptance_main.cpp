// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "aindex/cohort.hpp"
#include "aindex/credit.hpp"
#include "aindex/funding.hpp"
#include "aindex/student_t.hpp"

using namespace aindex;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Appends a mismatch description and clears `pass`.
void expect(Outcome& o, bool ok, const std::string& what) {
  if (ok) return;
  if (o.pass) {
    o.detail = what;
  } else if (o.detail.size() < 400) {
    o.detail += "; " + what;
  }
  o.pass = false;
}

std::string num(double v, int digits = 6) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, v);
  return buffer;
}

std::vector<std::vector<int>> compositions(int n) {
  if (n == 0) return {{}};
  std::vector<std::vector<int>> out;
  for (int first = 1; first <= n; ++first) {
    for (auto rest : compositions(n - first)) {
      rest.insert(rest.begin(), first);
      out.push_back(std::move(rest));
    }
  }
  return out;
}

// Criterion 1.
Outcome conservation() {
  Outcome o;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> size(1, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    std::vector<int> counts;
    for (int left = n; left > 0;) {
      std::uniform_int_distribution<int> take(1, left);
      counts.push_back(take(rng));
      left -= counts.back();
    }
    const auto credit = a_index(AuthorGroupPattern(counts));
    long double total = 0.0L;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      total += static_cast<long double>(counts[i]) * credit.group_shares[i];
      expect(o, credit.group_shares[i] > 0.0, "non-positive share");
      if (i > 0) {
        expect(o, credit.group_shares[i] <= credit.group_shares[i - 1],
               "increasing shares");
      }
    }
    expect(o, std::abs(static_cast<double>(total) - 1.0) <= 1e-12,
           "sum " + num(static_cast<double>(total), 17));
  }
  o.detail = o.pass ? "1000 patterns, n <= 20" : o.detail;
  return o;
}

// Criterion 2. Under an unbiased oracle each share misses its 3 se band with
// probability 0.0027, so the expected count of misses is reported alongside.
Outcome oracle_equivalence() {
  Outcome o;
  int patterns = 0;
  int comparisons = 0;
  int misses = 0;
  double worst = 0.0;
  std::uint64_t seed = 20240;
  for (int n = 1; n <= 6; ++n) {
    for (const auto& counts : compositions(n)) {
      const AuthorGroupPattern pattern(counts);
      const auto exact = a_index(pattern);
      const auto est = a_index_oracle(pattern, 4'000'000'000ULL, ++seed,
                                      1'000'000);
      ++patterns;
      expect(o, est.accepted == 1'000'000,
             "only " + std::to_string(est.accepted) + " accepted");
      std::string name = "[";
      for (std::size_t i = 0; i < counts.size(); ++i) {
        name += (i ? "," : "") + std::to_string(counts[i]);
      }
      name += "]";
      for (std::size_t i = 0; i < counts.size(); ++i) {
        const double diff =
            std::abs(est.estimate.group_shares[i] - exact.group_shares[i]);
        const double se = est.standard_errors[i];
        const bool ok = se > 0.0 ? diff <= 3.0 * se : diff <= 1e-15;
        // A single group has no sampling noise to compare against.
        if (se > 0.0) {
          ++comparisons;
          worst = std::max(worst, diff / se);
        }
        if (!ok) ++misses;
        expect(o, ok,
               name + " group " + std::to_string(i + 1) + " off by " +
                   num(se > 0.0 ? diff / se : diff, 3) + " se");
      }
    }
  }
  const std::string summary =
      std::to_string(patterns) + " patterns, " + std::to_string(comparisons) +
      " noisy shares at 1e6 accepted, worst " + num(worst, 3) + " se, " +
      std::to_string(misses) + " beyond 3 se (" +
      num(comparisons * 0.0027, 2) + " expected by chance)";
  o.detail = o.pass ? summary : o.detail + "; " + summary;
  return o;
}

// Criterion 3.
Outcome singleton_closed_form() {
  Outcome o;
  for (int n = 1; n <= 6; ++n) {
    const auto credit = a_index(AuthorGroupPattern::singletons(n));
    for (int k = 1; k <= n; ++k) {
      double tail = 0.0;
      for (int j = n; j >= k; --j) tail += 1.0 / j;
      const double expected = tail / n;
      expect(o, std::abs(credit.group_share(k) - expected) <= 1e-12,
             "n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
  }
  const auto three = a_index(AuthorGroupPattern::singletons(3));
  expect(o, std::abs(three.group_share(1) - 11.0 / 18) <= 1e-12, "11/18");
  expect(o, std::abs(three.group_share(2) - 5.0 / 18) <= 1e-12, "5/18");
  expect(o, std::abs(three.group_share(3) - 2.0 / 18) <= 1e-12, "2/18");
  if (o.pass) o.detail = "n <= 6";
  return o;
}

// Second-pool groups rebuilt from the published means, eleven people each.
struct SecondPool {
  GroupAggregate black;
  GroupAggregate white;
};

SecondPool second_pool() {
  auto build = [](const std::string& label, double pr, double pc, double pcif,
                  long long projects, double dollars) {
    std::vector<GroupMember> members;
    for (int i = 0; i < 11; ++i) {
      const std::string id = label + std::to_string(10 + i);
      members.push_back(
          {ProductivityScores{id, 0, 0, pr, pc, pcif},
           FundingRecord{id, i == 0 ? projects : 0, i == 0 ? dollars : 0.0}});
    }
    return aggregate_group(members, label);
  };
  return {build("black", 11.13, 14.96, 90.43, 22, 20140082.0),
          build("white", 18.03, 34.39, 318.42, 37, 43796537.0)};
}

// Criterion 4.
Outcome funding_table() {
  Outcome o;
  const auto pool = second_pool();
  const auto r = normalized_funding(pool.black, pool.white);
  const Normalizer norms[] = {Normalizer::pr, Normalizer::pc, Normalizer::pcif};
  const double published[3][2] = {{164565.69, 220860.92},
                                  {122423.76, 115781.91},
                                  {20247.54, 12503.74}};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto& cell = r.at(FundingMetric::funding_total, norms[i]);
    const double got[2] = {cell.case_value, cell.control_value};
    for (int g = 0; g < 2; ++g) {
      const double rel = std::abs(got[g] - published[i][g]) / published[i][g];
      worst = std::max(worst, rel);
      expect(o, rel <= 0.005,
             "cell " + num(got[g], 8) + " vs " + num(published[i][g], 8));
    }
  }
  const double ratios[4] = {0.46, 0.75, 1.06, 1.62};
  std::string row;
  for (std::size_t i = 0; i < kNormalizers.size(); ++i) {
    const auto& cell = r.at(FundingMetric::funding_total, kNormalizers[i]);
    const double got = cell.ratio.value_or(NAN);
    row += (i ? " / " : "") + num(got, 4);
    expect(o, std::abs(got - ratios[i]) <= 0.01,
           "ratio " + num(got, 4) + " vs " + num(ratios[i], 3));
  }
  o.detail = (o.pass ? "" : o.detail + "; ") + "ratios " + row +
             ", worst cell " + num(worst * 100, 3) + "%";
  return o;
}

// Criterion 5.
Outcome project_table() {
  Outcome o;
  const auto pool = second_pool();
  const auto r = normalized_funding(pool.black, pool.white);
  const Normalizer norms[] = {Normalizer::pr, Normalizer::pc, Normalizer::pcif};
  const double published[3][2] = {{0.180, 0.187}, {0.134, 0.098},
                                  {0.022, 0.011}};
  for (int i = 0; i < 3; ++i) {
    const auto& cell = r.at(FundingMetric::project_count, norms[i]);
    const double got[2] = {cell.case_value, cell.control_value};
    for (int g = 0; g < 2; ++g) {
      expect(o, std::abs(got[g] - published[i][g]) <= 0.002,
             "cell " + num(got[g], 4) + " vs " + num(published[i][g], 3));
    }
  }
  const double ratios[4] = {0.59, 0.96, 1.37, 2.0};
  std::string row;
  for (std::size_t i = 0; i < kNormalizers.size(); ++i) {
    const auto& cell = r.at(FundingMetric::project_count, kNormalizers[i]);
    const double got = cell.ratio.value_or(NAN);
    row += (i ? " / " : "") + num(got, 4);
    expect(o, std::abs(got - ratios[i]) <= 0.02,
           "ratio " + num(got, 4) + " vs " + num(ratios[i], 3));
  }
  // Informational only: the printed cells rounded to three decimals.
  const auto& pcif = r.at(FundingMetric::project_count, Normalizer::pcif);
  const double rounded = std::round(pcif.case_value * 1000) /
                         std::round(pcif.control_value * 1000);
  o.detail = (o.pass ? "" : o.detail + "; ") + "ratios " + row +
             "; ratio of three-decimal cells " + num(rounded, 4);
  return o;
}

// Criterion 6.
Outcome ratio_rows() {
  Outcome o;
  struct Row {
    const char* name;
    double case_means[6];
    double control_means[6];
    double printed[6];
  };
  // Sample counts, then papers, citations, pr, pc, pc*if.
  const Row rows[] = {
      {"first pool total",
       {40, 4.50, 23.60, 3.81, 4.44, 20.98},
       {80, 7.29, 50.48, 6.71, 8.31, 62.16},
       {0.5, 0.62, 0.47, 0.57, 0.53, 0.34}},
      {"second pool",
       {11, 10.45, 88.64, 11.13, 14.96, 90.43},
       {11, 18.64, 203.73, 18.03, 34.39, 318.42},
       {1, 0.56, 0.44, 0.62, 0.44, 0.28}},
  };
  int checked = 0;
  for (const auto& row : rows) {
    for (int i = 0; i < 6; ++i) {
      const double got = row.case_means[i] / row.control_means[i];
      ++checked;
      expect(o, std::abs(got - row.printed[i]) <= 0.01,
             std::string(row.name) + " column " + std::to_string(i + 1) +
                 ": " + num(got, 4) + " vs " + num(row.printed[i], 3));
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " printed ratios";
  return o;
}

// Criterion 7.
Outcome t_calibration() {
  Outcome o;
  // Two-tailed Student-t p values from an independent reference
  // implementation.
  const double dfs[] = {1, 2, 5, 10, 30};
  const double table[5][4] = {
      {1.0, 0.49999999999999956, 0.2951672353008664, 0.20483276469913345},
      {1.0, 0.42264973081037427, 0.1835034190722739, 0.09546596626670913},
      {1.0, 0.36321746764912255, 0.10193947882985828, 0.03009924789746257},
      {1.0, 0.3408931323020601, 0.07338803477074039, 0.013343655022569565},
      {1.0, 0.32530861542602985, 0.0546250449629831, 0.005389964065651944},
  };
  double worst = 0.0;
  for (int d = 0; d < 5; ++d) {
    for (int t = 0; t <= 3; ++t) {
      const double got = student_t_two_tailed_p(t, dfs[d]);
      worst = std::max(worst, std::abs(got - table[d][t]));
      expect(o, std::abs(got - table[d][t]) <= 1e-4,
             "df=" + num(dfs[d]) + " t=" + std::to_string(t));
    }
  }
  const std::vector<double> diffs{1, 2, 3};
  const std::vector<double> zeros(3, 0.0);
  const auto r = paired_t_test(diffs, zeros);
  expect(o, std::abs(r.t - 3.4641) <= 1e-4, "t " + num(r.t, 8));
  expect(o, std::abs(r.p_two_tailed - 0.0742) <= 1e-3,
         "p " + num(r.p_two_tailed, 8));
  if (o.pass) {
    o.detail = "20 table entries, worst " + num(worst, 2) + "; t=" +
               num(r.t, 6) + " p=" + num(r.p_two_tailed, 4);
  }
  return o;
}

// Criterion 8.
Outcome matching_validity() {
  Outcome o;
  std::mt19937_64 rng(8);
  const char* genders[] = {"F", "M"};
  const char* degrees[] = {"MD", "PhD"};
  const char* titles[] = {"Assistant", "Associate", "Full"};
  int emitted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> pick2(0, 1);
    std::uniform_int_distribution<int> pick3(0, 2);
    std::uniform_int_distribution<int> school(0, 5);
    std::vector<FacultyRecord> roster;
    const int cases = 5 + trial % 30;
    for (int i = 0; i < cases * 4; ++i) {
      const int s = school(rng);
      roster.push_back({"p" + std::to_string(i), i < cases ? "black" : "white",
                        genders[pick2(rng)], degrees[pick2(rng)],
                        titles[pick3(rng)], "surgery", "u" + std::to_string(s),
                        1 + s % 3});
    }
    std::shuffle(roster.begin(), roster.end(), rng);
    const int ratio = 1 + trial % 2;
    const auto result = match_pairs(roster, "black", "white", ratio, trial);
    const auto repeat = match_pairs(roster, "black", "white", ratio, trial);
    expect(o, result.pairs == repeat.pairs && result.unmatched == repeat.unmatched,
           "non-deterministic matching");

    auto find = [&](const std::string& id) -> const FacultyRecord& {
      return *std::find_if(roster.begin(), roster.end(),
                           [&](const auto& p) { return p.person_id == id; });
    };
    std::set<std::string> used;
    for (const auto& pair : result.pairs) {
      ++emitted;
      const auto& c = find(pair.case_id);
      expect(o, pair.control_ids.size() == static_cast<std::size_t>(ratio),
             "wrong number of controls");
      for (const auto& id : pair.control_ids) {
        const auto& k = find(id);
        expect(o,
               k.group_label == "white" && k.gender == c.gender &&
                   k.degree == c.degree && k.title == c.title &&
                   k.specialty == c.specialty && k.school_id == c.school_id,
               "criteria mismatch for " + id);
        expect(o, used.insert(id).second, "control reused: " + id);
      }
    }
  }
  if (o.pass) {
    o.detail = "200 rosters, " + std::to_string(emitted) +
               " pairs valid and seed-stable";
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // <= 0 means no runtime bound
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "credit conservation", 1.0, conservation},
      {2, "oracle equivalence", 120.0, oracle_equivalence},
      {3, "singleton closed form", 0.0, singleton_closed_form},
      {4, "funding total table", 1.0, funding_table},
      {5, "funded projects table", 1.0, project_table},
      {6, "ratio rows", 0.0, ratio_rows},
      {7, "t-distribution calibration", 0.0, t_calibration},
      {8, "matching validity", 0.0, matching_validity},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.limit_seconds > 0.0 && seconds > c.limit_seconds) {
      expect(o, false, "runtime " + num(seconds, 3) + " s over " +
                           num(c.limit_seconds, 3) + " s");
    }
    if (!o.pass) ++failures;
    std::printf("%s  criterion %d  %-28s %8.3f s  %s\n",
                o.pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
