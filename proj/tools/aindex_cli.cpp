// Command-line front end: credit, score, pair, ttest, normalize, report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "aindex/cohort.hpp"
#include "aindex/credit.hpp"
#include "aindex/funding.hpp"
#include "aindex/ingest.hpp"
#include "aindex/report.hpp"

namespace {

using namespace aindex;

struct GlobalOptions {
  std::string format;  // empty: text tables, CSV inputs
  std::string out;
  std::uint64_t seed = 0;

  DataFormat data_format() const {
    return format == "json" ? DataFormat::json : DataFormat::csv;
  }
  TableFormat table_format() const {
    if (format == "json") return TableFormat::json;
    if (format == "csv") return TableFormat::csv;
    return TableFormat::text;
  }
};

struct CorpusOptions {
  std::string roster;
  std::string publications;
  std::string if_table;
  std::string funding;
  std::string scores;
  bool no_merge = false;
};

struct CohortOptions {
  std::string case_label;
  std::string control_label;
  int ratio = 2;
  std::string group_by = "all";
};

class UsageError : public Error {
 public:
  using Error::Error;
};

void emit(const GlobalOptions& global, const std::string& text) {
  if (global.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(global.out, std::ios::binary);
  if (!out) throw Error("cannot write " + global.out);
  out << text;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("malformed ") + what + " '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what);
  return out;
}

void add_corpus_options(CLI::App* cmd, CorpusOptions& o, bool allow_scores,
                        bool with_funding) {
  cmd->add_option("--roster", o.roster, "Roster file")->required();
  auto* pubs = cmd->add_option("--publications", o.publications,
                               "Publications file");
  auto* ift = cmd->add_option("--if-table", o.if_table, "Impact-factor table");
  if (allow_scores) {
    auto* scores =
        cmd->add_option("--scores", o.scores, "Precomputed scores file");
    scores->excludes(pubs)->excludes(ift);
  } else {
    pubs->required();
    ift->required();
  }
  if (with_funding) cmd->add_option("--funding", o.funding, "Funding file");
  cmd->add_flag("--no-merge", o.no_merge,
                "Do not rank corresponding authors with the first author");
}

void add_cohort_options(CLI::App* cmd, CohortOptions& o, bool with_ratio,
                        bool with_grouping) {
  cmd->add_option("--case-label", o.case_label, "Roster label of cases")
      ->required();
  cmd->add_option("--control-label", o.control_label,
                  "Roster label of controls")
      ->required();
  if (with_ratio) {
    cmd->add_option("--ratio", o.ratio, "Controls per case")
        ->check(CLI::IsMember({1, 2}));
  }
  if (with_grouping) {
    cmd->add_option("--group-by", o.group_by, "Stratify tests")
        ->check(CLI::IsMember({"title", "tier", "gender", "all"}));
  }
}

struct LoadedData {
  std::vector<FacultyRecord> roster;
  ScoreTable scores;
  std::map<std::string, FundingRecord> funding;
  std::vector<std::string> warnings;
};

LoadedData load(const CorpusOptions& o, const GlobalOptions& g) {
  LoadedData data;
  const auto format = g.data_format();
  if (!o.scores.empty()) {
    data.roster = load_roster(o.roster, format);
    data.scores = load_scores(o.scores, format);
    if (!o.funding.empty()) data.funding = load_funding(o.funding, format);
    std::set<std::string, std::less<>> ids;
    for (const auto& p : data.roster) ids.insert(p.person_id);
    for (const auto& [id, s] : data.scores) {
      if (!ids.contains(id)) {
        throw Error(o.scores + ": person_id " + id + " is not in the roster");
      }
    }
    for (const auto& [id, f] : data.funding) {
      if (!ids.contains(id)) {
        throw Error(o.funding + ": person_id " + id + " is not in the roster");
      }
    }
    return data;
  }
  if (o.publications.empty() || o.if_table.empty()) {
    throw UsageError(
        "either --scores or both --publications and --if-table are required");
  }
  CorpusPaths paths{o.roster, o.publications, std::nullopt, o.if_table};
  if (!o.funding.empty()) paths.funding = o.funding;
  Corpus corpus = load_corpus(paths, format);
  data.scores = score_corpus(corpus, !o.no_merge);
  data.roster = std::move(corpus.roster);
  data.funding = std::move(corpus.funding);
  data.warnings = std::move(corpus.warnings);
  return data;
}

int run_credit(const GlobalOptions& g, const std::string& pattern_text,
               int authors, int position, bool corresponding,
               const std::string& corresponding_list,
               const std::string& ties, bool no_merge,
               std::uint64_t oracle_budget) {
  std::optional<int> subject_group;
  std::optional<AuthorGroupPattern> pattern;
  if (!pattern_text.empty()) {
    if (authors > 0) {
      throw UsageError("--pattern cannot be combined with --authors");
    }
    try {
      pattern.emplace(parse_int_list(pattern_text, "pattern"));
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  } else {
    if (authors < 1) throw UsageError("give --pattern or --authors");
    Byline byline;
    byline.author_count = authors;
    byline.subject_position = position;
    if (corresponding) byline.corresponding_positions.insert(position);
    if (!corresponding_list.empty()) {
      for (int p : parse_int_list(corresponding_list, "corresponding list")) {
        byline.corresponding_positions.insert(p);
      }
    }
    if (!ties.empty()) {
      std::vector<std::vector<int>> groups;
      std::stringstream in(ties);
      std::string group;
      while (std::getline(in, group, ';')) {
        groups.push_back(parse_int_list(group, "tie group"));
      }
      byline.explicit_ties = std::move(groups);
    }
    try {
      auto grouped = pattern_from_byline(byline, !no_merge);
      pattern = grouped.pattern;
      subject_group = grouped.subject_group;
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }

  std::optional<OracleEstimate> oracle;
  if (oracle_budget > 0) oracle = a_index_oracle(*pattern, oracle_budget, g.seed);
  emit(g, render(credit_table(a_index(*pattern), oracle, subject_group),
                 g.table_format()));
  return 0;
}

int run_score(const GlobalOptions& g, const CorpusOptions& o) {
  CorpusPaths paths{o.roster, o.publications, std::nullopt, o.if_table};
  Corpus corpus = load_corpus(paths, g.data_format());
  print_warnings(corpus.warnings);
  emit(g, write_scores(score_corpus(corpus, !o.no_merge), g.data_format()));
  return 0;
}

int run_pair(const GlobalOptions& g, const std::string& roster_path,
             const CohortOptions& c) {
  const auto roster = load_roster(roster_path, g.data_format());
  const auto matches =
      match_pairs(roster, c.case_label, c.control_label, c.ratio, g.seed);
  print_warnings(matches.warnings);
  emit(g, render(pairs_table(matches), g.table_format()));
  return 0;
}

std::vector<StratumReport> strata_for(const std::vector<MatchedPair>& pairs,
                                      const LoadedData& data,
                                      const std::vector<Stratification>& keys) {
  std::vector<StratumReport> all;
  for (auto key : keys) {
    auto strata = stratified_tests(pairs, data.roster, data.scores, key);
    all.insert(all.end(), strata.begin(), strata.end());
  }
  return all;
}

int run_ttest(const GlobalOptions& g, const CorpusOptions& o,
              const CohortOptions& c) {
  const auto data = load(o, g);
  print_warnings(data.warnings);
  const auto matches =
      match_pairs(data.roster, c.case_label, c.control_label, c.ratio, g.seed);
  print_warnings(matches.warnings);
  if (matches.pairs.empty()) throw Error("no matched pairs to test");
  const auto strata =
      strata_for(matches.pairs, data, {*parse_stratification(c.group_by)});
  const std::vector<ReportTable> tables{
      productivity_table(strata, c.case_label, c.control_label),
      ttest_table(strata)};
  emit(g, render(tables, g.table_format()));
  return 0;
}

std::vector<ReportTable> funding_tables(const LoadedData& data,
                                        std::span<const FacultyRecord> people,
                                        const CohortOptions& c,
                                        std::vector<std::string>& warnings) {
  const auto case_members = group_members(people, data.scores, data.funding,
                                          c.case_label, warnings);
  const auto control_members = group_members(
      people, data.scores, data.funding, c.control_label, warnings);
  const auto case_group = aggregate_group(case_members, c.case_label);
  const auto control_group = aggregate_group(control_members, c.control_label);
  const auto ratios = normalized_funding(case_group, control_group);
  return {funding_table(case_group, control_group, ratios,
                        FundingMetric::funding_total),
          funding_table(case_group, control_group, ratios,
                        FundingMetric::project_count)};
}

int run_normalize(const GlobalOptions& g, const CorpusOptions& o,
                  const CohortOptions& c) {
  const auto data = load(o, g);
  std::vector<std::string> warnings = data.warnings;
  const auto tables = funding_tables(data, data.roster, c, warnings);
  print_warnings(warnings);
  emit(g, render(tables, g.table_format()));
  return 0;
}

int run_report(const GlobalOptions& g, const CorpusOptions& o,
               const CohortOptions& c) {
  const auto data = load(o, g);
  std::vector<std::string> warnings = data.warnings;
  const auto matches =
      match_pairs(data.roster, c.case_label, c.control_label, c.ratio, g.seed);
  warnings.insert(warnings.end(), matches.warnings.begin(),
                  matches.warnings.end());
  if (matches.pairs.empty()) throw Error("no matched pairs to report");

  std::vector<ReportTable> tables{pairs_table(matches)};
  const auto strata =
      strata_for(matches.pairs, data,
                 {Stratification::title, Stratification::tier,
                  Stratification::gender, Stratification::all});
  tables.push_back(productivity_table(strata, c.case_label, c.control_label));
  tables.push_back(ttest_table(strata));

  if (!o.funding.empty()) {
    std::set<std::string, std::less<>> matched;
    for (const auto& pair : matches.pairs) {
      matched.insert(pair.case_id);
      matched.insert(pair.control_ids.begin(), pair.control_ids.end());
    }
    std::vector<FacultyRecord> people;
    for (const auto& p : data.roster) {
      if (matched.contains(p.person_id)) people.push_back(p);
    }
    for (auto& t : funding_tables(data, people, c, warnings)) {
      tables.push_back(std::move(t));
    }
  }
  print_warnings(warnings);
  emit(g, render(tables, g.table_format()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-author credit, productivity indices and funding parity"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--format", global.format,
                 "Input and output format (default: CSV input, text tables)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", global.out, "Write output to a file");
  app.add_option("--seed", global.seed, "Random seed");

  std::string pattern;
  int authors = 0;
  int position = 1;
  bool corresponding = false;
  std::string corresponding_list;
  std::string ties;
  bool no_merge = false;
  std::uint64_t oracle_budget = 0;
  auto* credit = app.add_subcommand("credit", "Print a-index credit shares");
  credit->add_option("--pattern", pattern, "Tie-group sizes, e.g. 1,2");
  credit->add_option("--authors", authors, "Number of authors");
  credit->add_option("--position", position, "Subject position (1-based)");
  credit->add_flag("--corresponding", corresponding,
                   "Subject is a corresponding author");
  credit->add_option("--corresponding-positions", corresponding_list,
                     "Other corresponding authors, e.g. 1,4");
  credit->add_option("--ties", ties, "Explicit tie groups, e.g. \"1,2;3\"");
  credit->add_flag("--no-merge", no_merge,
                   "Do not rank corresponding authors with the first author");
  credit->add_option("--oracle", oracle_budget,
                     "Add a Monte Carlo estimate with this many draws");

  CorpusOptions score_opts;
  auto* score = app.add_subcommand("score", "Score every roster member");
  add_corpus_options(score, score_opts, false, false);

  std::string pair_roster;
  CohortOptions pair_opts;
  auto* pair = app.add_subcommand("pair", "Match cases to controls");
  pair->add_option("--roster", pair_roster, "Roster file")->required();
  add_cohort_options(pair, pair_opts, true, false);

  CorpusOptions ttest_corpus;
  CohortOptions ttest_opts;
  auto* ttest = app.add_subcommand("ttest", "Paired t-tests by stratum");
  add_corpus_options(ttest, ttest_corpus, true, false);
  add_cohort_options(ttest, ttest_opts, true, true);

  CorpusOptions norm_corpus;
  CohortOptions norm_opts;
  auto* normalize =
      app.add_subcommand("normalize", "Funding normalized by productivity");
  add_corpus_options(normalize, norm_corpus, true, true);
  normalize->get_option("--funding")->required();
  add_cohort_options(normalize, norm_opts, false, false);

  CorpusOptions report_corpus;
  CohortOptions report_opts;
  auto* report = app.add_subcommand("report", "Run the full pipeline");
  add_corpus_options(report, report_corpus, false, true);
  add_cohort_options(report, report_opts, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help exits 0; every other parse failure is a usage error.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*credit) {
      return run_credit(global, pattern, authors, position, corresponding,
                        corresponding_list, ties, no_merge, oracle_budget);
    }
    if (*score) return run_score(global, score_opts);
    if (*pair) return run_pair(global, pair_roster, pair_opts);
    if (*ttest) return run_ttest(global, ttest_corpus, ttest_opts);
    if (*normalize) return run_normalize(global, norm_corpus, norm_opts);
    if (*report) return run_report(global, report_corpus, report_opts);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
