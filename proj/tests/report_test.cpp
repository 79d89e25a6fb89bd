#include <doctest.h>

#include <json.hpp>

#include "aindex/report.hpp"

using namespace aindex;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("tables must be rectangular") {
  ReportTable t{"t", {"a", "b"}, {{Cell("1"), Cell("2")}, {Cell("3")}}, ""};
  CHECK_THROWS_AS(t.validate(), Error);
  CHECK_THROWS_AS(render(t, TableFormat::csv), Error);
}

TEST_CASE("render formats") {
  ReportTable t{"Title",
                {"name", "value"},
                {{Cell("x,y"), number_cell(1.0 / 3.0, 2)},
                 {Cell("±"), number_cell(10.0, 2)}},
                "note"};
  SUBCASE("text aligns columns by display width") {
    const auto lines = lines_of(render(t, TableFormat::text));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "Title");
    CHECK(lines[1] == "name  value");
    CHECK(lines[2] == "x,y   0.33");
    CHECK(lines[3] == "±     10.00");
    CHECK(lines[4] == "note");
  }
  SUBCASE("csv carries exact values") {
    CHECK(render(t, TableFormat::csv) ==
          "name,value\n\"x,y\",0.3333333333333333\n±,10\n");
  }
  SUBCASE("json") {
    const auto doc = nlohmann::json::parse(render(t, TableFormat::json));
    CHECK(doc["title"] == "Title");
    CHECK(doc["rows"][0][1] == "0.3333333333333333");
    CHECK(doc["footnote"] == "note");
  }
  SUBCASE("several tables") {
    std::vector<ReportTable> both{t, t};
    const auto doc = nlohmann::json::parse(render(both, TableFormat::json));
    CHECK(doc.size() == 2);
    const auto text = render(both, TableFormat::text);
    CHECK(lines_of(text).size() == 11);
  }
}

TEST_CASE("credit_table") {
  const auto credit = a_index(AuthorGroupPattern({2, 1}));
  const auto t = credit_table(credit, std::nullopt, 1);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][1].text == "1 (subject)");
  CHECK(t.rows[0][2].text == "0.416667");
  CHECK(t.rows[2][2].text == "0.166667");
  CHECK(t.footnote == "subject share 0.416667");

  OracleEstimate oracle{credit, {0.001, 0.002}, 10, 20};
  const auto with = credit_table(credit, oracle);
  CHECK(with.headers.size() == 5);
  CHECK(with.footnote.find("10 of 20") != std::string::npos);
  with.validate();
}

TEST_CASE("pairs_table") {
  MatchResult m{{{"b1", {"w1", "w2"}}}, {"b2"}, {}};
  const auto t = pairs_table(m);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1].text == "w1;w2");
  CHECK(t.rows[1][1].text == "unmatched");
  CHECK(t.footnote == "1 pairs, 1 unmatched");
}

TEST_CASE("productivity and t-test tables") {
  StratumReport s;
  s.stratum = "Total";
  s.n_pairs = 2;
  s.n_case = 2;
  s.n_control = 4;
  for (auto f : kFeatures) {
    FeatureComparison c;
    c.feature = f;
    c.case_summary = GroupSummary{std::string(feature_name(f)), 2, 1.0, 0.5};
    c.control_summary = GroupSummary{std::string(feature_name(f)), 4, 4.0, 1.0};
    if (f == Feature::pr) {
      c.test = TTestResult{2, -3.0, 0.0, -INFINITY, 1, 0.0, "**", true};
    }
    s.features.push_back(c);
  }
  std::vector<StratumReport> strata{s};

  const auto p = productivity_table(strata, "black", "white");
  p.validate();
  REQUIRE(p.rows.size() == 3);
  CHECK(p.rows[0][5].text == "1.00±0.50**");
  CHECK(p.rows[1][3].text == "4.00±1.00");
  CHECK(p.rows[2][1].text == "Ratio");
  CHECK(p.rows[2][2].text == "0.50");
  CHECK(p.rows[2][3].text == "0.25");

  const auto t = ttest_table(strata);
  t.validate();
  REQUIRE(t.rows.size() == kFeatures.size());
  CHECK(t.rows[0][3].text == "-");
  CHECK(t.rows[2][8].text == "**!");
  CHECK(t.footnote.find("zero variance") != std::string::npos);
  CHECK(t.footnote.find("fewer than two") != std::string::npos);
}

TEST_CASE("funding_table") {
  GroupAggregate c{"black", 11, 20140082.0, 22, 122.43, 164.56, 994.73};
  GroupAggregate k{"white", 11, 43796537.0, 37, 198.33, 378.29, 3502.62};
  const auto ratios = normalized_funding(c, k);

  const auto dollars = funding_table(c, k, ratios, FundingMetric::funding_total);
  dollars.validate();
  CHECK(dollars.rows[0][2].text == "20140082");
  CHECK(dollars.rows[0][3].text == "164502.83");
  CHECK(dollars.rows[2][2].text == "0.46");
  CHECK(dollars.rows[2][3].text == "0.74");

  const auto projects = funding_table(c, k, ratios, FundingMetric::project_count);
  CHECK(projects.rows[0][2].text == "22");
  CHECK(projects.rows[0][4].text == "0.134");
  CHECK(projects.rows[1][4].text == "0.098");
  CHECK(projects.rows[2][4].text == "1.37");

  GroupAggregate zero{"z", 1, 5.0, 1, 0.0, 1.0, 1.0};
  const auto z = funding_table(zero, k, normalized_funding(zero, k),
                               FundingMetric::funding_total);
  CHECK(z.rows[0][3].text == "n/a");
  CHECK(z.rows[2][3].text == "n/a");
  CHECK(z.footnote.find("zero pr sum") != std::string::npos);
}

TEST_CASE("group_members") {
  std::vector<FacultyRecord> roster{
      {"a", "black", "F", "MD", "Full", "s", "u", 1},
      {"b", "black", "F", "MD", "Full", "s", "u", 1},
      {"c", "white", "F", "MD", "Full", "s", "u", 1}};
  ScoreTable scores{{"a", {"a", 1, 1, 1, 1, 1}},
                    {"b", {"b", 1, 1, 1, 1, 1}},
                    {"c", {"c", 1, 1, 1, 1, 1}}};
  std::map<std::string, FundingRecord> funding{{"a", {"a", 1, 10.0}}};
  std::vector<std::string> warnings;
  const auto members = group_members(roster, scores, funding, "black", warnings);
  REQUIRE(members.size() == 2);
  CHECK(members[1].funding == FundingRecord{"b", 0, 0.0});
  CHECK(warnings.size() == 1);

  scores.erase("c");
  CHECK_THROWS_AS(group_members(roster, scores, funding, "white", warnings),
                  Error);
}
