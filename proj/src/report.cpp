#include "aindex/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace aindex {
namespace {

std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(std::ranges::count_if(
      s, [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string fixed(double value, int decimals) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

std::string csv_escape(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

Cell summary_cell(const GroupSummary& summary, const std::string& stars = {}) {
  return Cell(summary.format(2) + stars,
              format_double(summary.mean) + "±" + format_double(summary.sd) +
                  stars);
}

Cell ratio_cell(double numerator, double denominator) {
  if (denominator == 0.0) return Cell("n/a");
  return number_cell(numerator / denominator, 2);
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

Cell::Cell(std::string display) : text(display), exact(std::move(display)) {}

Cell::Cell(std::string display, std::string full)
    : text(std::move(display)), exact(std::move(full)) {}

Cell number_cell(double value, int decimals) {
  return Cell(fixed(value, decimals), format_double(value));
}

void ReportTable::validate() const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != headers.size()) {
      throw Error("table '" + title + "' row " + std::to_string(r + 1) +
                  " has " + std::to_string(rows[r].size()) + " cells, expected " +
                  std::to_string(headers.size()));
    }
  }
}

std::string render(const ReportTable& table, TableFormat format) {
  table.validate();
  switch (format) {
    case TableFormat::text: {
      std::vector<std::size_t> widths(table.headers.size());
      for (std::size_t c = 0; c < widths.size(); ++c) {
        widths[c] = display_width(table.headers[c]);
        for (const auto& row : table.rows) {
          widths[c] = std::max(widths[c], display_width(row[c].text));
        }
      }
      auto line = [&](auto&& cell_text) {
        std::string out;
        for (std::size_t c = 0; c < widths.size(); ++c) {
          const std::string s = cell_text(c);
          if (c) out += "  ";
          out += s;
          if (c + 1 < widths.size()) {
            out.append(widths[c] - display_width(s), ' ');
          }
        }
        return out + "\n";
      };
      std::string out;
      if (!table.title.empty()) out += table.title + "\n";
      out += line([&](std::size_t c) { return table.headers[c]; });
      for (const auto& row : table.rows) {
        out += line([&](std::size_t c) { return row[c].text; });
      }
      if (!table.footnote.empty()) out += table.footnote + "\n";
      return out;
    }
    case TableFormat::csv: {
      std::string out;
      for (std::size_t c = 0; c < table.headers.size(); ++c) {
        if (c) out += ',';
        out += csv_escape(table.headers[c]);
      }
      out += '\n';
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (c) out += ',';
          out += csv_escape(row[c].exact);
        }
        out += '\n';
      }
      return out;
    }
    case TableFormat::json: {
      nlohmann::ordered_json doc;
      doc["title"] = table.title;
      doc["columns"] = table.headers;
      auto rows = nlohmann::ordered_json::array();
      for (const auto& row : table.rows) {
        auto cells = nlohmann::ordered_json::array();
        for (const auto& cell : row) cells.push_back(cell.exact);
        rows.push_back(std::move(cells));
      }
      doc["rows"] = std::move(rows);
      doc["footnote"] = table.footnote;
      return doc.dump(2) + "\n";
    }
  }
  return {};
}

std::string render(std::span<const ReportTable> tables, TableFormat format) {
  if (format == TableFormat::json) {
    auto array = nlohmann::ordered_json::array();
    for (const auto& table : tables) {
      array.push_back(nlohmann::ordered_json::parse(render(table, format)));
    }
    return array.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out += "\n";
    out += render(tables[i], format);
  }
  return out;
}

ReportTable credit_table(const CreditVector& credit,
                         const std::optional<OracleEstimate>& oracle,
                         std::optional<int> subject_group) {
  ReportTable table;
  table.title = "Co-author credit (a-index)";
  table.headers = {"author", "group", "share"};
  if (oracle) {
    table.headers.insert(table.headers.end(), {"oracle_mean", "oracle_stderr"});
  }
  auto counts = credit.pattern.counts();
  int author = 0;
  for (int g = 1; g <= credit.pattern.group_count(); ++g) {
    const auto i = static_cast<std::size_t>(g - 1);
    std::string group = std::to_string(g);
    if (subject_group && *subject_group == g) group += " (subject)";
    for (int k = 0; k < counts[i]; ++k) {
      std::vector<Cell> row{Cell(std::to_string(++author)), Cell(group),
                            number_cell(credit.group_shares[i], 6)};
      if (oracle) {
        row.push_back(number_cell(oracle->estimate.group_shares[i], 6));
        row.push_back(number_cell(oracle->standard_errors[i], 6));
      }
      table.rows.push_back(std::move(row));
    }
  }
  if (subject_group) {
    table.footnote = "subject share " +
                     fixed(credit.group_share(*subject_group), 6);
  }
  if (oracle) {
    if (!table.footnote.empty()) table.footnote += "; ";
    table.footnote += "oracle accepted " + std::to_string(oracle->accepted) +
                      " of " + std::to_string(oracle->draws) + " draws";
  }
  return table;
}

ReportTable pairs_table(const MatchResult& matches) {
  ReportTable table;
  table.title = "Matched pairs";
  table.headers = {"case_id", "control_ids"};
  for (const auto& pair : matches.pairs) {
    table.rows.push_back({Cell(pair.case_id), Cell(join(pair.control_ids, ";"))});
  }
  for (const auto& id : matches.unmatched) {
    table.rows.push_back({Cell(id), Cell("unmatched")});
  }
  table.footnote = std::to_string(matches.pairs.size()) + " pairs, " +
                   std::to_string(matches.unmatched.size()) + " unmatched";
  return table;
}

ReportTable productivity_table(std::span<const StratumReport> strata,
                               const std::string& case_label,
                               const std::string& control_label) {
  ReportTable table;
  table.title = "Scientific productivity by group";
  table.headers = {"stratum", "group",  "n",  "papers",
                   "citations", "pr-index", "pc-index", "pc*if-index"};
  for (const auto& stratum : strata) {
    std::vector<Cell> case_row{Cell(stratum.stratum), Cell(case_label),
                               Cell(std::to_string(stratum.n_case))};
    std::vector<Cell> control_row{Cell(""), Cell(control_label),
                                  Cell(std::to_string(stratum.n_control))};
    std::vector<Cell> ratio_row{
        Cell(""), Cell("Ratio"),
        ratio_cell(stratum.n_case, stratum.n_control)};
    for (const auto& feature : stratum.features) {
      const std::string stars = feature.test ? feature.test->stars : "";
      case_row.push_back(summary_cell(feature.case_summary, stars));
      control_row.push_back(summary_cell(feature.control_summary));
      ratio_row.push_back(ratio_cell(feature.case_summary.mean,
                                     feature.control_summary.mean));
    }
    table.rows.push_back(std::move(case_row));
    table.rows.push_back(std::move(control_row));
    table.rows.push_back(std::move(ratio_row));
  }
  table.footnote =
      "mean±sd; paired two-tailed t-test: * p<0.05, ** p<0.01";
  return table;
}

ReportTable ttest_table(std::span<const StratumReport> strata) {
  ReportTable table;
  table.title = "Paired t-tests";
  table.headers = {"stratum", "feature", "pairs", "mean_diff", "sd_diff",
                   "t",       "df",      "p",     "sig"};
  bool any_degenerate = false;
  bool any_skipped = false;
  for (const auto& stratum : strata) {
    for (const auto& feature : stratum.features) {
      std::vector<Cell> row{Cell(stratum.stratum),
                            Cell(std::string(feature_name(feature.feature))),
                            Cell(std::to_string(stratum.n_pairs))};
      if (!feature.test) {
        any_skipped = true;
        for (int i = 0; i < 6; ++i) row.push_back(Cell("-"));
      } else {
        const auto& t = *feature.test;
        std::string stars = t.stars;
        if (t.degenerate_variance) {
          stars += "!";
          any_degenerate = true;
        }
        row.push_back(number_cell(t.mean_diff, 4));
        row.push_back(number_cell(t.sd_diff, 4));
        row.push_back(number_cell(t.t, 4));
        row.push_back(Cell(std::to_string(t.df)));
        row.push_back(number_cell(t.p_two_tailed, 4));
        row.push_back(Cell(stars));
      }
      table.rows.push_back(std::move(row));
    }
  }
  table.footnote = "* p<0.05, ** p<0.01";
  if (any_degenerate) table.footnote += "; ! zero variance of differences";
  if (any_skipped) table.footnote += "; - fewer than two pairs";
  return table;
}

ReportTable funding_table(const GroupAggregate& case_group,
                          const GroupAggregate& control_group,
                          const NormalizedRatios& ratios,
                          FundingMetric metric) {
  const bool dollars = metric == FundingMetric::funding_total;
  const int decimals = dollars ? 2 : 3;
  const std::string what = dollars ? "funding total" : "number of projects";

  ReportTable table;
  table.title = dollars ? "Funding total normalized by productivity"
                        : "Funded projects normalized by productivity";
  table.headers = {"group", "n", what, what + " / pr-index",
                   what + " / pc-index", what + " / pc*if-index"};

  std::vector<std::string> errors;
  auto row_for = [&](const GroupAggregate& group, bool is_case) {
    std::vector<Cell> row{Cell(group.label),
                          Cell(std::to_string(group.n_people))};
    row.push_back(dollars ? number_cell(group.funding_total, 0)
                          : Cell(std::to_string(group.project_count)));
    for (auto normalizer : {Normalizer::pr, Normalizer::pc, Normalizer::pcif}) {
      const auto& cell = ratios.at(metric, normalizer);
      if (!cell.error.empty()) {
        row.push_back(Cell("n/a"));
        continue;
      }
      row.push_back(number_cell(is_case ? cell.case_value : cell.control_value,
                                decimals));
    }
    return row;
  };
  table.rows.push_back(row_for(case_group, true));
  table.rows.push_back(row_for(control_group, false));

  std::vector<Cell> ratio_row{
      Cell("Ratio"), ratio_cell(case_group.n_people, control_group.n_people)};
  for (auto normalizer : kNormalizers) {
    const auto& cell = ratios.at(metric, normalizer);
    if (cell.ratio) {
      ratio_row.push_back(number_cell(*cell.ratio, 2));
    } else {
      ratio_row.push_back(Cell("n/a"));
      if (std::ranges::find(errors, cell.error) == errors.end()) {
        errors.push_back(cell.error);
      }
    }
  }
  table.rows.push_back(std::move(ratio_row));
  table.footnote = "group-wise sums; ratio = " + case_group.label + " / " +
                   control_group.label;
  for (const auto& e : errors) table.footnote += "; " + e;
  return table;
}

std::vector<GroupMember> group_members(
    std::span<const FacultyRecord> roster, const ScoreTable& scores,
    const std::map<std::string, FundingRecord>& funding,
    const std::string& label, std::vector<std::string>& warnings) {
  std::vector<GroupMember> members;
  for (const auto& person : roster) {
    if (person.group_label != label) continue;
    auto s = scores.find(person.person_id);
    if (s == scores.end()) {
      throw Error("no productivity scores for " + person.person_id);
    }
    GroupMember member{s->second, FundingRecord{person.person_id, 0, 0.0}};
    if (auto f = funding.find(person.person_id); f != funding.end()) {
      member.funding = f->second;
    } else {
      warnings.push_back("no funding record for " + person.person_id +
                         "; counted as unfunded");
    }
    members.push_back(std::move(member));
  }
  return members;
}

}  // namespace aindex
