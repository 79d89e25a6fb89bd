#include "aindex/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace aindex {
namespace {

using nlohmann::json;

struct RawRecord {
  long line = 0;
  std::vector<std::string> fields;
};

struct RawTable {
  std::string file;
  std::vector<std::string> header;
  std::vector<RawRecord> records;
};

std::vector<std::string> split(std::string_view text, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IngestError(path.string(), 0, "", "cannot open file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// RFC 4180 records. Blank lines are skipped; a record's line is the physical
// line it starts on.
std::vector<RawRecord> parse_csv(std::string_view text,
                                 const std::string& file) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<RawRecord> records;
  RawRecord current;
  std::string field;
  long line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    if (record_has_content || !current.fields.empty()) {
      end_field();
      records.push_back(std::move(current));
    }
    current = RawRecord{};
    current.line = line;
    field.clear();
    field_was_quoted = false;
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          if (i + 1 < text.size() && text[i + 1] != ',' &&
              text[i + 1] != '\n' && text[i + 1] != '\r') {
            throw IngestError(file, line, "",
                              "unexpected character after closing quote");
          }
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw IngestError(file, line, "",
                            "quote inside an unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        ++line;
        end_record();
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(ch);
        record_has_content = true;
    }
  }
  if (in_quotes) {
    throw IngestError(file, current.line, "", "unterminated quoted field");
  }
  end_record();
  return records;
}

RawTable read_csv_table(const std::filesystem::path& path,
                        std::string_view expected_header) {
  const std::string file = path.string();
  auto records = parse_csv(read_file(path), file);
  RawTable table;
  table.file = file;
  table.header = split(expected_header, ',');
  if (records.empty()) return table;

  if (records.front().fields != table.header) {
    throw IngestError(file, records.front().line, "",
                      "header must be exactly '" +
                          std::string(expected_header) + "'");
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != table.header.size()) {
      throw IngestError(file, records[r].line, "",
                        "expected " + std::to_string(table.header.size()) +
                            " fields, found " +
                            std::to_string(records[r].fields.size()));
    }
    table.records.push_back(std::move(records[r]));
  }
  return table;
}

std::string tie_groups_to_string(const std::vector<std::vector<int>>& groups) {
  std::string out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (g) out += ';';
    for (std::size_t i = 0; i < groups[g].size(); ++i) {
      if (i) out += ',';
      out += std::to_string(groups[g][i]);
    }
  }
  return out;
}

std::string json_scalar_to_field(const json& value, const std::string& file,
                                 long index, const std::string& key) {
  switch (value.type()) {
    case json::value_t::null:
      return "";
    case json::value_t::string:
      return value.get<std::string>();
    case json::value_t::boolean:
      return value.get<bool>() ? "true" : "false";
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      return value.dump();
    case json::value_t::number_float:
      return format_double(value.get<double>());
    case json::value_t::array:
      if (key == "tie_groups") {
        try {
          return tie_groups_to_string(
              value.get<std::vector<std::vector<int>>>());
        } catch (const json::exception&) {
        }
      }
      [[fallthrough]];
    default:
      throw IngestError(file, index, key, "unsupported JSON value type");
  }
}

RawTable read_json_table(const std::filesystem::path& path,
                         std::string_view expected_header) {
  const std::string file = path.string();
  const std::string text = read_file(path);
  RawTable table;
  table.file = file;
  table.header = split(expected_header, ',');
  if (std::all_of(text.begin(), text.end(),
                  [](unsigned char c) { return std::isspace(c); })) {
    return table;
  }

  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IngestError(file, 0, "",
                      std::string("malformed JSON: ") + e.what());
  }
  if (!document.is_array()) {
    throw IngestError(file, 0, "", "top level must be an array of records");
  }
  long index = 0;
  for (const auto& item : document) {
    ++index;
    if (!item.is_object()) {
      throw IngestError(file, index, "", "record must be an object");
    }
    for (const auto& [key, value] : item.items()) {
      if (std::ranges::find(table.header, key) == table.header.end()) {
        throw IngestError(file, index, key, "unknown field");
      }
    }
    RawRecord record;
    record.line = index;
    for (const auto& key : table.header) {
      auto it = item.find(key);
      if (it == item.end()) {
        if (key == "tie_groups" || key == "is_corresponding") {
          record.fields.emplace_back();
          continue;
        }
        throw IngestError(file, index, key, "missing field");
      }
      record.fields.push_back(json_scalar_to_field(*it, file, index, key));
    }
    table.records.push_back(std::move(record));
  }
  return table;
}

RawTable read_table(const std::filesystem::path& path,
                    std::string_view expected_header, DataFormat format) {
  return format == DataFormat::csv ? read_csv_table(path, expected_header)
                                   : read_json_table(path, expected_header);
}

// Typed access to one record of a table.
class Row {
 public:
  Row(const RawTable& table, const RawRecord& record)
      : table_(table), record_(record) {}

  long line() const { return record_.line; }
  const std::string& file() const { return table_.file; }

  const std::string& text(std::size_t column) const {
    return record_.fields[column];
  }

  std::string required(std::size_t column) const {
    if (text(column).empty()) fail(column, "value is required");
    return text(column);
  }

  long long integer(std::size_t column) const {
    const std::string& s = text(column);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      fail(column, "expected an integer, got '" + s + "'");
    }
    return value;
  }

  double real(std::size_t column) const {
    const std::string& s = text(column);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() ||
        !std::isfinite(value)) {
      fail(column, "expected a number, got '" + s + "'");
    }
    return value;
  }

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw IngestError(table_.file, record_.line, table_.header[column],
                      message);
  }

 private:
  const RawTable& table_;
  const RawRecord& record_;
};

std::vector<FacultyRecord> parse_roster(const RawTable& table) {
  std::vector<FacultyRecord> roster;
  std::set<std::string> seen;
  for (const auto& raw : table.records) {
    Row row(table, raw);
    FacultyRecord person;
    person.person_id = row.required(0);
    person.group_label = row.required(1);
    person.gender = row.text(2);
    person.degree = row.text(3);
    person.title = row.text(4);
    person.specialty = row.text(5);
    person.school_id = row.text(6);
    const long long tier = row.integer(7);
    if (tier < 1 || tier > 3) row.fail(7, "tier must be 1, 2 or 3");
    person.tier = static_cast<int>(tier);
    if (!seen.insert(person.person_id).second) {
      row.fail(0, "duplicate person_id " + person.person_id);
    }
    roster.push_back(std::move(person));
  }
  return roster;
}

std::optional<std::vector<std::vector<int>>> parse_tie_groups(const Row& row,
                                                              std::size_t col) {
  const std::string& s = row.text(col);
  if (s.empty()) return std::nullopt;
  std::vector<std::vector<int>> groups;
  for (const auto& group_text : split(s, ';')) {
    std::vector<int> group;
    for (const auto& item : split(group_text, ',')) {
      int value = 0;
      auto [ptr, ec] =
          std::from_chars(item.data(), item.data() + item.size(), value);
      if (item.empty() || ec != std::errc{} ||
          ptr != item.data() + item.size()) {
        row.fail(col, "malformed tie group list '" + s + "'");
      }
      group.push_back(value);
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::map<std::string, FundingRecord> parse_funding(const RawTable& table) {
  std::map<std::string, FundingRecord> funding;
  for (const auto& raw : table.records) {
    Row row(table, raw);
    FundingRecord record;
    record.person_id = row.required(0);
    record.project_count = row.integer(1);
    record.funding_total = row.real(2);
    if (record.project_count < 0) row.fail(1, "must be non-negative");
    if (record.funding_total < 0.0) row.fail(2, "must be non-negative");
    if (record.project_count == 0 && record.funding_total != 0.0) {
      row.fail(2, "funding reported without any project");
    }
    if (!funding.emplace(record.person_id, record).second) {
      row.fail(0, "duplicate person_id " + record.person_id);
    }
  }
  return funding;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// Serializes rows of string fields; `numeric` marks columns emitted as bare
// JSON numbers.
std::string render_table(std::string_view header,
                         const std::vector<std::vector<std::string>>& rows,
                         const std::vector<bool>& numeric, DataFormat format) {
  const auto keys = split(header, ',');
  if (format == DataFormat::csv) {
    std::string out(header);
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += csv_field(row[i]);
      }
      out += '\n';
    }
    return out;
  }
  json array = json::array();
  for (const auto& row : rows) {
    json object = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (numeric[i]) {
        object[keys[i]] = json::parse(row[i]);
      } else if (keys[i] == "is_corresponding") {
        object[keys[i]] = row[i].empty() ? json(nullptr) : json(row[i] == "true");
      } else if (keys[i] == "tie_groups") {
        if (row[i].empty()) {
          object[keys[i]] = nullptr;
        } else {
          json groups = json::array();
          for (const auto& g : split(row[i], ';')) {
            json group = json::array();
            for (const auto& p : split(g, ',')) group.push_back(std::stoi(p));
            groups.push_back(group);
          }
          object[keys[i]] = groups;
        }
      } else {
        object[keys[i]] = row[i];
      }
    }
    array.push_back(std::move(object));
  }
  return array.dump(2) + "\n";
}

}  // namespace

IngestError::IngestError(std::string file, long line, std::string column,
                         const std::string& message)
    : Error(file + ":" + std::to_string(line) +
            (column.empty() ? std::string() : ": column " + column) + ": " +
            message),
      file_(std::move(file)),
      line_(line),
      column_(std::move(column)) {}

std::optional<DataFormat> parse_data_format(std::string_view name) {
  if (name == "csv") return DataFormat::csv;
  if (name == "json") return DataFormat::json;
  return std::nullopt;
}

const FacultyRecord* Corpus::find_person(std::string_view person_id) const {
  auto it = std::ranges::find(roster, person_id, &FacultyRecord::person_id);
  return it == roster.end() ? nullptr : &*it;
}

std::vector<FacultyRecord> load_roster(const std::filesystem::path& path,
                                       DataFormat format) {
  return parse_roster(read_table(path, kRosterHeader, format));
}

std::map<std::string, FundingRecord> load_funding(
    const std::filesystem::path& path, DataFormat format) {
  return parse_funding(read_table(path, kFundingHeader, format));
}

Corpus load_corpus(const CorpusPaths& paths, DataFormat format) {
  Corpus corpus;
  corpus.roster = load_roster(paths.roster, format);
  std::set<std::string, std::less<>> people;
  for (const auto& person : corpus.roster) people.insert(person.person_id);

  const auto if_rows = read_table(paths.if_table, kImpactFactorHeader, format);
  for (const auto& raw : if_rows.records) {
    Row row(if_rows, raw);
    const std::string key = row.required(0);
    const double value = row.real(1);
    if (value < 0.0) row.fail(1, "impact factor must be non-negative");
    if (!corpus.if_table.emplace(key, value).second) {
      row.fail(0, "duplicate journal_key " + key);
    }
  }

  const auto pubs = read_table(paths.publications, kPublicationsHeader, format);
  std::set<std::pair<std::string, std::string>> seen_pubs;
  for (const auto& raw : pubs.records) {
    Row row(pubs, raw);
    const std::string person_id = row.required(0);
    if (!people.contains(person_id)) {
      row.fail(0, "person_id " + person_id + " is not in the roster");
    }
    PublicationRecord record;
    record.pub_id = row.required(1);
    if (!seen_pubs.emplace(person_id, record.pub_id).second) {
      row.fail(1, "duplicate publication " + record.pub_id + " for " +
                      person_id);
    }

    const long long author_count = row.integer(2);
    if (author_count < 1) row.fail(2, "author_count must be at least 1");
    const long long position = row.integer(3);
    if (position < 1 || position > author_count) {
      row.fail(3, "subject_position must lie in 1..author_count");
    }
    record.byline.author_count = static_cast<int>(author_count);
    record.byline.subject_position = static_cast<int>(position);

    const std::string& corresponding = row.text(4);
    if (corresponding == "true") {
      record.byline.corresponding_positions.insert(
          static_cast<int>(position));
    } else if (corresponding.empty()) {
      record.roles_known = false;
      corpus.warnings.push_back(
          pubs.file + ":" + std::to_string(row.line()) + ": publication " +
          record.pub_id + " of " + person_id +
          " has no corresponding-author flag; authors ranked by byline order");
    } else if (corresponding != "false") {
      row.fail(4, "expected true or false, got '" + corresponding + "'");
    }

    record.byline.explicit_ties = parse_tie_groups(row, 5);
    try {
      record.byline.validate();
    } catch (const InvalidArgument& e) {
      row.fail(5, e.what());
    }

    record.journal_key = row.text(6);
    if (auto it = corpus.if_table.find(record.journal_key);
        it != corpus.if_table.end()) {
      record.impact_factor = it->second;
    } else {
      record.impact_factor = 0.0;
      corpus.warnings.push_back(
          pubs.file + ":" + std::to_string(row.line()) + ": journal '" +
          record.journal_key + "' of publication " + record.pub_id + " (" +
          person_id + ") has no impact factor; scored as IF = 0");
    }

    record.citations = row.integer(7);
    if (record.citations < 0) row.fail(7, "citations must be non-negative");

    corpus.publications[person_id].push_back(std::move(record));
  }

  if (paths.funding) {
    const auto table = read_table(*paths.funding, kFundingHeader, format);
    corpus.funding = parse_funding(table);
    for (std::size_t r = 0; r < table.records.size(); ++r) {
      Row row(table, table.records[r]);
      if (!people.contains(row.text(0))) {
        row.fail(0, "person_id " + row.text(0) + " is not in the roster");
      }
    }
  }
  return corpus;
}

void write_corpus(const Corpus& corpus, const CorpusPaths& paths,
                  DataFormat format) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : corpus.roster) {
    rows.push_back({p.person_id, p.group_label, p.gender, p.degree, p.title,
                    p.specialty, p.school_id, std::to_string(p.tier)});
  }
  write_text(paths.roster,
             render_table(kRosterHeader, rows,
                          {false, false, false, false, false, false, false,
                           true},
                          format));

  rows.clear();
  for (const auto& [person_id, records] : corpus.publications) {
    for (const auto& r : records) {
      std::string corresponding;
      if (r.roles_known) {
        corresponding = r.byline.corresponding_positions.contains(
                            r.byline.subject_position)
                            ? "true"
                            : "false";
      }
      rows.push_back(
          {person_id, r.pub_id, std::to_string(r.byline.author_count),
           std::to_string(r.byline.subject_position), corresponding,
           r.byline.explicit_ties ? tie_groups_to_string(*r.byline.explicit_ties)
                                  : "",
           r.journal_key, std::to_string(r.citations)});
    }
  }
  write_text(paths.publications,
             render_table(kPublicationsHeader, rows,
                          {false, false, true, true, false, false, false, true},
                          format));

  rows.clear();
  for (const auto& [key, value] : corpus.if_table) {
    rows.push_back({key, format_double(value)});
  }
  write_text(paths.if_table, render_table(kImpactFactorHeader, rows,
                                          {false, true}, format));

  if (paths.funding) {
    rows.clear();
    for (const auto& [id, f] : corpus.funding) {
      rows.push_back({id, std::to_string(f.project_count),
                      format_double(f.funding_total)});
    }
    write_text(*paths.funding, render_table(kFundingHeader, rows,
                                            {false, true, true}, format));
  }
}

ScoreTable load_scores(const std::filesystem::path& path, DataFormat format) {
  const auto table = read_table(path, kScoresHeader, format);
  ScoreTable scores;
  for (const auto& raw : table.records) {
    Row row(table, raw);
    ProductivityScores s;
    s.person_id = row.required(0);
    s.papers = row.integer(1);
    s.citations = row.integer(2);
    s.pr = row.real(3);
    s.pc = row.real(4);
    s.pcif = row.real(5);
    if (s.papers < 0 || s.citations < 0 || s.pr < 0.0 || s.pc < 0.0 ||
        s.pcif < 0.0) {
      row.fail(0, "scores must be non-negative");
    }
    if (!scores.emplace(s.person_id, s).second) {
      row.fail(0, "duplicate person_id " + s.person_id);
    }
  }
  return scores;
}

ScoreTable score_corpus(const Corpus& corpus, bool merge_corresponding) {
  ScoreTable scores;
  for (const auto& person : corpus.roster) {
    auto it = corpus.publications.find(person.person_id);
    std::vector<PublicationRecord> records;
    if (it != corpus.publications.end()) records = it->second;
    scores.emplace(person.person_id,
                   score_profile(person.person_id, std::move(records),
                                 merge_corresponding));
  }
  return scores;
}

std::string write_scores(const ScoreTable& scores, DataFormat format) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [id, s] : scores) {
    rows.push_back({id, std::to_string(s.papers), std::to_string(s.citations),
                    format_double(s.pr), format_double(s.pc),
                    format_double(s.pcif)});
  }
  return render_table(kScoresHeader, rows,
                      {false, true, true, true, true, true}, format);
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

}  // namespace aindex
