#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aindex/cohort.hpp"
#include "aindex/error.hpp"
#include "aindex/funding.hpp"
#include "aindex/productivity.hpp"

namespace aindex {

/// A schema or integrity violation located in an input file. `line` is the
/// 1-based physical line for CSV and the 1-based record index for JSON;
/// `column` names the offending field (empty when the whole record is at
/// fault).
class IngestError : public Error {
 public:
  IngestError(std::string file, long line, std::string column,
              const std::string& message);

  const std::string& file() const { return file_; }
  long line() const { return line_; }
  const std::string& column() const { return column_; }

 private:
  std::string file_;
  long line_;
  std::string column_;
};

enum class DataFormat { csv, json };

std::optional<DataFormat> parse_data_format(std::string_view name);

inline constexpr std::string_view kRosterHeader =
    "person_id,group_label,gender,degree,title,specialty,school_id,tier";
inline constexpr std::string_view kPublicationsHeader =
    "person_id,pub_id,author_count,subject_position,is_corresponding,"
    "tie_groups,journal_key,citations";
inline constexpr std::string_view kFundingHeader =
    "person_id,project_count,funding_total";
inline constexpr std::string_view kImpactFactorHeader =
    "journal_key,impact_factor";

struct Corpus {
  std::vector<FacultyRecord> roster;
  std::map<std::string, std::vector<PublicationRecord>> publications;
  std::map<std::string, FundingRecord> funding;
  std::map<std::string, double> if_table;
  std::vector<std::string> warnings;

  const FacultyRecord* find_person(std::string_view person_id) const;
};

struct CorpusPaths {
  std::filesystem::path roster;
  std::filesystem::path publications;
  std::optional<std::filesystem::path> funding;
  std::filesystem::path if_table;
};

/// Loads and cross-validates all inputs. Journal keys missing from the
/// impact-factor table score IF = 0 and add a warning; an absent funding
/// path yields an empty funding map.
Corpus load_corpus(const CorpusPaths& paths, DataFormat format);

/// Writes the corpus back out under the same schemas.
void write_corpus(const Corpus& corpus, const CorpusPaths& paths,
                  DataFormat format);

/// Loads the roster on its own.
std::vector<FacultyRecord> load_roster(const std::filesystem::path& path,
                                       DataFormat format);

inline constexpr std::string_view kScoresHeader =
    "person_id,papers,citations,pr,pc,pcif";

/// Reads a scores file in the layout written by `write_scores`.
ScoreTable load_scores(const std::filesystem::path& path, DataFormat format);

/// Reads a funding file on its own.
std::map<std::string, FundingRecord> load_funding(
    const std::filesystem::path& path, DataFormat format);

/// Scores every roster member in person_id order. Members without
/// publications get all-zero scores.
ScoreTable score_corpus(const Corpus& corpus, bool merge_corresponding = true);

/// Renders scores as CSV (`kScoresHeader`) or a JSON array, full precision.
std::string write_scores(const ScoreTable& scores, DataFormat format);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

}  // namespace aindex
