#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bugexplain/diffsbt/diff_sbt.hpp"
#include "bugexplain/explain/featurize.hpp"

namespace bugexplain::ingest {

using diffsbt::CommitDiffRecord;
using diffsbt::Tokens;
using explain::Featurizer;

enum class RecordKind { kDiscriminatory, kFinetune };

std::string_view to_string(RecordKind kind) noexcept;
/// Throws FORMAT_ERROR for anything but "discriminatory" / "finetune".
RecordKind parse_record_kind(std::string_view text);

struct TrainingRecord {
  RecordKind kind = RecordKind::kFinetune;
  Tokens input;
  std::string target;
  std::map<std::string, std::string> meta;

  friend bool operator==(const TrainingRecord&, const TrainingRecord&) = default;
};

// Meta keys written by build_training_records.
inline constexpr std::string_view kMetaCommit = "commit";
inline constexpr std::string_view kMetaFile = "file";
inline constexpr std::string_view kMetaFeaturizer = "featurizer";
inline constexpr std::string_view kMetaRange = "range";  // "start-end" of removed lines

struct RecordOptions {
  int radius = diffsbt::kDefaultRadius;
  std::vector<Featurizer> featurizers{Featurizer::kStructural};
};

/// One discriminatory and one finetune record per featurizer. The
/// discriminatory input is the whole buggy/separator/bug-free sequence and
/// the finetune input is its buggy half; pure additions (no removed lines)
/// get no finetune record. Parse errors skip the record with a
/// logged reason and yield an empty list. Throws EMPTY_TARGET for a blank
/// message and INVALID_RANGE for line sets outside their image.
std::vector<TrainingRecord> build_training_records(const CommitDiffRecord& record,
                                                   const RecordOptions& options = {});

/// Plaintext counterpart of diff_sbt: lexical tokens of both sides around
/// the changed lines, joined by the separator.
Tokens diff_plaintext(const CommitDiffRecord& record, int radius = diffsbt::kDefaultRadius);

/// Atomic: the records land in a sibling temp file which is renamed over
/// `path`. Throws IO_ERROR.
void write_corpus(std::span<const TrainingRecord> records, const std::filesystem::path& path);

/// Throws IO_ERROR if the file cannot be opened and FORMAT_ERROR naming the
/// 1-indexed line of the first malformed record. Blank lines are ignored.
std::vector<TrainingRecord> read_corpus(const std::filesystem::path& path);

std::string to_json_line(const TrainingRecord& record);
TrainingRecord from_json_line(std::string_view line);

}  // namespace bugexplain::ingest
