#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bugexplain/ingest/training_record.hpp"

namespace bugexplain::ingest {

/// Everything needed to turn one commit into diff records. `before` and
/// `after` map repository paths to file contents for the touched files.
struct RawCommit {
  std::string id;
  std::string message;
  std::string patch;
  std::map<std::string, std::string> before;
  std::map<std::string, std::string> after;
};

class CommitSource {
 public:
  virtual ~CommitSource() = default;
  virtual std::vector<std::string> list() = 0;
  /// Must be safe to call from several threads at once.
  virtual RawCommit load(const std::string& id) = 0;
};

/// Directory layout, one subdirectory per commit:
///   <dir>/<id>/message
///   <dir>/<id>/patch.diff
///   <dir>/<id>/before/<path>   (absent for added files)
///   <dir>/<id>/after/<path>    (absent for deleted files)
/// Commits are listed in lexicographic order of their directory names.
std::unique_ptr<CommitSource> open_diff_dir(const std::filesystem::path& dir);

/// Non-merge commits reachable from HEAD, oldest first, read through the
/// git command line. Root commits are listed but yield no files.
std::unique_ptr<CommitSource> open_git_repo(const std::filesystem::path& repo);

struct IngestOptions {
  std::vector<std::string> keywords;  // empty means the default set
  RecordOptions records;
  unsigned threads = 0;  // 0 picks hardware concurrency
};

struct IngestStats {
  std::size_t commits = 0;
  std::size_t non_bugfix = 0;
  std::size_t load_errors = 0;
  std::size_t files = 0;
  std::size_t non_python = 0;
  std::size_t unchanged = 0;
  std::size_t parse_errors = 0;
  std::size_t invalid = 0;
  std::size_t records = 0;
};

struct IngestResult {
  std::vector<TrainingRecord> records;
  IngestStats stats;
};

/// Python files touched by the commit, with their line sets. Throws
/// MALFORMED_DIFF and INVALID_RANGE; counts skipped files into `stats`.
std::vector<CommitDiffRecord> diff_records(const RawCommit& commit, IngestStats& stats);

/// Filters bug-fix commits and builds their records. Commits are processed
/// in parallel but the output order always follows `source.list()`.
IngestResult ingest(CommitSource& source, const IngestOptions& options);

}  // namespace bugexplain::ingest
