#include "bugexplain/ingest/pipeline.hpp"

#include <atomic>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "bugexplain/ast/simple_node.hpp"
#include "bugexplain/error.hpp"
#include "bugexplain/ingest/message.hpp"
#include "bugexplain/ingest/unified_diff.hpp"

namespace bugexplain::ingest {
namespace {

bool is_python(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".py") == 0;
}

const std::string& lookup(const std::map<std::string, std::string>& files,
                          const std::string& path) {
  static const std::string empty;
  if (path.empty()) return empty;
  auto it = files.find(path);
  if (it == files.end()) {
    throw Error(ErrorCode::kIoError, fmt::format("missing file content for {}", path));
  }
  return it->second;
}

struct CommitOutcome {
  std::vector<TrainingRecord> records;
  IngestStats stats;
};

CommitOutcome process(CommitSource& source, const std::string& id,
                      const std::vector<std::string>& keywords, const RecordOptions& options) {
  CommitOutcome out;
  out.stats.commits = 1;
  RawCommit commit;
  try {
    commit = source.load(id);
  } catch (const std::exception& e) {
    spdlog::warn("skipping commit {}: {}", id, e.what());
    out.stats.load_errors = 1;
    return out;
  }
  if (!is_bugfix_message(commit.message, keywords)) {
    out.stats.non_bugfix = 1;
    return out;
  }
  std::vector<CommitDiffRecord> diffs;
  try {
    diffs = diff_records(commit, out.stats);
  } catch (const Error& e) {
    spdlog::warn("skipping commit {}: {}", id, e.what());
    out.stats.load_errors = 1;
    return out;
  }
  for (const auto& diff : diffs) {
    try {
      auto records = build_training_records(diff, options);
      if (records.empty()) {
        ++out.stats.parse_errors;
        continue;
      }
      for (auto& record : records) out.records.push_back(std::move(record));
    } catch (const Error& e) {
      spdlog::warn("skipping {} in {}: {}", diff.file_path, id, e.what());
      ++out.stats.invalid;
    }
  }
  return out;
}

void accumulate(IngestStats& total, const IngestStats& part) {
  total.commits += part.commits;
  total.non_bugfix += part.non_bugfix;
  total.load_errors += part.load_errors;
  total.files += part.files;
  total.non_python += part.non_python;
  total.unchanged += part.unchanged;
  total.parse_errors += part.parse_errors;
  total.invalid += part.invalid;
}

}  // namespace

std::vector<CommitDiffRecord> diff_records(const RawCommit& commit, IngestStats& stats) {
  std::vector<CommitDiffRecord> out;
  for (auto& file : parse_unified_diff(commit.patch)) {
    ++stats.files;
    if (!is_python(file.path())) {
      ++stats.non_python;
      continue;
    }
    if (file.removed.empty() && file.added.empty()) {
      ++stats.unchanged;
      continue;
    }
    CommitDiffRecord record;
    record.id = commit.id;
    record.message = commit.message;
    record.file_path = file.path();
    record.buggy_code = lookup(commit.before, file.old_path);
    record.bugfree_code = lookup(commit.after, file.new_path);
    record.removed = std::move(file.removed);
    record.added = std::move(file.added);
    out.push_back(std::move(record));
  }
  return out;
}

IngestResult ingest(CommitSource& source, const IngestOptions& options) {
  const std::vector<std::string> ids = source.list();
  const std::vector<std::string>& keywords =
      options.keywords.empty() ? default_bugfix_keywords() : options.keywords;

  std::vector<CommitOutcome> outcomes(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      outcomes[i] = process(source, ids[i], keywords, options.records);
    }
  };
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(ids.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  IngestResult result;
  for (auto& outcome : outcomes) {
    accumulate(result.stats, outcome.stats);
    for (auto& record : outcome.records) result.records.push_back(std::move(record));
  }
  result.stats.records = result.records.size();
  return result;
}

}  // namespace bugexplain::ingest
