#include "bugexplain/ingest/training_record.hpp"

#include <fstream>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "bugexplain/error.hpp"
#include "bugexplain/ingest/message.hpp"

namespace bugexplain::ingest {
namespace {

using nlohmann::json;

std::string range_label(const diffsbt::LineSet& lines) {
  if (lines.empty()) return {};
  return fmt::format("{}-{}", *lines.begin(), *lines.rbegin());
}

Tokens with_separator(Tokens buggy, Tokens bugfree) {
  buggy.emplace_back(diffsbt::kSeparator);
  buggy.insert(buggy.end(), std::make_move_iterator(bugfree.begin()),
               std::make_move_iterator(bugfree.end()));
  return buggy;
}

}  // namespace

std::string_view to_string(RecordKind kind) noexcept {
  return kind == RecordKind::kDiscriminatory ? "discriminatory" : "finetune";
}

RecordKind parse_record_kind(std::string_view text) {
  if (text == "discriminatory") return RecordKind::kDiscriminatory;
  if (text == "finetune") return RecordKind::kFinetune;
  throw Error(ErrorCode::kFormatError, fmt::format("unknown record kind '{}'", text));
}

Tokens diff_plaintext(const CommitDiffRecord& record, int radius) {
  return with_separator(explain::plaintext_tokens(record.buggy_code, record.removed, radius),
                        explain::plaintext_tokens(record.bugfree_code, record.added, radius));
}

std::vector<TrainingRecord> build_training_records(const CommitDiffRecord& record,
                                                   const RecordOptions& options) {
  const std::string target = normalize_message(record.message);
  std::vector<TrainingRecord> out;
  for (Featurizer featurizer : options.featurizers) {
    diffsbt::DiffSbtSequence sequence;
    try {
      sequence.tokens = featurizer == Featurizer::kStructural
                            ? diffsbt::diff_sbt(record, options.radius).tokens
                            : diff_plaintext(record, options.radius);
    } catch (const ParseError& e) {
      spdlog::warn("skipping {} in {}: {}", record.file_path, record.id, e.what());
      return {};
    }
    std::map<std::string, std::string> meta{
        {std::string(kMetaCommit), record.id},
        {std::string(kMetaFile), record.file_path},
        {std::string(kMetaFeaturizer), std::string(explain::to_string(featurizer))},
        {std::string(kMetaRange), range_label(record.removed)},
    };
    Tokens buggy = sequence.buggy_half();
    out.push_back({RecordKind::kDiscriminatory, std::move(sequence.tokens), target, meta});
    // A pure addition has no buggy selection to explain at inference time.
    if (!record.removed.empty()) {
      out.push_back({RecordKind::kFinetune, std::move(buggy), target, std::move(meta)});
    }
  }
  return out;
}

std::string to_json_line(const TrainingRecord& record) {
  json j;
  j["kind"] = to_string(record.kind);
  j["input"] = record.input;
  j["target"] = record.target;
  j["meta"] = record.meta;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

TrainingRecord from_json_line(std::string_view line) {
  TrainingRecord record;
  try {
    json j = json::parse(line);
    record.kind = parse_record_kind(j.at("kind").get<std::string>());
    record.input = j.at("input").get<Tokens>();
    record.target = j.at("target").get<std::string>();
    if (auto meta = j.find("meta"); meta != j.end() && !meta->is_null()) {
      record.meta = meta->get<std::map<std::string, std::string>>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
  if (record.target.empty()) throw Error(ErrorCode::kFormatError, "empty target");
  return record;
}

void write_corpus(std::span<const TrainingRecord> records, const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::random_device rd;
  fs::path tmp = path;
  tmp += fmt::format(".tmp{:08x}", rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIoError, fmt::format("cannot write {}", tmp.string()));
    }
    for (const auto& record : records) out << to_json_line(record) << '\n';
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorCode::kIoError, fmt::format("write to {} failed", tmp.string()));
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, fmt::format("cannot replace {}", path.string()));
  }
}

std::vector<TrainingRecord> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, fmt::format("cannot open {}", path.string()));
  std::vector<TrainingRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(from_json_line(line));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kFormatError,
                  fmt::format("{}:{}: malformed record: {}", path.string(), line_no, e.what()));
    }
  }
  return records;
}

}  // namespace bugexplain::ingest
