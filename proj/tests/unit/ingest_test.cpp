#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>

#include "bugexplain/error.hpp"
#include "bugexplain/ingest/message.hpp"
#include "bugexplain/ingest/pipeline.hpp"
#include "bugexplain/ingest/training_record.hpp"
#include "bugexplain/ingest/unified_diff.hpp"
#include "test_data.hpp"

using namespace bugexplain;
using namespace bugexplain::ingest;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kBadRequest;
}

std::vector<std::string> lines_of_text(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> without(const std::vector<std::string>& lines, const LineSet& drop) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!drop.count(static_cast<int>(i) + 1)) out.push_back(lines[i]);
  }
  return out;
}

std::vector<fs::path> commit_dirs() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(test::data_dir() / "commits")) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

CommitDiffRecord fig2_record() {
  const auto dir = test::data_dir() / "fig2" / "cond-branch";
  return CommitDiffRecord{"fig2",
                          test::read_file(dir / "message"),
                          "cond.py",
                          test::read_file(dir / "before" / "cond.py"),
                          test::read_file(dir / "after" / "cond.py"),
                          {3},
                          {3}};
}

}  // namespace

TEST(UnifiedDiff, ReplaceHunk) {
  auto files = parse_unified_diff("--- a/f.py\n+++ b/f.py\n@@ -3,2 +3,2 @@\n-old\n+new\n ctx\n");
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0].path(), "f.py");
  EXPECT_EQ(files[0].removed, LineSet{3});
  EXPECT_EQ(files[0].added, LineSet{3});
}

TEST(UnifiedDiff, AddOnlyHunk) {
  auto files = parse_unified_diff("--- a/f.py\n+++ b/f.py\n@@ -5,0 +6,2 @@\n+a\n+b\n");
  ASSERT_EQ(files.size(), 1u);
  EXPECT_TRUE(files[0].removed.empty());
  EXPECT_EQ(files[0].added, (LineSet{6, 7}));
}

TEST(UnifiedDiff, EmptyText) { EXPECT_TRUE(parse_unified_diff("").empty()); }

TEST(UnifiedDiff, GitHeadersAndNewAndDeletedFiles) {
  const std::string text =
      "diff --git a/new.py b/new.py\n"
      "new file mode 100644\n"
      "index 0000000..e69de29\n"
      "--- /dev/null\n"
      "+++ b/new.py\n"
      "@@ -0,0 +1 @@\n"
      "+x = 1\n"
      "diff --git a/old.py b/old.py\n"
      "deleted file mode 100644\n"
      "--- a/old.py\n"
      "+++ /dev/null\n"
      "@@ -1,2 +0,0 @@\n"
      "-a = 1\n"
      "-b = 2\n"
      "\\ No newline at end of file\n";
  auto files = parse_unified_diff(text);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_TRUE(files[0].old_path.empty());
  EXPECT_EQ(files[0].new_path, "new.py");
  EXPECT_EQ(files[0].added, LineSet{1});
  EXPECT_EQ(files[1].path(), "old.py");
  EXPECT_TRUE(files[1].new_path.empty());
  EXPECT_EQ(files[1].removed, (LineSet{1, 2}));
}

TEST(UnifiedDiff, BinaryOrModeOnlyEntryHasNoLines) {
  auto files = parse_unified_diff(
      "diff --git a/img.png b/img.png\nBinary files a/img.png and b/img.png differ\n");
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0].path(), "img.png");
  EXPECT_TRUE(files[0].removed.empty() && files[0].added.empty());
}

TEST(UnifiedDiff, Malformed) {
  EXPECT_EQ(code_of([] { parse_unified_diff("@@ -1 +1 @@\n-a\n+b\n"); }),
            ErrorCode::kMalformedDiff);
  EXPECT_EQ(code_of([] { parse_unified_diff("--- a/f\n+++ b/f\n@@ -1,2 +1,2 @@\n-a\n+b\n"); }),
            ErrorCode::kMalformedDiff);
  EXPECT_EQ(code_of([] { parse_unified_diff("--- a/f\n+++ b/f\n@@ -1,1 +1,1 @@\n-a\n-b\n+c\n"); }),
            ErrorCode::kMalformedDiff);
  EXPECT_EQ(code_of([] { parse_unified_diff("--- a/f\n+++ b/f\n@@ garbage @@\n"); }),
            ErrorCode::kMalformedDiff);
}

// expected.json in each commit holds the line sets computed by Python's
// difflib from the two file images.
TEST(UnifiedDiff, AgreesWithReferenceDiffTool) {
  int checked = 0;
  for (const auto& dir : commit_dirs()) {
    SCOPED_TRACE(dir.filename().string());
    const auto expected = test::read_json(dir / "expected.json");
    const auto files = parse_unified_diff(test::read_file(dir / "patch.diff"));
    ASSERT_EQ(files.size(), expected.size());
    for (const auto& f : files) {
      const auto& e = expected.at(f.path());
      EXPECT_EQ(f.removed, e.at("removed").get<LineSet>());
      EXPECT_EQ(f.added, e.at("added").get<LineSet>());
      ++checked;
    }
  }
  EXPECT_GE(checked, 80);
}

TEST(UnifiedDiff, LineSetsTransformPreImageIntoPostImage) {
  for (const auto& dir : commit_dirs()) {
    for (const auto& f : parse_unified_diff(test::read_file(dir / "patch.diff"))) {
      SCOPED_TRACE(dir.filename().string() + "/" + f.path());
      const auto before = lines_of_text(test::read_file(dir / "before" / f.old_path));
      const auto after = lines_of_text(test::read_file(dir / "after" / f.new_path));
      EXPECT_EQ(without(before, f.removed), without(after, f.added));
    }
  }
}

TEST(Message, BugfixFilter) {
  EXPECT_TRUE(is_bugfix_message("fix crash when lyrics not found"));
  EXPECT_FALSE(is_bugfix_message("add dark mode toggle"));
  EXPECT_TRUE(is_bugfix_message("Fixes #42"));
  EXPECT_FALSE(is_bugfix_message("Add feature\n\nfixes a bug in the body"));
  const std::vector<std::string> custom{"oops"};
  EXPECT_TRUE(is_bugfix_message("Oops, wrong flag", custom));
  EXPECT_FALSE(is_bugfix_message("fix it", custom));
}

TEST(Message, Normalize) {
  EXPECT_EQ(normalize_message("Fix crash when lyrics not found\n\nLong body\n"),
            "fix crash when lyrics not found");
  EXPECT_EQ(normalize_message("  FIX   #42  NPE  "), "fix npe");
  EXPECT_EQ(normalize_message("Fix parser (#265)"), "fix parser");
  EXPECT_EQ(normalize_message("fix\tTABS\r\n"), "fix tabs");
  EXPECT_EQ(code_of([] { normalize_message("\n\n"); }), ErrorCode::kEmptyTarget);
  EXPECT_EQ(code_of([] { normalize_message("#12 #13"); }), ErrorCode::kEmptyTarget);
}

TEST(Message, SplitKeywords) {
  EXPECT_EQ(split_keywords("fix,bug , crash,,"), (std::vector<std::string>{"fix", "bug", "crash"}));
  EXPECT_TRUE(split_keywords("").empty());
}

TEST(TrainingRecords, DiscriminatoryAndFinetunePair) {
  CommitDiffRecord r{"c1", "Fix value\n", "a.py", "x = 1\n", "x = 2\n", {1}, {1}};
  auto records = build_training_records(r);
  ASSERT_EQ(records.size(), 2u);
  const auto seq = diffsbt::diff_sbt(r);
  EXPECT_EQ(records[0].kind, RecordKind::kDiscriminatory);
  EXPECT_EQ(records[0].input, seq.tokens);
  EXPECT_EQ(records[1].kind, RecordKind::kFinetune);
  EXPECT_EQ(records[1].input, seq.buggy_half());
  for (const auto& rec : records) {
    EXPECT_EQ(rec.target, "fix value");
    EXPECT_EQ(rec.meta.at(std::string(kMetaCommit)), "c1");
    EXPECT_EQ(rec.meta.at(std::string(kMetaFile)), "a.py");
    EXPECT_EQ(rec.meta.at(std::string(kMetaFeaturizer)), "structural");
    EXPECT_EQ(rec.meta.at(std::string(kMetaRange)), "1-1");
  }
}

TEST(TrainingRecords, UnparseableImageIsSkipped) {
  CommitDiffRecord r{"c1", "fix", "a.py", "x = (\n", "x = 2\n", {1}, {1}};
  EXPECT_TRUE(build_training_records(r).empty());
}

TEST(TrainingRecords, PureAdditionHasNoFinetuneRecord) {
  CommitDiffRecord r{"c1", "fix", "a.py", "x = 1\n", "x = 1\ny = 2\n", {}, {2}};
  auto records = build_training_records(r);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].kind, RecordKind::kDiscriminatory);
  EXPECT_EQ(records[0].input.front(), diffsbt::kSeparator);
}

TEST(TrainingRecords, Fig2PairDiffersByBugFreeHalf) {
  auto records = build_training_records(fig2_record());
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].target, records[1].target);
  EXPECT_EQ(records[0].target, "fix assignment placed outside the branch");
  const auto& full = records[0].input;
  const auto& buggy = records[1].input;
  ASSERT_GT(full.size(), buggy.size());
  EXPECT_TRUE(std::equal(buggy.begin(), buggy.end(), full.begin()));
  EXPECT_EQ(full[buggy.size()], diffsbt::kSeparator);
  const diffsbt::Tokens suffix(full.begin() + static_cast<long>(buggy.size()) + 1, full.end());
  EXPECT_EQ(suffix, diffsbt::diff_sbt(fig2_record()).bugfree_half());
}

TEST(TrainingRecords, SeparatorCounts) {
  RecordOptions both{diffsbt::kDefaultRadius,
                     {explain::Featurizer::kStructural, explain::Featurizer::kPlaintext}};
  auto records = build_training_records(fig2_record(), both);
  ASSERT_EQ(records.size(), 4u);
  for (const auto& r : records) {
    auto seps = std::count(r.input.begin(), r.input.end(), std::string(diffsbt::kSeparator));
    EXPECT_EQ(seps, r.kind == RecordKind::kDiscriminatory ? 1 : 0);
    EXPECT_EQ(r.target.find('\n'), std::string::npos);
    EXPECT_FALSE(r.target.empty());
  }
  EXPECT_EQ(records[2].meta.at(std::string(kMetaFeaturizer)), "plaintext");
  EXPECT_EQ(records[2].input, diff_plaintext(fig2_record()));
}

TEST(TrainingRecords, PlaintextSidesShareTokenMultiset) {
  auto tokens = diff_plaintext(fig2_record());
  auto sep = std::find(tokens.begin(), tokens.end(), std::string(diffsbt::kSeparator));
  ASSERT_NE(sep, tokens.end());
  std::vector<std::string> a(tokens.begin(), sep);
  std::vector<std::string> b(sep + 1, tokens.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
}

TEST(TrainingRecords, Errors) {
  CommitDiffRecord blank{"c", "  \n", "a.py", "x = 1\n", "x = 2\n", {1}, {1}};
  EXPECT_EQ(code_of([&] { build_training_records(blank); }), ErrorCode::kEmptyTarget);
  CommitDiffRecord outside{"c", "fix", "a.py", "x = 1\n", "x = 2\n", {5}, {1}};
  EXPECT_EQ(code_of([&] { build_training_records(outside); }), ErrorCode::kInvalidRange);
}

TEST(Corpus, RoundTripOfRandomRecords) {
  std::mt19937 rng(42);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const std::vector<std::string> pool = {"(", ")", "Name_x", "</s>", "Constant_'a\"b'",
                                         "ünï", "\\", "\t", "Call", "{}"};
  std::vector<TrainingRecord> records;
  for (int i = 0; i < 100; ++i) {
    TrainingRecord r;
    r.kind = pick(2) ? RecordKind::kFinetune : RecordKind::kDiscriminatory;
    for (int k = pick(30); k > 0; --k) r.input.push_back(pool[static_cast<std::size_t>(pick(10))]);
    r.target = "fix thing " + std::to_string(i) + (pick(2) ? " \"quoted\"" : "");
    r.meta["commit"] = std::to_string(pick(1000));
    if (pick(2)) r.meta["file"] = "pkg/m" + std::to_string(i) + ".py";
    records.push_back(std::move(r));
  }
  test::TempDir tmp;
  write_corpus(records, tmp.path() / "c.jsonl");
  EXPECT_EQ(read_corpus(tmp.path() / "c.jsonl"), records);
  EXPECT_EQ(from_json_line(to_json_line(records[0])), records[0]);
}

TEST(Corpus, MalformedLineIsNamed) {
  test::TempDir tmp;
  TrainingRecord r{RecordKind::kFinetune, {"a"}, "fix", {}};
  std::string text;
  for (int i = 0; i < 6; ++i) text += to_json_line(r) + "\n";
  text += "{\"kind\": \"finetune\", \"input\": [1, 2]}\n";
  text += to_json_line(r) + "\n";
  test::write_file(tmp.path() / "bad.jsonl", text);
  try {
    read_corpus(tmp.path() / "bad.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormatError);
    EXPECT_NE(std::string(e.what()).find(":7"), std::string::npos) << e.what();
  }
}

TEST(Corpus, EmptyBlankAndMissingFiles) {
  test::TempDir tmp;
  test::write_file(tmp.path() / "empty.jsonl", "");
  EXPECT_TRUE(read_corpus(tmp.path() / "empty.jsonl").empty());
  TrainingRecord r{RecordKind::kFinetune, {"a"}, "fix", {}};
  test::write_file(tmp.path() / "blank.jsonl", "\n" + to_json_line(r) + "\n\n");
  EXPECT_EQ(read_corpus(tmp.path() / "blank.jsonl").size(), 1u);
  EXPECT_EQ(code_of([&] { read_corpus(tmp.path() / "nope.jsonl"); }), ErrorCode::kIoError);
  EXPECT_EQ(code_of([&] { write_corpus({}, tmp.path() / "no" / "dir" / "c.jsonl"); }),
            ErrorCode::kIoError);
  EXPECT_EQ(code_of([] { from_json_line("{\"kind\":\"other\",\"input\":[],\"target\":\"t\"}"); }),
            ErrorCode::kFormatError);
}

TEST(Corpus, WriteReplacesExistingFile) {
  test::TempDir tmp;
  const auto path = tmp.path() / "c.jsonl";
  test::write_file(path, "stale\n");
  TrainingRecord r{RecordKind::kFinetune, {"a"}, "fix", {}};
  write_corpus(std::vector{r}, path);
  EXPECT_EQ(read_corpus(path), std::vector{r});
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp.path())) ++entries;
  EXPECT_EQ(entries, 1u);
}

TEST(Pipeline, DiffDirCountsMatchIndependentTally) {
  // Tally from the raw files with the keyword rule spelled out directly.
  std::size_t bugfix = 0;
  std::size_t py_files = 0;
  std::size_t other_files = 0;
  for (const auto& dir : commit_dirs()) {
    std::string first = lines_of_text(test::read_file(dir / "message")).at(0);
    std::transform(first.begin(), first.end(), first.begin(), ::tolower);
    bool fix = false;
    for (const char* k : {"fix", "bug", "crash", "error", "fault", "defect", "issue", "fail"}) {
      fix = fix || first.find(k) != std::string::npos;
    }
    if (!fix) continue;
    ++bugfix;
    const auto expected = test::read_json(dir / "expected.json");
    for (const auto& [path, _] : expected.items()) {
      (path.ends_with(".py") ? py_files : other_files)++;
    }
  }

  auto source = open_diff_dir(test::data_dir() / "commits");
  auto result = ingest::ingest(*source, IngestOptions{});
  const auto& s = result.stats;
  EXPECT_EQ(s.commits, commit_dirs().size());
  EXPECT_EQ(s.commits - s.non_bugfix, bugfix);
  EXPECT_GE(bugfix, 50u);
  EXPECT_EQ(s.files, py_files + other_files);
  EXPECT_EQ(s.non_python, other_files);
  EXPECT_EQ(s.load_errors + s.parse_errors + s.invalid + s.unchanged, 0u);
  EXPECT_EQ(s.records, result.records.size());

  std::size_t finetune = 0;
  for (const auto& r : result.records) finetune += r.kind == RecordKind::kFinetune;
  EXPECT_EQ(result.records.size() - finetune, py_files);
  EXPECT_GE(finetune, 50u);
}

TEST(Pipeline, OutputIndependentOfThreadCount) {
  auto source = open_diff_dir(test::data_dir() / "commits");
  IngestOptions one;
  one.threads = 1;
  IngestOptions many;
  many.threads = 8;
  auto a = ingest::ingest(*source, one);
  auto b = ingest::ingest(*source, many);
  EXPECT_EQ(a.records, b.records);
}

TEST(Pipeline, CustomKeywords) {
  auto source = open_diff_dir(test::data_dir() / "commits");
  IngestOptions options;
  options.keywords = {"dark mode"};
  auto result = ingest::ingest(*source, options);
  EXPECT_EQ(result.stats.commits - result.stats.non_bugfix, 1u);
}

TEST(Pipeline, DiffDirRejectsEscapingPaths) {
  test::TempDir tmp;
  const auto c = tmp.path() / "c1";
  test::write_file(c / "message", "fix it\n");
  test::write_file(c / "patch.diff", "--- a/../x.py\n+++ b/../x.py\n@@ -1 +1 @@\n-a\n+b\n");
  auto source = open_diff_dir(tmp.path());
  EXPECT_EQ(code_of([&] { source->load("c1"); }), ErrorCode::kMalformedDiff);
  auto result = ingest::ingest(*source, IngestOptions{});
  EXPECT_EQ(result.stats.load_errors, 1u);
  EXPECT_TRUE(result.records.empty());
  EXPECT_EQ(code_of([&] { open_diff_dir(tmp.path() / "missing"); }), ErrorCode::kIoError);
}

TEST(Pipeline, DiffRecordsNeedFileContents) {
  RawCommit commit{"c", "fix", "--- a/a.py\n+++ b/a.py\n@@ -1 +1 @@\n-x = 1\n+x = 2\n", {}, {}};
  IngestStats stats;
  EXPECT_EQ(code_of([&] { diff_records(commit, stats); }), ErrorCode::kIoError);
  commit.before["a.py"] = "x = 1\n";
  commit.after["a.py"] = "x = 2\n";
  auto records = diff_records(commit, stats);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].removed, LineSet{1});
}

TEST(Pipeline, GitRepository) {
  if (std::system("git --version > /dev/null 2>&1") != 0) GTEST_SKIP() << "git not available";
  test::TempDir tmp;
  const auto repo = tmp.path().string();
  auto git = [&](const std::string& args) {
    const std::string cmd = "git -C '" + repo +
                            "' -c user.name=t -c user.email=t@example.com -c commit.gpgsign=false " +
                            args + " > /dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0) << cmd;
  };
  git("init -q");
  test::write_file(tmp.path() / "app.py", "def f(x):\n    return x.y\n");
  test::write_file(tmp.path() / "notes.md", "notes\n");
  git("add -A");
  git("commit -q -m 'Initial import'");
  test::write_file(tmp.path() / "app.py",
                   "def f(x):\n    if x is None:\n        return None\n    return x.y\n");
  test::write_file(tmp.path() / "notes.md", "notes\nmore\n");
  git("add -A");
  git("commit -q -m 'Fix crash on missing value (#7)' -m 'Body text.'");
  test::write_file(tmp.path() / "app.py",
                   "def f(x):\n    if x is None:\n        return None\n    return x.z\n");
  git("commit -q -am 'Rename attribute'");

  auto source = open_git_repo(tmp.path());
  ASSERT_EQ(source->list().size(), 3u);
  auto result = ingest::ingest(*source, IngestOptions{});
  EXPECT_EQ(result.stats.commits, 3u);
  EXPECT_EQ(result.stats.non_bugfix, 2u);
  EXPECT_EQ(result.stats.non_python, 1u);
  ASSERT_EQ(result.records.size(), 1u);  // pure addition: discriminatory only
  EXPECT_EQ(result.records[0].target, "fix crash on missing value");
  EXPECT_EQ(result.records[0].meta.at("file"), "app.py");

  EXPECT_EQ(code_of([&] { open_git_repo(tmp.path() / "nope"); }), ErrorCode::kIoError);
}
