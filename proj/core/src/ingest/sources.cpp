#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "bugexplain/error.hpp"
#include "bugexplain/ingest/pipeline.hpp"
#include "bugexplain/ingest/unified_diff.hpp"

namespace bugexplain::ingest {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, fmt::format("cannot read {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Rejects absolute paths and ".." so a patch cannot point outside the
// commit directory.
fs::path contained(const fs::path& root, const std::string& relative) {
  fs::path rel(relative);
  if (rel.is_absolute() ||
      std::any_of(rel.begin(), rel.end(), [](const fs::path& p) { return p == ".."; })) {
    throw Error(ErrorCode::kMalformedDiff, fmt::format("unsafe path '{}' in patch", relative));
  }
  return root / rel;
}

class DiffDirSource : public CommitSource {
 public:
  explicit DiffDirSource(fs::path dir) : dir_(std::move(dir)) {
    if (!fs::is_directory(dir_)) {
      throw Error(ErrorCode::kIoError, fmt::format("{} is not a directory", dir_.string()));
    }
  }

  std::vector<std::string> list() override {
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(dir_)) {
      if (entry.is_directory()) ids.push_back(entry.path().filename().string());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  RawCommit load(const std::string& id) override {
    const fs::path root = dir_ / id;
    RawCommit commit;
    commit.id = id;
    commit.message = read_file(root / "message");
    commit.patch = read_file(root / "patch.diff");
    for (const auto& file : parse_unified_diff(commit.patch)) {
      if (!file.old_path.empty()) {
        auto path = contained(root / "before", file.old_path);
        if (fs::exists(path)) commit.before[file.old_path] = read_file(path);
      }
      if (!file.new_path.empty()) {
        auto path = contained(root / "after", file.new_path);
        if (fs::exists(path)) commit.after[file.new_path] = read_file(path);
      }
    }
    return commit;
  }

 private:
  fs::path dir_;
};

std::string shell_quote(const std::string& text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

// Runs a git command and returns its stdout. A non-zero exit is an
// IO_ERROR unless `allow_failure` is set, in which case nullopt is returned.
std::optional<std::string> run_git(const fs::path& repo, const std::string& args,
                                   bool allow_failure = false) {
  const std::string command =
      fmt::format("git -C {} {} 2>/dev/null", shell_quote(repo.string()), args);
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) throw Error(ErrorCode::kIoError, "cannot start git");
  std::string output;
  std::array<char, 65536> buffer{};
  std::size_t n = 0;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    output.append(buffer.data(), n);
  }
  const int status = ::pclose(pipe);
  if (status != 0) {
    if (allow_failure) return std::nullopt;
    throw Error(ErrorCode::kIoError, fmt::format("git {} failed", args));
  }
  return output;
}

bool is_hex_id(const std::string& id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isxdigit(static_cast<unsigned char>(c)) != 0;
  });
}

class GitSource : public CommitSource {
 public:
  explicit GitSource(fs::path repo) : repo_(std::move(repo)) {
    if (!run_git(repo_, "rev-parse --git-dir", true)) {
      throw Error(ErrorCode::kIoError, fmt::format("{} is not a git repository", repo_.string()));
    }
  }

  std::vector<std::string> list() override {
    auto log = run_git(repo_, "log --no-merges --reverse --format=%H HEAD", true);
    std::vector<std::string> ids;
    if (!log) return ids;  // empty repository
    std::istringstream lines(*log);
    std::string id;
    while (std::getline(lines, id)) {
      if (!id.empty()) ids.push_back(id);
    }
    return ids;
  }

  RawCommit load(const std::string& id) override {
    if (!is_hex_id(id)) throw Error(ErrorCode::kIoError, fmt::format("bad commit id '{}'", id));
    RawCommit commit;
    commit.id = id;
    commit.message = *run_git(repo_, fmt::format("show -s --format=%B {}", id));
    if (!run_git(repo_, fmt::format("rev-parse --verify -q {}^", id), true)) return commit;
    commit.patch = *run_git(
        repo_, fmt::format("diff --no-color --no-renames --no-ext-diff -U3 {}^ {}", id, id));
    for (const auto& file : parse_unified_diff(commit.patch)) {
      if (!file.path().ends_with(".py")) continue;
      if (!file.old_path.empty()) {
        commit.before[file.old_path] =
            *run_git(repo_, fmt::format("show {}^:{}", id, shell_quote(file.old_path)));
      }
      if (!file.new_path.empty()) {
        commit.after[file.new_path] =
            *run_git(repo_, fmt::format("show {}:{}", id, shell_quote(file.new_path)));
      }
    }
    return commit;
  }

 private:
  fs::path repo_;
};

}  // namespace

std::unique_ptr<CommitSource> open_diff_dir(const std::filesystem::path& dir) {
  return std::make_unique<DiffDirSource>(dir);
}

std::unique_ptr<CommitSource> open_git_repo(const std::filesystem::path& repo) {
  return std::make_unique<GitSource>(repo);
}

}  // namespace bugexplain::ingest
