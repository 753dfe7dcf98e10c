#include "bugexplain/ingest/unified_diff.hpp"

#include <charconv>
#include <optional>

#include <fmt/format.h>

#include "bugexplain/error.hpp"

namespace bugexplain::ingest {
namespace {

struct HunkHeader {
  int old_start = 0;
  int old_count = 1;
  int new_start = 0;
  int new_count = 1;
};

[[noreturn]] void malformed(std::size_t line_no, std::string_view why) {
  throw Error(ErrorCode::kMalformedDiff, fmt::format("diff line {}: {}", line_no, why));
}

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

// Reads "start[,count]" and advances `text` past it.
bool read_range(std::string_view& text, int& start, int& count) {
  auto parse_int = [&text](int& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || out < 0) return false;
    text.remove_prefix(static_cast<std::size_t>(ptr - text.data()));
    return true;
  };
  if (!parse_int(start)) return false;
  count = 1;
  if (!text.empty() && text.front() == ',') {
    text.remove_prefix(1);
    if (!parse_int(count)) return false;
  }
  return true;
}

std::optional<HunkHeader> parse_hunk_header(std::string_view line) {
  if (!starts_with(line, "@@ -")) return std::nullopt;
  line.remove_prefix(4);
  HunkHeader h;
  if (!read_range(line, h.old_start, h.old_count)) return std::nullopt;
  if (!starts_with(line, " +")) return std::nullopt;
  line.remove_prefix(2);
  if (!read_range(line, h.new_start, h.new_count)) return std::nullopt;
  if (!starts_with(line, " @@")) return std::nullopt;
  return h;
}

// "--- a/foo.py\t2021-01-01" -> "foo.py"; "/dev/null" -> "".
std::string header_path(std::string_view rest) {
  auto tab = rest.find('\t');
  if (tab != std::string_view::npos) rest = rest.substr(0, tab);
  while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.remove_suffix(1);
  if (rest == "/dev/null") return {};
  if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"') {
    rest = rest.substr(1, rest.size() - 2);
  }
  if (starts_with(rest, "a/") || starts_with(rest, "b/")) rest.remove_prefix(2);
  return std::string(rest);
}

}  // namespace

std::vector<FileDiff> parse_unified_diff(std::string_view diff_text) {
  std::vector<FileDiff> files;
  bool pending_git_header = false;
  int old_left = 0;
  int new_left = 0;
  int old_line = 0;
  int new_line = 0;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos < diff_text.size()) {
    std::size_t nl = diff_text.find('\n', pos);
    std::string_view line = diff_text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? diff_text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (old_left > 0 || new_left > 0) {
      const char tag = line.empty() ? ' ' : line.front();
      if (tag == '\\') continue;
      if (tag == ' ') {
        if (old_left == 0 || new_left == 0) malformed(line_no, "context line exceeds hunk size");
        --old_left;
        --new_left;
        ++old_line;
        ++new_line;
      } else if (tag == '-') {
        if (old_left == 0) malformed(line_no, "removed line exceeds hunk size");
        --old_left;
        files.back().removed.insert(old_line++);
      } else if (tag == '+') {
        if (new_left == 0) malformed(line_no, "added line exceeds hunk size");
        --new_left;
        files.back().added.insert(new_line++);
      } else {
        malformed(line_no, "hunk ended before its declared line counts");
      }
      continue;
    }

    if (starts_with(line, "\\")) continue;
    if (starts_with(line, "diff --git ")) {
      // Paths here are a fallback for entries without ---/+++ lines, such as
      // pure renames and binary files.
      files.emplace_back();
      std::string_view rest = line.substr(11);
      auto split = rest.rfind(" b/");
      if (split != std::string_view::npos) {
        files.back().old_path = header_path(rest.substr(0, split));
        files.back().new_path = header_path(rest.substr(split + 1));
      }
      pending_git_header = true;
      continue;
    }
    if (starts_with(line, "--- ")) {
      if (!pending_git_header) files.emplace_back();
      pending_git_header = false;
      files.back().old_path = header_path(line.substr(4));
      continue;
    }
    if (starts_with(line, "+++ ")) {
      if (files.empty()) malformed(line_no, "'+++' header without '---'");
      files.back().new_path = header_path(line.substr(4));
      continue;
    }
    if (starts_with(line, "@@")) {
      auto header = parse_hunk_header(line);
      if (!header) malformed(line_no, "unreadable hunk header");
      if (files.empty() || pending_git_header) malformed(line_no, "hunk without file header");
      old_left = header->old_count;
      new_left = header->new_count;
      old_line = header->old_start;
      new_line = header->new_start;
      if ((old_left > 0 && old_line < 1) || (new_left > 0 && new_line < 1)) {
        malformed(line_no, "hunk starts before line 1");
      }
      continue;
    }
    // Anything else outside a hunk is metadata (index, mode, rename lines,
    // commit headers).
  }
  if (old_left > 0 || new_left > 0) malformed(line_no, "diff ended inside a hunk");
  return files;
}

}  // namespace bugexplain::ingest
