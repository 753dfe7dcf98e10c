#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bugexplain/diffsbt/diff_sbt.hpp"

namespace bugexplain::ingest {

using diffsbt::LineSet;

struct FileDiff {
  std::string old_path;  // empty for an added file
  std::string new_path;  // empty for a deleted file
  LineSet removed;       // pre-image numbering
  LineSet added;         // post-image numbering

  /// Post-image path, or the pre-image path when the file was deleted.
  const std::string& path() const noexcept { return new_path.empty() ? old_path : new_path; }
};

/// Parses git-style or plain unified diffs, one entry per file header.
/// Throws MALFORMED_DIFF when a hunk body disagrees with its header counts
/// or a hunk appears before any file header.
std::vector<FileDiff> parse_unified_diff(std::string_view diff_text);

}  // namespace bugexplain::ingest
