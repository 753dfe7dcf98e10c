#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bugexplain/ast/simple_node.hpp"

namespace bugexplain::diffsbt {

using ast::LineRange;
using ast::SimpleNode;

/// 1-indexed physical line numbers.
using LineSet = std::set<int>;
using Tokens = std::vector<std::string>;

inline constexpr std::string_view kSeparator = "</s>";
inline constexpr int kDefaultRadius = 3;

/// One touched file of a commit. Line sets use the numbering of their own
/// image: `removed` indexes `buggy_code`, `added` indexes `bugfree_code`.
struct CommitDiffRecord {
  std::string id;
  std::string message;
  std::string file_path;
  std::string buggy_code;
  std::string bugfree_code;
  LineSet removed;
  LineSet added;
};

LineSet lines_of(const LineRange& range);

/// Dilates every line by `radius` in both directions, clamped to
/// [1, file_len]. Throws INVALID_RANGE if a member lies outside the file.
LineSet expand_context(const LineSet& lines, int file_len, int radius = kDefaultRadius);

bool has_intersection(const LineRange& span, const LineSet& ln);
bool is_inside(const LineRange& span, const LineSet& ln);

/// Prunes `nodes` down to the parts touching `ln`. Nodes that do not
/// intersect are discarded. An intersecting node is kept whole when it lies
/// entirely in `ln` or is an expression; kept with pruned children when it
/// starts in `ln`; otherwise replaced by the pruned forms of its children.
std::vector<SimpleNode> intersections(std::span<const SimpleNode> nodes, const LineSet& ln);

/// "Kind" or "Kind_value"; whitespace runs inside the value become "_".
std::string label(const SimpleNode& node);

Tokens sbt(const SimpleNode& node);
Tokens sbt_forest(std::span<const SimpleNode> nodes);

/// Inverse of sbt_forest up to spans, which are not serialized (every
/// reconstructed node gets span 1..1). Throws FORMAT_ERROR on unbalanced or
/// mislabeled input.
std::vector<SimpleNode> parse_sbt(std::span<const std::string> tokens);

struct DiffSbtSequence {
  Tokens tokens;

  /// Tokens before / after the separator.
  Tokens buggy_half() const;
  Tokens bugfree_half() const;
};

/// Throws PARSE_ERROR if either image is not valid Python and
/// INVALID_RANGE if a line set points outside its image.
DiffSbtSequence diff_sbt(const CommitDiffRecord& record, int radius = kDefaultRadius);

/// Buggy-side extraction for a user selection.
Tokens sbt_for_range(std::string_view code, const LineRange& range,
                     int radius = kDefaultRadius);

/// Tokens joined by single spaces.
std::string join_tokens(std::span<const std::string> tokens);

}  // namespace bugexplain::diffsbt
