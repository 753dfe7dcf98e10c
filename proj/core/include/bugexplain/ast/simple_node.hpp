#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bugexplain::ast {

/// Inclusive, 1-indexed range of physical lines.
struct LineRange {
  int start = 1;
  int end = 1;

  /// Throws Error(kInvalidRange) unless 1 <= start <= end.
  static LineRange checked(int start, int end);

  bool contains(int line) const noexcept { return line >= start && line <= end; }
  bool contains(const LineRange& other) const noexcept {
    return other.start >= start && other.end <= end;
  }
  int length() const noexcept { return end - start + 1; }

  friend bool operator==(const LineRange&, const LineRange&) = default;
};

/// Parser-neutral AST node. Only Name and Constant nodes carry a value.
struct SimpleNode {
  std::string kind;
  std::optional<std::string> value;
  LineRange span;
  std::vector<SimpleNode> children;

  friend bool operator==(const SimpleNode&, const SimpleNode&) = default;
};

/// Number of physical lines in a document. The empty document has one line,
/// and a trailing newline does not open a new line.
int count_lines(std::string_view text) noexcept;

/// Total node count of the subtree rooted at `node`.
std::size_t subtree_size(const SimpleNode& node) noexcept;

/// Checks span containment, child ordering and non-empty kinds over the
/// whole subtree. Returns a description of the first violation, if any.
std::optional<std::string> validate_tree(const SimpleNode& node);

/// Indented one-node-per-line dump, handy in test failure output.
std::string dump_tree(const SimpleNode& node);

}  // namespace bugexplain::ast
