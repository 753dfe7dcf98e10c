#include "bugexplain/ast/simple_node.hpp"

#include <fmt/format.h>

#include "bugexplain/error.hpp"

namespace bugexplain::ast {

LineRange LineRange::checked(int start, int end) {
  if (start < 1 || start > end) {
    throw Error(ErrorCode::kInvalidRange,
                fmt::format("invalid line range {}..{}", start, end));
  }
  return LineRange{start, end};
}

int count_lines(std::string_view text) noexcept {
  if (text.empty()) return 1;
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  if (text.back() != '\n') ++lines;
  return lines;
}

std::size_t subtree_size(const SimpleNode& node) noexcept {
  std::size_t total = 1;
  for (const auto& child : node.children) total += subtree_size(child);
  return total;
}

std::optional<std::string> validate_tree(const SimpleNode& node) {
  if (node.kind.empty()) return "node with empty kind";
  if (node.span.start < 1 || node.span.start > node.span.end) {
    return fmt::format("{} has invalid span {}..{}", node.kind, node.span.start,
                       node.span.end);
  }
  int previous_start = 0;
  for (const auto& child : node.children) {
    if (!node.span.contains(child.span)) {
      return fmt::format("{} ({}..{}) escapes parent {} ({}..{})", child.kind,
                         child.span.start, child.span.end, node.kind,
                         node.span.start, node.span.end);
    }
    if (child.span.start < previous_start) {
      return fmt::format("children of {} at line {} are out of order", node.kind,
                         node.span.start);
    }
    previous_start = child.span.start;
    if (auto error = validate_tree(child)) return error;
  }
  return std::nullopt;
}

namespace {

void dump_into(const SimpleNode& node, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += node.kind;
  if (node.value) {
    out += " = ";
    out += *node.value;
  }
  out += fmt::format(" [{}..{}]\n", node.span.start, node.span.end);
  for (const auto& child : node.children) dump_into(child, depth + 1, out);
}

}  // namespace

std::string dump_tree(const SimpleNode& node) {
  std::string out;
  dump_into(node, 0, out);
  return out;
}

}  // namespace bugexplain::ast
