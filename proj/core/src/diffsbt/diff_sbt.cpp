#include "bugexplain/diffsbt/diff_sbt.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "bugexplain/ast/classify.hpp"
#include "bugexplain/ast/python_parser.hpp"
#include "bugexplain/error.hpp"

namespace bugexplain::diffsbt {
namespace {

constexpr std::string_view kOpen = "(";
constexpr std::string_view kClose = ")";

// Sorted, duplicate-free copy of a line set so that containment checks are
// two binary searches instead of a walk over the span.
class LineIndex {
 public:
  explicit LineIndex(const LineSet& ln) : lines_(ln.begin(), ln.end()) {}

  bool intersects(const LineRange& span) const {
    auto it = std::lower_bound(lines_.begin(), lines_.end(), span.start);
    return it != lines_.end() && *it <= span.end;
  }

  bool covers(const LineRange& span) const {
    auto it = std::lower_bound(lines_.begin(), lines_.end(), span.start);
    if (it == lines_.end() || *it != span.start) return false;
    auto offset = static_cast<std::size_t>(span.end - span.start);
    auto index = static_cast<std::size_t>(it - lines_.begin()) + offset;
    return index < lines_.size() && lines_[index] == span.end;
  }

  bool contains(int line) const {
    return std::binary_search(lines_.begin(), lines_.end(), line);
  }

 private:
  std::vector<int> lines_;
};

void collect(const SimpleNode& node, const LineIndex& ln, std::vector<SimpleNode>& out) {
  if (!ln.intersects(node.span)) return;
  if (ln.covers(node.span) || ast::is_expression(node.kind)) {
    out.push_back(node);
    return;
  }
  if (ln.contains(node.span.start)) {
    SimpleNode kept{node.kind, node.value, node.span, {}};
    for (const auto& child : node.children) collect(child, ln, kept.children);
    out.push_back(std::move(kept));
    return;
  }
  for (const auto& child : node.children) collect(child, ln, out);
}

void emit(const SimpleNode& node, Tokens& out) {
  std::string name = label(node);
  out.emplace_back(kOpen);
  out.push_back(name);
  for (const auto& child : node.children) emit(child, out);
  out.emplace_back(kClose);
  out.push_back(std::move(name));
}

SimpleNode from_label(const std::string& text) {
  for (std::string_view kind : {"Name", "Constant"}) {
    if (text.size() > kind.size() && text.compare(0, kind.size(), kind) == 0 &&
        text[kind.size()] == '_') {
      return SimpleNode{std::string(kind), text.substr(kind.size() + 1), {}, {}};
    }
  }
  return SimpleNode{text, std::nullopt, {}, {}};
}

class SbtReader {
 public:
  explicit SbtReader(std::span<const std::string> tokens) : tokens_(tokens) {}

  std::vector<SimpleNode> forest() {
    std::vector<SimpleNode> nodes;
    while (pos_ < tokens_.size()) nodes.push_back(node());
    return nodes;
  }

 private:
  SimpleNode node() {
    expect_open();
    const std::string& name = take("label");
    if (name == kOpen || name == kClose) fail("label");
    SimpleNode result = from_label(name);
    while (pos_ < tokens_.size() && tokens_[pos_] == kOpen) {
      result.children.push_back(node());
    }
    if (take("')'") != kClose) fail("')'");
    if (take("closing label") != name) fail(fmt::format("closing label '{}'", name));
    return result;
  }

  void expect_open() {
    if (take("'('") != kOpen) fail("'('");
  }

  const std::string& take(std::string_view what) {
    if (pos_ >= tokens_.size()) {
      throw Error(ErrorCode::kFormatError,
                  fmt::format("sbt: expected {} but input ended", what));
    }
    return tokens_[pos_++];
  }

  [[noreturn]] void fail(std::string_view what) const {
    throw Error(ErrorCode::kFormatError,
                fmt::format("sbt: expected {} at token {}", what, pos_ - 1));
  }

  std::span<const std::string> tokens_;
  std::size_t pos_ = 0;
};

void check_lines(const LineSet& lines, int file_len, std::string_view what) {
  if (lines.empty()) return;
  if (*lines.begin() < 1 || *lines.rbegin() > file_len) {
    throw Error(ErrorCode::kInvalidRange,
                fmt::format("{} lines must lie within 1..{}", what, file_len));
  }
}

std::vector<SimpleNode> extract(std::string_view code, const LineSet& lines, int radius,
                                std::string_view what) {
  const int file_len = ast::count_lines(code);
  check_lines(lines, file_len, what);
  SimpleNode root = ast::parse_source(code);
  return intersections(root.children, expand_context(lines, file_len, radius));
}

}  // namespace

LineSet lines_of(const LineRange& range) {
  LineSet out;
  for (int line = range.start; line <= range.end; ++line) out.insert(out.end(), line);
  return out;
}

LineSet expand_context(const LineSet& lines, int file_len, int radius) {
  check_lines(lines, file_len, "selected");
  if (radius < 0) throw Error(ErrorCode::kInvalidRange, "context radius must be >= 0");
  LineSet out;
  for (int line : lines) {
    const int lo = std::max(1, line - radius);
    const int hi = std::min(file_len, line + radius);
    for (int l = lo; l <= hi; ++l) out.insert(out.end(), l);
  }
  return out;
}

bool has_intersection(const LineRange& span, const LineSet& ln) {
  auto it = ln.lower_bound(span.start);
  return it != ln.end() && *it <= span.end;
}

bool is_inside(const LineRange& span, const LineSet& ln) {
  for (int line = span.start; line <= span.end; ++line) {
    if (!ln.contains(line)) return false;
  }
  return true;
}

std::vector<SimpleNode> intersections(std::span<const SimpleNode> nodes, const LineSet& ln) {
  std::vector<SimpleNode> out;
  if (ln.empty()) return out;
  const LineIndex index(ln);
  for (const auto& node : nodes) collect(node, index, out);
  return out;
}

std::string label(const SimpleNode& node) {
  if (!node.value) return node.kind;
  std::string out = node.kind;
  out += '_';
  bool in_space = false;
  for (char c : *node.value) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out += '_';
      in_space = true;
    } else {
      out += c;
      in_space = false;
    }
  }
  return out;
}

Tokens sbt(const SimpleNode& node) {
  Tokens out;
  emit(node, out);
  return out;
}

Tokens sbt_forest(std::span<const SimpleNode> nodes) {
  Tokens out;
  for (const auto& node : nodes) emit(node, out);
  return out;
}

std::vector<SimpleNode> parse_sbt(std::span<const std::string> tokens) {
  return SbtReader(tokens).forest();
}

Tokens DiffSbtSequence::buggy_half() const {
  auto sep = std::find(tokens.begin(), tokens.end(), kSeparator);
  return Tokens(tokens.begin(), sep);
}

Tokens DiffSbtSequence::bugfree_half() const {
  auto sep = std::find(tokens.begin(), tokens.end(), kSeparator);
  if (sep == tokens.end()) return {};
  return Tokens(sep + 1, tokens.end());
}

DiffSbtSequence diff_sbt(const CommitDiffRecord& record, int radius) {
  const auto buggy = extract(record.buggy_code, record.removed, radius, "removed");
  const auto bugfree = extract(record.bugfree_code, record.added, radius, "added");
  DiffSbtSequence result;
  result.tokens = sbt_forest(buggy);
  result.tokens.emplace_back(kSeparator);
  Tokens tail = sbt_forest(bugfree);
  result.tokens.insert(result.tokens.end(), std::make_move_iterator(tail.begin()),
                       std::make_move_iterator(tail.end()));
  return result;
}

Tokens sbt_for_range(std::string_view code, const LineRange& range, int radius) {
  const auto checked = LineRange::checked(range.start, range.end);
  return sbt_forest(extract(code, lines_of(checked), radius, "selected"));
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& token : tokens) {
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

}  // namespace bugexplain::diffsbt
