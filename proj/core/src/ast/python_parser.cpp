#include "bugexplain/ast/python_parser.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "bugexplain/error.hpp"
#include "lexer.hpp"

namespace bugexplain::ast {
namespace {

using detail::Lexer;
using detail::Token;
using detail::TokenKind;

constexpr std::array<std::string_view, 35> kKeywords = {
    "False", "None",   "True",    "and",      "as",       "assert", "async",
    "await", "break",  "class",   "continue", "def",      "del",    "elif",
    "else",  "except", "finally", "for",      "from",     "global", "if",
    "import", "in",    "is",      "lambda",   "nonlocal", "not",    "or",
    "pass",  "raise",  "return",  "try",      "while",    "with",   "yield",
};

bool is_keyword(std::string_view word) noexcept {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

constexpr int kMaxNesting = 200;

struct BinaryOperator {
  std::string_view token;
  std::string_view kind;
};

constexpr std::array<BinaryOperator, 13> kAugmentedOperators = {{
    {"+=", "Add"},     {"-=", "Sub"},     {"*=", "Mult"},      {"@=", "MatMult"},
    {"/=", "Div"},     {"%=", "Mod"},     {"&=", "BitAnd"},    {"|=", "BitOr"},
    {"^=", "BitXor"},  {"<<=", "LShift"}, {">>=", "RShift"},   {"**=", "Pow"},
    {"//=", "FloorDiv"},
}};

SimpleNode make_node(std::string_view kind, LineRange span,
                     std::vector<SimpleNode> children = {}) {
  SimpleNode node;
  node.kind = std::string(kind);
  node.span = span;
  node.children = std::move(children);
  return node;
}

LineRange children_extent(const std::vector<SimpleNode>& children) {
  LineRange span{children.front().span.start, children.front().span.end};
  for (const auto& child : children) {
    span.start = std::min(span.start, child.span.start);
    span.end = std::max(span.end, child.span.end);
  }
  return span;
}

enum class TargetContext { kAssign, kAugmented, kAnnotated, kDelete };

std::string describe_kind(std::string_view kind) {
  if (kind == "Call") return "function call";
  if (kind == "Constant") return "literal";
  if (kind == "BinOp" || kind == "UnaryOp" || kind == "BoolOp") return "expression";
  if (kind == "Compare") return "comparison";
  if (kind == "Lambda") return "lambda";
  if (kind == "IfExp") return "conditional expression";
  if (kind == "NamedExpr") return "named expression";
  if (kind == "JoinedStr") return "f-string expression";
  if (kind == "Await") return "await expression";
  if (kind == "Yield" || kind == "YieldFrom") return "yield expression";
  if (kind == "Dict") return "dict literal";
  if (kind == "Set") return "set display";
  if (kind == "GeneratorExp") return "generator expression";
  if (kind == "ListComp") return "list comprehension";
  if (kind == "SetComp") return "set comprehension";
  if (kind == "DictComp") return "dict comprehension";
  return std::string(kind);
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string_view source)
      : tokens_(std::move(tokens)), source_(source) {}

  SimpleNode parse_module() {
    SimpleNode module = make_node("Module", LineRange{1, count_lines(source_)});
    while (peek().kind != TokenKind::kEnd) {
      if (peek().kind == TokenKind::kIndent) fail(peek(), "unexpected indent");
      parse_statement(module.children);
    }
    return module;
  }

  /// Entry point for f-string replacement fields.
  SimpleNode parse_embedded_expression() {
    SimpleNode value = at_keyword("yield") ? parse_yield_expr() : parse_star_expressions();
    if (peek().kind != TokenKind::kEnd) fail(peek(), "f-string: invalid syntax");
    return value;
  }

 private:
  // ---- token helpers -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    std::size_t index = std::min(pos_ + k, tokens_.size() - 1);
    return tokens_[index];
  }
  const Token& advance() {
    const Token& token = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return token;
  }
  bool at_op(std::string_view op, std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind == TokenKind::kOp && t.text == op;
  }
  bool at_keyword(std::string_view word, std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind == TokenKind::kName && t.text == word;
  }
  bool at_identifier(std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind == TokenKind::kName && !is_keyword(t.text);
  }
  bool accept_op(std::string_view op) {
    if (!at_op(op)) return false;
    advance();
    return true;
  }
  bool accept_keyword(std::string_view word) {
    if (!at_keyword(word)) return false;
    advance();
    return true;
  }
  const Token& expect_op(std::string_view op) {
    if (!at_op(op)) {
      fail(peek(), "expected '" + std::string(op) + "'");
    }
    return advance();
  }
  const Token& expect_keyword(std::string_view word) {
    if (!at_keyword(word)) fail(peek(), "expected '" + std::string(word) + "'");
    return advance();
  }
  const Token& expect_identifier() {
    if (!at_identifier()) fail(peek(), "expected identifier");
    return advance();
  }
  void expect_newline() {
    if (peek().kind != TokenKind::kNewline) fail(peek(), "invalid syntax");
    advance();
  }

  [[noreturn]] void fail(const Token& token, const std::string& message) const {
    throw ParseError(token.line, token.col, message);
  }

  LineRange span_from(std::size_t start) const {
    return LineRange{tokens_[start].line, tokens_[pos_ - 1].end_line};
  }

  SimpleNode leaf(std::string_view kind, const Token& token) const {
    return make_node(kind, LineRange{token.line, token.end_line});
  }

  bool starts_expression(std::size_t k = 0) const {
    const Token& t = peek(k);
    switch (t.kind) {
      case TokenKind::kNumber:
      case TokenKind::kString:
        return true;
      case TokenKind::kName:
        return !is_keyword(t.text) || t.text == "None" || t.text == "True" ||
               t.text == "False" || t.text == "not" || t.text == "lambda" ||
               t.text == "await";
      case TokenKind::kOp:
        return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" ||
               t.text == "+" || t.text == "~" || t.text == "*" || t.text == "...";
      default:
        return false;
    }
  }

  struct NestingGuard {
    explicit NestingGuard(Parser& parser) : parser_(parser) {
      if (++parser_.depth_ > kMaxNesting) {
        parser_.fail(parser_.peek(), "too many nested parentheses");
      }
    }
    ~NestingGuard() { --parser_.depth_; }
    NestingGuard(const NestingGuard&) = delete;
    NestingGuard& operator=(const NestingGuard&) = delete;
    Parser& parser_;
  };

  // ---- target validation ---------------------------------------------------

  void check_target(const SimpleNode& node, const Token& at, TargetContext context) const {
    const std::string& kind = node.kind;
    if (kind == "Name" || kind == "Attribute" || kind == "Subscript") return;
    if (context == TargetContext::kAugmented || context == TargetContext::kAnnotated) {
      if (kind == "Tuple" || kind == "List") {
        fail(at, context == TargetContext::kAugmented
                     ? "illegal expression for augmented assignment"
                     : "only single target (not tuple) can be annotated");
      }
      fail(at, "cannot assign to " + describe_kind(kind));
    }
    if (kind == "Tuple" || kind == "List") {
      for (const auto& child : node.children) check_target(child, at, context);
      return;
    }
    if (kind == "Starred" && context != TargetContext::kDelete) {
      check_target(node.children.front(), at, context);
      return;
    }
    fail(at, std::string(context == TargetContext::kDelete ? "cannot delete "
                                                           : "cannot assign to ") +
                 describe_kind(kind));
  }

  // ---- statements ----------------------------------------------------------

  void parse_statement(std::vector<SimpleNode>& out) {
    const Token& t = peek();
    if (t.kind == TokenKind::kOp && t.text == "@") {
      out.push_back(parse_decorated());
      return;
    }
    if (t.kind == TokenKind::kName) {
      std::string_view word = t.text;
      if (word == "def") {
        out.push_back(parse_function(pos_, {}));
        return;
      }
      if (word == "class") {
        out.push_back(parse_class(pos_, {}));
        return;
      }
      if (word == "if") {
        out.push_back(parse_if());
        return;
      }
      if (word == "while") {
        out.push_back(parse_while());
        return;
      }
      if (word == "for") {
        out.push_back(parse_for());
        return;
      }
      if (word == "try") {
        out.push_back(parse_try());
        return;
      }
      if (word == "with") {
        out.push_back(parse_with());
        return;
      }
      if (word == "async") {
        if (at_keyword("def", 1)) {
          out.push_back(parse_function(pos_, {}));
          return;
        }
        if (at_keyword("for", 1)) {
          out.push_back(parse_for());
          return;
        }
        if (at_keyword("with", 1)) {
          out.push_back(parse_with());
          return;
        }
      }
      if (word == "match") {
        if (auto match = try_parse_match()) {
          out.push_back(std::move(*match));
          return;
        }
      }
    }
    parse_simple_statements(out);
  }

  void parse_simple_statements(std::vector<SimpleNode>& out) {
    while (true) {
      out.push_back(parse_simple_statement());
      if (!accept_op(";")) break;
      if (peek().kind == TokenKind::kNewline) break;
    }
    expect_newline();
  }

  std::vector<SimpleNode> parse_block() {
    std::vector<SimpleNode> body;
    if (peek().kind == TokenKind::kNewline) {
      advance();
      if (peek().kind != TokenKind::kIndent) fail(peek(), "expected an indented block");
      advance();
      while (peek().kind != TokenKind::kDedent && peek().kind != TokenKind::kEnd) {
        parse_statement(body);
      }
      if (peek().kind == TokenKind::kDedent) advance();
    } else {
      parse_simple_statements(body);
    }
    return body;
  }

  static void append(std::vector<SimpleNode>& to, std::vector<SimpleNode>&& from) {
    for (auto& node : from) to.push_back(std::move(node));
  }

  SimpleNode finish_compound(std::string_view kind, std::size_t start,
                             std::vector<SimpleNode> children) const {
    LineRange span{tokens_[start].line, children.back().span.end};
    return make_node(kind, span, std::move(children));
  }

  SimpleNode parse_decorated() {
    const std::size_t start = pos_;
    std::vector<SimpleNode> decorators;
    while (accept_op("@")) {
      decorators.push_back(parse_named_expression());
      expect_newline();
    }
    if (at_keyword("def") || (at_keyword("async") && at_keyword("def", 1))) {
      return parse_function(start, std::move(decorators));
    }
    if (at_keyword("class")) return parse_class(start, std::move(decorators));
    fail(peek(), "invalid syntax");
  }

  SimpleNode parse_function(std::size_t start, std::vector<SimpleNode> decorators) {
    const Token& header = peek();
    const bool is_async = accept_keyword("async");
    expect_keyword("def");
    expect_identifier();
    expect_op("(");
    std::vector<SimpleNode> children = std::move(decorators);
    children.push_back(parse_parameters(")", header.line, /*allow_annotations=*/true));
    expect_op(")");
    if (accept_op("->")) children.push_back(parse_expression());
    expect_op(":");
    append(children, parse_block());
    return finish_compound(is_async ? "AsyncFunctionDef" : "FunctionDef", start,
                           std::move(children));
  }

  SimpleNode parse_class(std::size_t start, std::vector<SimpleNode> decorators) {
    expect_keyword("class");
    expect_identifier();
    std::vector<SimpleNode> children = std::move(decorators);
    if (at_op("(")) {
      advance();
      append(children, parse_call_arguments(pos_ - 1));
    }
    expect_op(":");
    append(children, parse_block());
    return finish_compound("ClassDef", start, std::move(children));
  }

  // `terminator` is ")" for def and ":" for lambda.
  SimpleNode parse_parameters(std::string_view terminator, int header_line,
                              bool allow_annotations) {
    std::vector<SimpleNode> children;
    auto parse_arg = [&]() {
      const std::size_t arg_start = pos_;
      expect_identifier();
      std::vector<SimpleNode> annotation;
      if (allow_annotations && accept_op(":")) annotation.push_back(parse_expression());
      children.push_back(make_node("arg", span_from(arg_start), std::move(annotation)));
    };
    while (!at_op(terminator)) {
      if (accept_op("/")) {
        // positional-only marker
      } else if (accept_op("*")) {
        if (at_identifier()) parse_arg();
      } else if (accept_op("**")) {
        parse_arg();
      } else {
        parse_arg();
        if (accept_op("=")) children.push_back(parse_expression());
      }
      if (!accept_op(",")) break;
    }
    if (!at_op(terminator)) fail(peek(), "invalid syntax");
    LineRange span = children.empty() ? LineRange{header_line, header_line}
                                      : children_extent(children);
    return make_node("arguments", span, std::move(children));
  }

  SimpleNode parse_if() {
    const std::size_t start = pos_;
    advance();  // `if` or `elif`
    std::vector<SimpleNode> children;
    children.push_back(parse_named_expression());
    expect_op(":");
    append(children, parse_block());
    if (at_keyword("elif")) {
      children.push_back(parse_if());
    } else if (accept_keyword("else")) {
      expect_op(":");
      append(children, parse_block());
    }
    return finish_compound("If", start, std::move(children));
  }

  SimpleNode parse_while() {
    const std::size_t start = pos_;
    expect_keyword("while");
    std::vector<SimpleNode> children;
    children.push_back(parse_named_expression());
    expect_op(":");
    append(children, parse_block());
    if (accept_keyword("else")) {
      expect_op(":");
      append(children, parse_block());
    }
    return finish_compound("While", start, std::move(children));
  }

  SimpleNode parse_for() {
    const std::size_t start = pos_;
    const bool is_async = accept_keyword("async");
    expect_keyword("for");
    std::vector<SimpleNode> children;
    const Token& target_token = peek();
    children.push_back(parse_star_targets());
    check_target(children.back(), target_token, TargetContext::kAssign);
    expect_keyword("in");
    children.push_back(parse_star_expressions());
    expect_op(":");
    append(children, parse_block());
    if (accept_keyword("else")) {
      expect_op(":");
      append(children, parse_block());
    }
    return finish_compound(is_async ? "AsyncFor" : "For", start, std::move(children));
  }

  SimpleNode parse_try() {
    const std::size_t start = pos_;
    expect_keyword("try");
    expect_op(":");
    std::vector<SimpleNode> children = parse_block();
    bool has_handlers = false;
    bool star = false;
    while (at_keyword("except")) {
      const std::size_t handler_start = pos_;
      advance();
      if (accept_op("*")) star = true;
      std::vector<SimpleNode> handler;
      if (!at_op(":")) {
        handler.push_back(parse_expression());
        if (accept_keyword("as")) expect_identifier();
      }
      expect_op(":");
      append(handler, parse_block());
      children.push_back(finish_compound("ExceptHandler", handler_start, std::move(handler)));
      has_handlers = true;
    }
    if (has_handlers && accept_keyword("else")) {
      expect_op(":");
      append(children, parse_block());
    }
    bool has_finally = false;
    if (accept_keyword("finally")) {
      expect_op(":");
      append(children, parse_block());
      has_finally = true;
    }
    if (!has_handlers && !has_finally) {
      fail(peek(), "expected 'except' or 'finally' block");
    }
    return finish_compound(star ? "TryStar" : "Try", start, std::move(children));
  }

  SimpleNode parse_with_item() {
    std::vector<SimpleNode> parts;
    parts.push_back(parse_expression());
    if (accept_keyword("as")) {
      const Token& target_token = peek();
      parts.push_back(parse_star_target());
      check_target(parts.back(), target_token, TargetContext::kAssign);
    }
    LineRange span = children_extent(parts);
    return make_node("withitem", span, std::move(parts));
  }

  SimpleNode parse_with() {
    const std::size_t start = pos_;
    const bool is_async = accept_keyword("async");
    expect_keyword("with");
    std::vector<SimpleNode> children;
    bool parsed = false;
    if (at_op("(")) {
      const std::size_t save = pos_;
      try {
        advance();
        std::vector<SimpleNode> items;
        items.push_back(parse_with_item());
        while (accept_op(",")) {
          if (at_op(")")) break;
          items.push_back(parse_with_item());
        }
        expect_op(")");
        if (!at_op(":")) throw ParseError(peek().line, peek().col, "not a with-item list");
        children = std::move(items);
        parsed = true;
      } catch (const ParseError&) {
        pos_ = save;
      }
    }
    if (!parsed) {
      children.push_back(parse_with_item());
      while (accept_op(",")) children.push_back(parse_with_item());
    }
    expect_op(":");
    append(children, parse_block());
    return finish_compound(is_async ? "AsyncWith" : "With", start, std::move(children));
  }

  // ---- match statement -----------------------------------------------------

  std::optional<SimpleNode> try_parse_match() {
    const std::size_t start = pos_;
    std::vector<SimpleNode> children;
    try {
      advance();  // soft keyword `match`
      const std::size_t subject_start = pos_;
      SimpleNode subject = parse_star_named_expression();
      if (at_op(",")) {
        std::vector<SimpleNode> elements;
        elements.push_back(std::move(subject));
        while (accept_op(",")) {
          if (at_op(":")) break;
          elements.push_back(parse_star_named_expression());
        }
        subject = make_node("Tuple", span_from(subject_start), std::move(elements));
      }
      expect_op(":");
      if (peek().kind != TokenKind::kNewline || peek(1).kind != TokenKind::kIndent ||
          !at_keyword("case", 2)) {
        throw ParseError(peek().line, peek().col, "not a match statement");
      }
      children.push_back(std::move(subject));
    } catch (const ParseError&) {
      pos_ = start;
      return std::nullopt;
    }
    advance();  // NEWLINE
    advance();  // INDENT
    while (peek().kind != TokenKind::kDedent && peek().kind != TokenKind::kEnd) {
      if (!at_keyword("case")) fail(peek(), "expected 'case'");
      advance();
      std::vector<SimpleNode> parts;
      parts.push_back(parse_open_patterns());
      if (accept_keyword("if")) parts.push_back(parse_named_expression());
      expect_op(":");
      append(parts, parse_block());
      LineRange span = children_extent(parts);
      children.push_back(make_node("match_case", span, std::move(parts)));
    }
    if (peek().kind == TokenKind::kDedent) advance();
    return finish_compound("Match", start, std::move(children));
  }

  SimpleNode parse_open_patterns() {
    const std::size_t start = pos_;
    SimpleNode first = parse_maybe_star_pattern();
    if (!at_op(",")) return first;
    std::vector<SimpleNode> patterns;
    patterns.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op(":") || at_keyword("if")) break;
      patterns.push_back(parse_maybe_star_pattern());
    }
    return make_node("MatchSequence", span_from(start), std::move(patterns));
  }

  SimpleNode parse_maybe_star_pattern() {
    if (at_op("*")) {
      const std::size_t start = pos_;
      advance();
      expect_identifier();
      return make_node("MatchStar", span_from(start));
    }
    return parse_as_pattern();
  }

  SimpleNode parse_as_pattern() {
    NestingGuard guard(*this);
    const std::size_t start = pos_;
    SimpleNode pattern = parse_or_pattern();
    if (accept_keyword("as")) {
      expect_identifier();
      std::vector<SimpleNode> inner;
      inner.push_back(std::move(pattern));
      return make_node("MatchAs", span_from(start), std::move(inner));
    }
    return pattern;
  }

  SimpleNode parse_or_pattern() {
    const std::size_t start = pos_;
    SimpleNode first = parse_closed_pattern();
    if (!at_op("|")) return first;
    std::vector<SimpleNode> alternatives;
    alternatives.push_back(std::move(first));
    while (accept_op("|")) alternatives.push_back(parse_closed_pattern());
    return make_node("MatchOr", span_from(start), std::move(alternatives));
  }

  // Signed numbers, complex literals and strings usable as pattern values.
  SimpleNode parse_literal_expression() {
    const std::size_t start = pos_;
    if (peek().kind == TokenKind::kString) return parse_strings();
    SimpleNode value;
    if (at_op("-")) {
      const Token& minus = advance();
      if (peek().kind != TokenKind::kNumber) fail(peek(), "invalid pattern");
      std::vector<SimpleNode> parts;
      parts.push_back(leaf("USub", minus));
      parts.push_back(constant(advance()));
      value = make_node("UnaryOp", span_from(start), std::move(parts));
    } else if (peek().kind == TokenKind::kNumber) {
      value = constant(advance());
    } else {
      fail(peek(), "invalid pattern");
    }
    if ((at_op("+") || at_op("-")) && peek(1).kind == TokenKind::kNumber) {
      const Token& op = advance();
      std::vector<SimpleNode> parts;
      parts.push_back(std::move(value));
      parts.push_back(leaf(op.text == "+" ? "Add" : "Sub", op));
      parts.push_back(constant(advance()));
      value = make_node("BinOp", span_from(start), std::move(parts));
    }
    return value;
  }

  SimpleNode parse_dotted_value() {
    const std::size_t start = pos_;
    const Token& name = expect_identifier();
    SimpleNode value = name_node(name);
    while (at_op(".")) {
      advance();
      expect_identifier();
      std::vector<SimpleNode> inner;
      inner.push_back(std::move(value));
      value = make_node("Attribute", span_from(start), std::move(inner));
    }
    return value;
  }

  SimpleNode parse_closed_pattern() {
    const std::size_t start = pos_;
    const Token& t = peek();
    if (t.kind == TokenKind::kNumber || t.kind == TokenKind::kString || at_op("-")) {
      std::vector<SimpleNode> inner;
      inner.push_back(parse_literal_expression());
      return make_node("MatchValue", span_from(start), std::move(inner));
    }
    if (at_keyword("None") || at_keyword("True") || at_keyword("False")) {
      advance();
      return make_node("MatchSingleton", span_from(start));
    }
    if (at_identifier()) {
      if (at_op(".", 1) || at_op("(", 1)) {
        SimpleNode value = parse_dotted_value();
        if (at_op("(")) return parse_class_pattern(start, std::move(value));
        std::vector<SimpleNode> inner;
        inner.push_back(std::move(value));
        return make_node("MatchValue", span_from(start), std::move(inner));
      }
      advance();
      return make_node("MatchAs", span_from(start));
    }
    if (at_op("(") || at_op("[")) {
      const bool paren = at_op("(");
      const std::string_view closer = paren ? ")" : "]";
      advance();
      std::vector<SimpleNode> patterns;
      if (accept_op(closer)) return make_node("MatchSequence", span_from(start));
      patterns.push_back(parse_maybe_star_pattern());
      bool sequence = !paren;
      while (accept_op(",")) {
        sequence = true;
        if (at_op(closer)) break;
        patterns.push_back(parse_maybe_star_pattern());
      }
      expect_op(closer);
      if (!sequence) return std::move(patterns.front());
      return make_node("MatchSequence", span_from(start), std::move(patterns));
    }
    if (at_op("{")) {
      advance();
      std::vector<SimpleNode> parts;
      while (!at_op("}")) {
        if (accept_op("**")) {
          expect_identifier();
        } else {
          if (at_identifier()) {
            parts.push_back(parse_dotted_value());
          } else if (at_keyword("None") || at_keyword("True") || at_keyword("False")) {
            parts.push_back(constant(advance()));
          } else {
            parts.push_back(parse_literal_expression());
          }
          expect_op(":");
          parts.push_back(parse_as_pattern());
        }
        if (!accept_op(",")) break;
      }
      expect_op("}");
      return make_node("MatchMapping", span_from(start), std::move(parts));
    }
    fail(t, "invalid pattern");
  }

  SimpleNode parse_class_pattern(std::size_t start, SimpleNode cls) {
    expect_op("(");
    std::vector<SimpleNode> parts;
    parts.push_back(std::move(cls));
    while (!at_op(")")) {
      if (at_identifier() && at_op("=", 1)) {
        advance();
        advance();
      }
      parts.push_back(parse_as_pattern());
      if (!accept_op(",")) break;
    }
    expect_op(")");
    return make_node("MatchClass", span_from(start), std::move(parts));
  }

  // ---- simple statements ---------------------------------------------------

  SimpleNode parse_simple_statement() {
    const std::size_t start = pos_;
    const Token& t = peek();
    if (t.kind == TokenKind::kName) {
      std::string_view word = t.text;
      if (word == "pass" || word == "break" || word == "continue") {
        advance();
        return make_node(word == "pass" ? "Pass" : word == "break" ? "Break" : "Continue",
                         span_from(start));
      }
      if (word == "return") {
        advance();
        std::vector<SimpleNode> value;
        if (starts_expression()) value.push_back(parse_star_expressions());
        return make_node("Return", span_from(start), std::move(value));
      }
      if (word == "raise") {
        advance();
        std::vector<SimpleNode> parts;
        if (starts_expression()) {
          parts.push_back(parse_expression());
          if (accept_keyword("from")) parts.push_back(parse_expression());
        }
        return make_node("Raise", span_from(start), std::move(parts));
      }
      if (word == "global" || word == "nonlocal") {
        advance();
        expect_identifier();
        while (accept_op(",")) expect_identifier();
        return make_node(word == "global" ? "Global" : "Nonlocal", span_from(start));
      }
      if (word == "del") return parse_delete();
      if (word == "assert") {
        advance();
        std::vector<SimpleNode> parts;
        parts.push_back(parse_expression());
        if (accept_op(",")) parts.push_back(parse_expression());
        return make_node("Assert", span_from(start), std::move(parts));
      }
      if (word == "import") return parse_import();
      if (word == "from") return parse_import_from();
    }
    return parse_expression_statement();
  }

  SimpleNode parse_delete() {
    const std::size_t start = pos_;
    const Token& keyword = advance();
    std::vector<SimpleNode> targets;
    targets.push_back(parse_star_target());
    while (accept_op(",")) {
      if (!starts_expression()) break;
      targets.push_back(parse_star_target());
    }
    for (const auto& target : targets) check_target(target, keyword, TargetContext::kDelete);
    return make_node("Delete", span_from(start), std::move(targets));
  }

  SimpleNode parse_alias(bool dotted) {
    const std::size_t start = pos_;
    expect_identifier();
    while (dotted && accept_op(".")) expect_identifier();
    if (accept_keyword("as")) expect_identifier();
    return make_node("alias", span_from(start));
  }

  SimpleNode parse_import() {
    const std::size_t start = pos_;
    advance();
    std::vector<SimpleNode> names;
    names.push_back(parse_alias(true));
    while (accept_op(",")) names.push_back(parse_alias(true));
    return make_node("Import", span_from(start), std::move(names));
  }

  SimpleNode parse_import_from() {
    const std::size_t start = pos_;
    advance();
    bool has_module = false;
    while (at_op(".") || at_op("...")) advance();
    if (at_identifier()) {
      expect_identifier();
      while (accept_op(".")) expect_identifier();
      has_module = true;
    }
    if (!has_module && tokens_[pos_ - 1].text == "from") fail(peek(), "invalid syntax");
    expect_keyword("import");
    std::vector<SimpleNode> names;
    if (at_op("*")) {
      names.push_back(leaf("alias", advance()));
    } else if (accept_op("(")) {
      names.push_back(parse_alias(false));
      while (accept_op(",")) {
        if (at_op(")")) break;
        names.push_back(parse_alias(false));
      }
      expect_op(")");
    } else {
      names.push_back(parse_alias(false));
      while (accept_op(",")) names.push_back(parse_alias(false));
    }
    return make_node("ImportFrom", span_from(start), std::move(names));
  }

  SimpleNode parse_assignment_value() {
    return at_keyword("yield") ? parse_yield_expr() : parse_star_expressions();
  }

  SimpleNode parse_expression_statement() {
    const std::size_t start = pos_;
    const Token& first_token = peek();
    SimpleNode first = parse_assignment_value();

    if (at_op(":")) {
      check_target(first, first_token, TargetContext::kAnnotated);
      advance();
      std::vector<SimpleNode> parts;
      parts.push_back(std::move(first));
      parts.push_back(parse_expression());
      if (accept_op("=")) parts.push_back(parse_assignment_value());
      return make_node("AnnAssign", span_from(start), std::move(parts));
    }

    if (peek().kind == TokenKind::kOp) {
      for (const auto& op : kAugmentedOperators) {
        if (peek().text != op.token) continue;
        check_target(first, first_token, TargetContext::kAugmented);
        const Token& op_token = advance();
        std::vector<SimpleNode> parts;
        parts.push_back(std::move(first));
        parts.push_back(leaf(op.kind, op_token));
        parts.push_back(parse_assignment_value());
        return make_node("AugAssign", span_from(start), std::move(parts));
      }
    }

    if (at_op("=")) {
      std::vector<SimpleNode> parts;
      parts.push_back(std::move(first));
      while (accept_op("=")) parts.push_back(parse_assignment_value());
      for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        check_target(parts[i], first_token, TargetContext::kAssign);
      }
      return make_node("Assign", span_from(start), std::move(parts));
    }

    std::vector<SimpleNode> value;
    value.push_back(std::move(first));
    return make_node("Expr", span_from(start), std::move(value));
  }

  // ---- expressions ---------------------------------------------------------

  SimpleNode parse_star_expressions() {
    const std::size_t start = pos_;
    SimpleNode first = parse_star_expression();
    if (!at_op(",")) return first;
    std::vector<SimpleNode> elements;
    elements.push_back(std::move(first));
    while (accept_op(",")) {
      if (!starts_expression()) break;
      elements.push_back(parse_star_expression());
    }
    return make_node("Tuple", span_from(start), std::move(elements));
  }

  SimpleNode parse_star_expression() {
    if (at_op("*")) {
      const std::size_t start = pos_;
      advance();
      std::vector<SimpleNode> value;
      value.push_back(parse_bitwise_or());
      return make_node("Starred", span_from(start), std::move(value));
    }
    return parse_expression();
  }

  SimpleNode parse_star_named_expression() {
    if (at_op("*")) return parse_star_expression();
    return parse_named_expression();
  }

  SimpleNode parse_star_targets() {
    const std::size_t start = pos_;
    SimpleNode first = parse_star_target();
    if (!at_op(",")) return first;
    std::vector<SimpleNode> elements;
    elements.push_back(std::move(first));
    while (accept_op(",")) {
      if (!starts_expression() || at_keyword("not")) break;
      elements.push_back(parse_star_target());
    }
    return make_node("Tuple", span_from(start), std::move(elements));
  }

  SimpleNode parse_star_target() {
    if (at_op("*")) {
      const std::size_t start = pos_;
      advance();
      std::vector<SimpleNode> value;
      value.push_back(parse_star_target());
      return make_node("Starred", span_from(start), std::move(value));
    }
    return parse_bitwise_or();
  }

  SimpleNode parse_named_expression() {
    if (at_identifier() && at_op(":=", 1)) {
      const std::size_t start = pos_;
      std::vector<SimpleNode> parts;
      parts.push_back(name_node(advance()));
      advance();
      parts.push_back(parse_expression());
      return make_node("NamedExpr", span_from(start), std::move(parts));
    }
    return parse_expression();
  }

  SimpleNode parse_expression() {
    NestingGuard guard(*this);
    if (at_keyword("lambda")) return parse_lambda();
    const std::size_t start = pos_;
    SimpleNode body = parse_disjunction();
    if (!at_keyword("if")) return body;
    advance();
    std::vector<SimpleNode> parts;
    parts.push_back(std::move(body));
    parts.push_back(parse_disjunction());
    expect_keyword("else");
    parts.push_back(parse_expression());
    return make_node("IfExp", span_from(start), std::move(parts));
  }

  SimpleNode parse_lambda() {
    const std::size_t start = pos_;
    const Token& keyword = advance();
    std::vector<SimpleNode> parts;
    parts.push_back(parse_parameters(":", keyword.line, /*allow_annotations=*/false));
    expect_op(":");
    parts.push_back(parse_expression());
    return make_node("Lambda", span_from(start), std::move(parts));
  }

  template <typename Next>
  SimpleNode parse_bool_op(std::string_view keyword, std::string_view kind, Next next) {
    const std::size_t start = pos_;
    SimpleNode first = (this->*next)();
    if (!at_keyword(keyword)) return first;
    std::vector<SimpleNode> parts;
    parts.push_back(std::move(first));
    parts.push_back(leaf(kind, peek()));
    while (accept_keyword(keyword)) parts.push_back((this->*next)());
    return make_node("BoolOp", span_from(start), std::move(parts));
  }

  SimpleNode parse_disjunction() { return parse_bool_op("or", "Or", &Parser::parse_conjunction); }
  SimpleNode parse_conjunction() { return parse_bool_op("and", "And", &Parser::parse_inversion); }

  SimpleNode parse_inversion() {
    if (at_keyword("not")) {
      NestingGuard guard(*this);
      const std::size_t start = pos_;
      std::vector<SimpleNode> parts;
      parts.push_back(leaf("Not", advance()));
      parts.push_back(parse_inversion());
      return make_node("UnaryOp", span_from(start), std::move(parts));
    }
    return parse_comparison();
  }

  std::optional<std::string_view> comparison_operator() const {
    const Token& t = peek();
    if (t.kind == TokenKind::kOp) {
      if (t.text == "==") return "Eq";
      if (t.text == "!=") return "NotEq";
      if (t.text == "<") return "Lt";
      if (t.text == "<=") return "LtE";
      if (t.text == ">") return "Gt";
      if (t.text == ">=") return "GtE";
      return std::nullopt;
    }
    if (t.kind != TokenKind::kName) return std::nullopt;
    if (t.text == "in") return "In";
    if (t.text == "not" && at_keyword("in", 1)) return "NotIn";
    if (t.text == "is") return at_keyword("not", 1) ? "IsNot" : "Is";
    return std::nullopt;
  }

  SimpleNode parse_comparison() {
    const std::size_t start = pos_;
    SimpleNode left = parse_bitwise_or();
    auto op = comparison_operator();
    if (!op) return left;
    std::vector<SimpleNode> parts;
    parts.push_back(std::move(left));
    while ((op = comparison_operator())) {
      const Token& op_token = advance();
      if (*op == "NotIn" || *op == "IsNot") advance();
      parts.push_back(leaf(*op, op_token));
      parts.push_back(parse_bitwise_or());
    }
    return make_node("Compare", span_from(start), std::move(parts));
  }

  template <std::size_t N>
  SimpleNode parse_binary(const std::array<BinaryOperator, N>& ops,
                          SimpleNode (Parser::*next)()) {
    const std::size_t start = pos_;
    SimpleNode node = (this->*next)();
    while (peek().kind == TokenKind::kOp) {
      const BinaryOperator* match = nullptr;
      for (const auto& op : ops) {
        if (peek().text == op.token) match = &op;
      }
      if (match == nullptr) break;
      std::vector<SimpleNode> parts;
      parts.push_back(std::move(node));
      parts.push_back(leaf(match->kind, advance()));
      parts.push_back((this->*next)());
      node = make_node("BinOp", span_from(start), std::move(parts));
    }
    return node;
  }

  static constexpr std::array<BinaryOperator, 1> kBitOr{{{"|", "BitOr"}}};
  static constexpr std::array<BinaryOperator, 1> kBitXor{{{"^", "BitXor"}}};
  static constexpr std::array<BinaryOperator, 1> kBitAnd{{{"&", "BitAnd"}}};
  static constexpr std::array<BinaryOperator, 2> kShift{{{"<<", "LShift"}, {">>", "RShift"}}};
  static constexpr std::array<BinaryOperator, 2> kSum{{{"+", "Add"}, {"-", "Sub"}}};
  static constexpr std::array<BinaryOperator, 5> kTerm{{{"*", "Mult"},
                                                        {"/", "Div"},
                                                        {"//", "FloorDiv"},
                                                        {"%", "Mod"},
                                                        {"@", "MatMult"}}};

  SimpleNode parse_bitwise_or() { return parse_binary(kBitOr, &Parser::parse_bitwise_xor); }
  SimpleNode parse_bitwise_xor() { return parse_binary(kBitXor, &Parser::parse_bitwise_and); }
  SimpleNode parse_bitwise_and() { return parse_binary(kBitAnd, &Parser::parse_shift); }
  SimpleNode parse_shift() { return parse_binary(kShift, &Parser::parse_sum); }
  SimpleNode parse_sum() { return parse_binary(kSum, &Parser::parse_term); }
  SimpleNode parse_term() { return parse_binary(kTerm, &Parser::parse_factor); }

  SimpleNode parse_factor() {
    std::string_view kind;
    if (at_op("+")) kind = "UAdd";
    else if (at_op("-")) kind = "USub";
    else if (at_op("~")) kind = "Invert";
    if (kind.empty()) return parse_power();
    NestingGuard guard(*this);
    const std::size_t start = pos_;
    std::vector<SimpleNode> parts;
    parts.push_back(leaf(kind, advance()));
    parts.push_back(parse_factor());
    return make_node("UnaryOp", span_from(start), std::move(parts));
  }

  SimpleNode parse_power() {
    const std::size_t start = pos_;
    SimpleNode base = parse_await_primary();
    if (!at_op("**")) return base;
    std::vector<SimpleNode> parts;
    parts.push_back(std::move(base));
    parts.push_back(leaf("Pow", advance()));
    parts.push_back(parse_factor());
    return make_node("BinOp", span_from(start), std::move(parts));
  }

  SimpleNode parse_await_primary() {
    if (at_keyword("await")) {
      const std::size_t start = pos_;
      advance();
      std::vector<SimpleNode> value;
      value.push_back(parse_primary());
      return make_node("Await", span_from(start), std::move(value));
    }
    return parse_primary();
  }

  SimpleNode parse_primary() {
    const std::size_t start = pos_;
    SimpleNode node = parse_atom();
    while (true) {
      if (at_op(".")) {
        advance();
        expect_identifier();
        std::vector<SimpleNode> value;
        value.push_back(std::move(node));
        node = make_node("Attribute", span_from(start), std::move(value));
      } else if (at_op("(")) {
        const std::size_t open = pos_;
        advance();
        std::vector<SimpleNode> parts;
        parts.push_back(std::move(node));
        append(parts, parse_call_arguments(open));
        node = make_node("Call", span_from(start), std::move(parts));
      } else if (at_op("[")) {
        advance();
        std::vector<SimpleNode> parts;
        parts.push_back(std::move(node));
        parts.push_back(parse_slices());
        expect_op("]");
        node = make_node("Subscript", span_from(start), std::move(parts));
      } else {
        return node;
      }
    }
  }

  // Consumes everything up to and including the closing ")". `open` indexes
  // the opening parenthesis token.
  std::vector<SimpleNode> parse_call_arguments(std::size_t open) {
    NestingGuard guard(*this);
    std::vector<SimpleNode> args;
    bool bare_generator = false;
    while (!at_op(")")) {
      const std::size_t start = pos_;
      if (at_op("*")) {
        advance();
        std::vector<SimpleNode> value;
        value.push_back(parse_expression());
        args.push_back(make_node("Starred", span_from(start), std::move(value)));
      } else if (at_op("**")) {
        advance();
        std::vector<SimpleNode> value;
        value.push_back(parse_expression());
        args.push_back(make_node("keyword", span_from(start), std::move(value)));
      } else if (at_identifier() && at_op("=", 1)) {
        advance();
        advance();
        std::vector<SimpleNode> value;
        value.push_back(parse_expression());
        args.push_back(make_node("keyword", span_from(start), std::move(value)));
      } else {
        SimpleNode arg = parse_named_expression();
        if (at_keyword("for") || (at_keyword("async") && at_keyword("for", 1))) {
          std::vector<SimpleNode> parts;
          parts.push_back(std::move(arg));
          append(parts, parse_comprehensions());
          args.push_back(make_node("GeneratorExp", span_from(start), std::move(parts)));
          bare_generator = true;
        } else {
          args.push_back(std::move(arg));
        }
      }
      if (!accept_op(",")) break;
    }
    expect_op(")");
    if (bare_generator) {
      if (args.size() != 1) fail(tokens_[open], "Generator expression must be parenthesized");
      args.front().span = span_from(open);
    }
    return args;
  }

  SimpleNode parse_slices() {
    const std::size_t start = pos_;
    SimpleNode first = parse_slice();
    if (!at_op(",")) return first;
    std::vector<SimpleNode> elements;
    elements.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op("]")) break;
      elements.push_back(parse_slice());
    }
    return make_node("Tuple", span_from(start), std::move(elements));
  }

  SimpleNode parse_slice() {
    const std::size_t start = pos_;
    std::vector<SimpleNode> parts;
    if (!at_op(":")) {
      SimpleNode lower = at_op("*") ? parse_star_expression() : parse_named_expression();
      if (!at_op(":")) return lower;
      parts.push_back(std::move(lower));
    }
    expect_op(":");
    if (starts_expression()) parts.push_back(parse_expression());
    if (accept_op(":")) {
      if (starts_expression()) parts.push_back(parse_expression());
    }
    return make_node("Slice", span_from(start), std::move(parts));
  }

  std::vector<SimpleNode> parse_comprehensions() {
    std::vector<SimpleNode> generators;
    while (at_keyword("for") || (at_keyword("async") && at_keyword("for", 1))) {
      accept_keyword("async");
      advance();  // for
      std::vector<SimpleNode> parts;
      const Token& target_token = peek();
      parts.push_back(parse_star_targets());
      check_target(parts.back(), target_token, TargetContext::kAssign);
      expect_keyword("in");
      parts.push_back(parse_disjunction());
      while (accept_keyword("if")) parts.push_back(parse_disjunction());
      LineRange span = children_extent(parts);
      generators.push_back(make_node("comprehension", span, std::move(parts)));
    }
    return generators;
  }

  SimpleNode parse_yield_expr() {
    const std::size_t start = pos_;
    expect_keyword("yield");
    std::vector<SimpleNode> value;
    if (accept_keyword("from")) {
      value.push_back(parse_expression());
      return make_node("YieldFrom", span_from(start), std::move(value));
    }
    if (starts_expression()) value.push_back(parse_star_expressions());
    return make_node("Yield", span_from(start), std::move(value));
  }

  SimpleNode name_node(const Token& token) const {
    SimpleNode node = leaf("Name", token);
    node.value = std::string(token.text);
    return node;
  }

  SimpleNode constant(const Token& token) const {
    SimpleNode node = leaf("Constant", token);
    node.value = std::string(token.text);
    return node;
  }

  SimpleNode parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kName:
        if (!is_keyword(t.text)) return name_node(advance());
        if (t.text == "None" || t.text == "True" || t.text == "False") {
          return constant(advance());
        }
        fail(t, "invalid syntax");
      case TokenKind::kNumber:
        return constant(advance());
      case TokenKind::kString:
        return parse_strings();
      case TokenKind::kOp:
        if (t.text == "...") return constant(advance());
        if (t.text == "(") return parse_paren();
        if (t.text == "[") return parse_list();
        if (t.text == "{") return parse_brace();
        break;
      case TokenKind::kIndent:
        fail(t, "unexpected indent");
      case TokenKind::kEnd:
        fail(t, "unexpected EOF while parsing");
      default:
        break;
    }
    fail(t, "invalid syntax");
  }

  bool at_comprehension() const {
    return at_keyword("for") || (at_keyword("async") && at_keyword("for", 1));
  }

  SimpleNode parse_paren() {
    NestingGuard guard(*this);
    const std::size_t start = pos_;
    advance();
    if (accept_op(")")) return make_node("Tuple", span_from(start));
    if (at_keyword("yield")) {
      SimpleNode inner = parse_yield_expr();
      expect_op(")");
      return inner;
    }
    SimpleNode first = parse_star_named_expression();
    if (at_comprehension()) {
      std::vector<SimpleNode> parts;
      parts.push_back(std::move(first));
      append(parts, parse_comprehensions());
      expect_op(")");
      return make_node("GeneratorExp", span_from(start), std::move(parts));
    }
    if (at_op(",")) {
      std::vector<SimpleNode> elements;
      elements.push_back(std::move(first));
      while (accept_op(",")) {
        if (at_op(")")) break;
        elements.push_back(parse_star_named_expression());
      }
      expect_op(")");
      return make_node("Tuple", span_from(start), std::move(elements));
    }
    expect_op(")");
    return first;
  }

  SimpleNode parse_list() {
    NestingGuard guard(*this);
    const std::size_t start = pos_;
    advance();
    if (accept_op("]")) return make_node("List", span_from(start));
    std::vector<SimpleNode> elements;
    elements.push_back(parse_star_named_expression());
    if (at_comprehension()) {
      append(elements, parse_comprehensions());
      expect_op("]");
      return make_node("ListComp", span_from(start), std::move(elements));
    }
    while (accept_op(",")) {
      if (at_op("]")) break;
      elements.push_back(parse_star_named_expression());
    }
    expect_op("]");
    return make_node("List", span_from(start), std::move(elements));
  }

  SimpleNode parse_brace() {
    NestingGuard guard(*this);
    const std::size_t start = pos_;
    advance();
    if (accept_op("}")) return make_node("Dict", span_from(start));
    std::vector<SimpleNode> parts;
    bool is_dict = false;
    if (accept_op("**")) {
      parts.push_back(parse_bitwise_or());
      is_dict = true;
    } else {
      parts.push_back(parse_star_named_expression());
      if (accept_op(":")) {
        parts.push_back(parse_expression());
        is_dict = true;
        if (at_comprehension()) {
          append(parts, parse_comprehensions());
          expect_op("}");
          return make_node("DictComp", span_from(start), std::move(parts));
        }
      } else if (at_comprehension()) {
        append(parts, parse_comprehensions());
        expect_op("}");
        return make_node("SetComp", span_from(start), std::move(parts));
      }
    }
    while (accept_op(",")) {
      if (at_op("}")) break;
      if (is_dict) {
        if (accept_op("**")) {
          parts.push_back(parse_bitwise_or());
        } else {
          parts.push_back(parse_expression());
          expect_op(":");
          parts.push_back(parse_expression());
        }
      } else {
        parts.push_back(parse_star_named_expression());
      }
    }
    expect_op("}");
    return make_node(is_dict ? "Dict" : "Set", span_from(start), std::move(parts));
  }

  // ---- strings -------------------------------------------------------------

  struct LiteralRun {
    std::string text;
    int start_line = 0;
    int end_line = 0;

    void add(std::string_view piece, int first, int last) {
      if (piece.empty()) return;
      if (text.empty()) start_line = first;
      text += piece;
      end_line = last;
    }
    void flush(std::vector<SimpleNode>& out) {
      if (text.empty()) return;
      SimpleNode node = make_node("Constant", LineRange{start_line, end_line});
      node.value = std::move(text);
      out.push_back(std::move(node));
      text.clear();
    }
  };

  // Cursor over a string body that tracks physical line and column.
  struct BodyCursor {
    std::string_view body;
    std::size_t i = 0;
    int line;
    int col;

    char at(std::size_t k = 0) const { return i + k < body.size() ? body[i + k] : '\0'; }
    void step() {
      if (body[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };

  SimpleNode parse_strings() {
    const std::size_t start = pos_;
    bool formatted = false;
    while (peek().kind == TokenKind::kString) {
      std::string_view text = advance().text;
      for (char c : text) {
        if (c == '\'' || c == '"') break;
        if (c == 'f' || c == 'F') formatted = true;
      }
    }
    const Token& first = tokens_[start];
    const Token& last = tokens_[pos_ - 1];
    if (!formatted) {
      SimpleNode node = make_node("Constant", span_from(start));
      const char* begin = first.text.data();
      const char* end = last.text.data() + last.text.size();
      node.value = std::string(begin, static_cast<std::size_t>(end - begin));
      return node;
    }

    std::vector<SimpleNode> values;
    LiteralRun run;
    for (std::size_t k = start; k < pos_; ++k) {
      const Token& token = tokens_[k];
      std::size_t prefix = 0;
      bool is_f = false;
      while (token.text[prefix] != '\'' && token.text[prefix] != '"') {
        if (token.text[prefix] == 'f' || token.text[prefix] == 'F') is_f = true;
        ++prefix;
      }
      const char quote = token.text[prefix];
      const bool triple = token.text.size() >= prefix + 6 &&
                          token.text[prefix + 1] == quote && token.text[prefix + 2] == quote;
      const std::size_t quote_len = triple ? 3 : 1;
      std::string_view body =
          token.text.substr(prefix + quote_len, token.text.size() - prefix - 2 * quote_len);
      BodyCursor cursor{body, 0, token.line,
                        token.col + static_cast<int>(prefix + quote_len)};
      if (!is_f) {
        int end_line = token.end_line;
        run.add(body, token.line, end_line);
        continue;
      }
      scan_fstring_body(cursor, values, run, 0);
    }
    run.flush(values);
    return make_node("JoinedStr", span_from(start), std::move(values));
  }

  // Scans literal text and replacement fields until the end of the body or,
  // for format specs (nested > 0), until the closing brace of the field.
  void scan_fstring_body(BodyCursor& cursor, std::vector<SimpleNode>& values,
                         LiteralRun& run, int nested) {
    while (cursor.i < cursor.body.size()) {
      char c = cursor.at();
      if (c == '\\' && cursor.i + 1 < cursor.body.size()) {
        const int line = cursor.line;
        const std::size_t from = cursor.i;
        cursor.step();
        cursor.step();
        run.add(cursor.body.substr(from, 2), line, cursor.line);
        continue;
      }
      if (c == '{') {
        if (cursor.at(1) == '{' && nested == 0) {
          const int line = cursor.line;
          cursor.step();
          cursor.step();
          run.add("{{", line, line);
          continue;
        }
        run.flush(values);
        values.push_back(parse_replacement_field(cursor));
        continue;
      }
      if (c == '}') {
        if (nested > 0) return;
        if (cursor.at(1) == '}') {
          const int line = cursor.line;
          cursor.step();
          cursor.step();
          run.add("}}", line, line);
          continue;
        }
        throw ParseError(cursor.line, cursor.col, "f-string: single '}' is not allowed");
      }
      const int line = cursor.line;
      const std::size_t from = cursor.i;
      cursor.step();
      run.add(cursor.body.substr(from, 1), line, line);
    }
    if (nested > 0) {
      throw ParseError(cursor.line, cursor.col, "f-string: expecting '}'");
    }
  }

  SimpleNode parse_replacement_field(BodyCursor& cursor) {
    if (++fstring_depth_ > 2) {
      throw ParseError(cursor.line, cursor.col, "f-string: expressions nested too deeply");
    }
    const int open_line = cursor.line;
    cursor.step();  // '{'
    const std::size_t expr_begin = cursor.i;
    const int expr_line = cursor.line;
    const int expr_col = cursor.col;

    // Find the end of the expression: a top-level '}', '!' (not "!="), ':' or
    // a self-documenting '='.
    int depth = 0;
    char in_quote = 0;
    std::size_t expr_end = std::string_view::npos;
    bool self_documenting = false;
    while (cursor.i < cursor.body.size()) {
      char c = cursor.at();
      if (in_quote != 0) {
        if (c == in_quote) in_quote = 0;
        cursor.step();
        continue;
      }
      if (c == '\'' || c == '"') {
        in_quote = c;
      } else if (c == '(' || c == '[' || c == '{') {
        ++depth;
      } else if ((c == ')' || c == ']' || c == '}') && depth > 0) {
        --depth;
      } else if (depth == 0) {
        if (c == '}' || c == ':' || (c == '!' && cursor.at(1) != '=')) {
          expr_end = cursor.i;
          break;
        }
        if (c == '=' && cursor.at(1) != '=') {
          char prev = cursor.i > expr_begin ? cursor.body[cursor.i - 1] : '\0';
          if (prev != '=' && prev != '!' && prev != '<' && prev != '>') {
            std::size_t k = cursor.i + 1;
            while (k < cursor.body.size() && (cursor.body[k] == ' ' || cursor.body[k] == '\n')) ++k;
            if (k < cursor.body.size() &&
                (cursor.body[k] == '}' || cursor.body[k] == '!' || cursor.body[k] == ':')) {
              expr_end = cursor.i;
              self_documenting = true;
              break;
            }
          }
        }
      }
      cursor.step();
    }
    if (expr_end == std::string_view::npos) {
      throw ParseError(open_line, expr_col, "f-string: expecting '}'");
    }
    std::string_view expr_text = cursor.body.substr(expr_begin, expr_end - expr_begin);
    if (expr_text.find_first_not_of(" \t\n\r") == std::string_view::npos) {
      throw ParseError(expr_line, expr_col, "f-string: empty expression not allowed");
    }

    std::vector<SimpleNode> parts;
    {
      Lexer lexer(expr_text, expr_line, expr_col, /*bracketed=*/true);
      Parser sub(lexer.tokenize(), source_);
      sub.fstring_depth_ = fstring_depth_;
      parts.push_back(sub.parse_embedded_expression());
    }
    if (self_documenting) {
      cursor.step();  // '='
      while (cursor.at() == ' ' || cursor.at() == '\n') cursor.step();
    }
    if (cursor.at() == '!') {
      cursor.step();
      char conversion = cursor.at();
      if (conversion != 's' && conversion != 'r' && conversion != 'a') {
        throw ParseError(cursor.line, cursor.col,
                         "f-string: invalid conversion character: expected 's', 'r', or 'a'");
      }
      cursor.step();
    }
    if (cursor.at() == ':') {
      cursor.step();
      const int spec_line = cursor.line;
      std::vector<SimpleNode> spec_values;
      LiteralRun spec_run;
      scan_fstring_body(cursor, spec_values, spec_run, 1);
      spec_run.flush(spec_values);
      parts.push_back(make_node("JoinedStr", LineRange{spec_line, cursor.line},
                                std::move(spec_values)));
    }
    if (cursor.at() != '}') {
      throw ParseError(cursor.line, cursor.col, "f-string: expecting '}'");
    }
    const int close_line = cursor.line;
    cursor.step();
    --fstring_depth_;
    return make_node("FormattedValue", LineRange{open_line, close_line}, std::move(parts));
  }

  std::vector<Token> tokens_;
  std::string_view source_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  int fstring_depth_ = 0;
};

}  // namespace

SimpleNode parse_source(std::string_view text) {
  Lexer lexer(text);
  Parser parser(lexer.tokenize(), text);
  return parser.parse_module();
}

}  // namespace bugexplain::ast
