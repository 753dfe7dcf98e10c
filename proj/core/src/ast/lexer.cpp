#include "lexer.hpp"

#include <array>
#include <cctype>
#include <string>

#include "bugexplain/error.hpp"

namespace bugexplain::ast::detail {
namespace {

bool is_ident_start(char c) noexcept {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || u >= 0x80;
}

bool is_ident_char(char c) noexcept {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

bool is_string_prefix(std::string_view word) noexcept {
  if (word.empty() || word.size() > 2) return false;
  std::string lower;
  for (char c : word) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return lower == "r" || lower == "u" || lower == "f" || lower == "b" || lower == "br" ||
         lower == "rb" || lower == "fr" || lower == "rf";
}

constexpr std::array<std::string_view, 4> kThreeCharOps = {"**=", "//=", ">>=", "<<="};
constexpr std::array<std::string_view, 19> kTwoCharOps = {
    "->", ":=", "**", "//", ">>", "<<", "<=", ">=", "==", "!=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@="};
constexpr std::string_view kOneCharOps = "()[]{},:.;@=+-*/%&|^~<>";

char closer_for(char opener) noexcept {
  switch (opener) {
    case '(': return ')';
    case '[': return ']';
    default: return '}';
  }
}

}  // namespace

Lexer::Lexer(std::string_view source, int first_line, int first_col, bool bracketed)
    : src_(source),
      line_(first_line),
      first_line_(first_line),
      first_col_(first_col),
      bracketed_(bracketed),
      at_line_start_(!bracketed) {}

int Lexer::column() const noexcept {
  int col = static_cast<int>(pos_ - line_begin_) + 1;
  if (line_ == first_line_) col += first_col_ - 1;
  return col;
}

void Lexer::fail(int line, int col, const char* message) const {
  throw ParseError(line, col, message);
}

void Lexer::newline_advance() {
  if (cur() == '\r' && ahead(1) == '\n') ++pos_;
  ++pos_;
  ++line_;
  line_begin_ = pos_;
}

void Lexer::emit(TokenKind kind, std::size_t begin, std::size_t end, int line, int col,
                 int end_line) {
  tokens_.push_back(Token{kind, src_.substr(begin, end - begin), line, col, end_line});
}

void Lexer::handle_indentation() {
  int width = 0;
  while (!at_end()) {
    char c = cur();
    if (c == ' ') {
      ++width;
    } else if (c == '\t') {
      width = (width / 8 + 1) * 8;
    } else if (c == '\f') {
      width = 0;
    } else {
      break;
    }
    ++pos_;
  }
  if (at_end()) return;
  char c = cur();
  if (c == '#' || c == '\n' || c == '\r') {
    // Blank or comment-only line: no tokens, no indentation change.
    while (!at_end() && cur() != '\n' && cur() != '\r') ++pos_;
    if (!at_end()) newline_advance();
    return;
  }
  at_line_start_ = false;
  if (width > indents_.back()) {
    indents_.push_back(width);
    emit(TokenKind::kIndent, pos_, pos_, line_, column(), line_);
    return;
  }
  while (width < indents_.back()) {
    indents_.pop_back();
    emit(TokenKind::kDedent, pos_, pos_, line_, column(), line_);
  }
  if (width != indents_.back()) {
    fail(line_, column(), "unindent does not match any outer indentation level");
  }
}

void Lexer::lex_string(std::size_t token_start, int start_line, int start_col) {
  const char quote = cur();
  const bool triple = ahead(1) == quote && ahead(2) == quote;
  pos_ += triple ? 3 : 1;
  while (true) {
    if (at_end()) {
      fail(start_line, start_col,
           triple ? "unterminated triple-quoted string literal"
                  : "unterminated string literal");
    }
    char c = cur();
    if (c == '\\') {
      ++pos_;
      if (at_end()) continue;
      if (cur() == '\n' || cur() == '\r') {
        newline_advance();
      } else {
        ++pos_;
      }
      continue;
    }
    if (c == '\n' || c == '\r') {
      if (!triple) fail(start_line, start_col, "unterminated string literal");
      newline_advance();
      continue;
    }
    if (c == quote) {
      if (!triple) {
        ++pos_;
        break;
      }
      if (ahead(1) == quote && ahead(2) == quote) {
        pos_ += 3;
        break;
      }
    }
    ++pos_;
  }
  emit(TokenKind::kString, token_start, pos_, start_line, start_col, line_);
}

void Lexer::lex_name_or_string() {
  const std::size_t begin = pos_;
  const int col = column();
  while (!at_end() && is_ident_char(cur())) ++pos_;
  std::string_view word = src_.substr(begin, pos_ - begin);
  if ((cur() == '"' || cur() == '\'') && is_string_prefix(word)) {
    lex_string(begin, line_, col);
    return;
  }
  emit(TokenKind::kName, begin, pos_, line_, col, line_);
}

void Lexer::lex_number() {
  const std::size_t begin = pos_;
  const int col = column();
  auto digits = [this](auto pred) {
    while (!at_end() && (pred(cur()) || cur() == '_')) ++pos_;
  };
  auto is_dec = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  char c1 = ahead(1);
  if (cur() == '0' && (c1 == 'x' || c1 == 'X' || c1 == 'o' || c1 == 'O' || c1 == 'b' ||
                       c1 == 'B')) {
    pos_ += 2;
    digits([](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
  } else {
    digits(is_dec);
    if (cur() == '.') {
      ++pos_;
      digits(is_dec);
    }
    if (cur() == 'e' || cur() == 'E') {
      char next = ahead(1);
      if (is_dec(next) || ((next == '+' || next == '-') && is_dec(ahead(2)))) {
        pos_ += (next == '+' || next == '-') ? 2 : 1;
        digits(is_dec);
      }
    }
    if (cur() == 'j' || cur() == 'J') ++pos_;
  }
  emit(TokenKind::kNumber, begin, pos_, line_, col, line_);
}

void Lexer::lex_operator() {
  const std::size_t begin = pos_;
  const int col = column();
  std::string_view rest = src_.substr(pos_);
  std::size_t len = 0;
  if (rest.substr(0, 3) == "...") {
    len = 3;
  } else {
    for (auto op : kThreeCharOps) {
      if (rest.substr(0, 3) == op) len = 3;
    }
    if (len == 0) {
      for (auto op : kTwoCharOps) {
        if (rest.substr(0, 2) == op) len = 2;
      }
    }
    if (len == 0 && kOneCharOps.find(cur()) != std::string_view::npos) len = 1;
  }
  if (len == 0) {
    std::string message = "invalid character '";
    message += cur();
    message += "'";
    throw ParseError(line_, col, message);
  }
  char c = cur();
  if (len == 1 && (c == '(' || c == '[' || c == '{')) {
    brackets_.push_back(Bracket{c, line_, col});
  } else if (len == 1 && (c == ')' || c == ']' || c == '}')) {
    const std::size_t floor = bracketed_ ? 1 : 0;
    if (brackets_.size() <= floor) {
      std::string message = "unmatched '";
      message += c;
      message += "'";
      throw ParseError(line_, col, message);
    }
    if (closer_for(brackets_.back().opener) != c) {
      std::string message = "closing parenthesis '";
      message += c;
      message += "' does not match opening parenthesis '";
      message += brackets_.back().opener;
      message += "'";
      throw ParseError(line_, col, message);
    }
    brackets_.pop_back();
  }
  pos_ += len;
  emit(TokenKind::kOp, begin, pos_, line_, col, line_);
}

std::vector<Token> Lexer::tokenize() {
  if (bracketed_) brackets_.push_back(Bracket{'(', line_, first_col_});
  while (true) {
    if (at_line_start_ && brackets_.empty()) {
      handle_indentation();
      if (at_end()) break;
      if (at_line_start_) continue;  // blank line consumed
    }
    while (!at_end() && (cur() == ' ' || cur() == '\t' || cur() == '\f')) ++pos_;
    if (at_end()) break;
    char c = cur();
    if (c == '#') {
      while (!at_end() && cur() != '\n' && cur() != '\r') ++pos_;
      continue;
    }
    if (c == '\\') {
      if (ahead(1) == '\n' || ahead(1) == '\r') {
        ++pos_;
        newline_advance();
        if (at_end()) fail(line_, 1, "unexpected EOF while parsing");
        continue;
      }
      fail(line_, column(), "unexpected character after line continuation character");
    }
    if (c == '\n' || c == '\r') {
      if (!brackets_.empty()) {
        newline_advance();
        continue;
      }
      if (!tokens_.empty() && tokens_.back().kind != TokenKind::kNewline &&
          tokens_.back().kind != TokenKind::kIndent &&
          tokens_.back().kind != TokenKind::kDedent) {
        emit(TokenKind::kNewline, pos_, pos_ + 1, line_, column(), line_);
      }
      newline_advance();
      at_line_start_ = true;
      continue;
    }
    if (c == '"' || c == '\'') {
      lex_string(pos_, line_, column());
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(ahead(1))))) {
      lex_number();
      continue;
    }
    if (is_ident_start(c)) {
      lex_name_or_string();
      continue;
    }
    lex_operator();
  }

  const std::size_t floor = bracketed_ ? 1 : 0;
  if (brackets_.size() > floor) {
    const Bracket& open = brackets_.back();
    std::string message = "'";
    message += open.opener;
    message += "' was never closed";
    throw ParseError(open.line, open.col, message);
  }
  if (!bracketed_) {
    if (!tokens_.empty() && tokens_.back().kind != TokenKind::kNewline &&
        tokens_.back().kind != TokenKind::kDedent) {
      emit(TokenKind::kNewline, pos_, pos_, line_, column(), line_);
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(TokenKind::kDedent, pos_, pos_, line_, column(), line_);
    }
  }
  emit(TokenKind::kEnd, pos_, pos_, line_, column(), line_);
  return std::move(tokens_);
}

}  // namespace bugexplain::ast::detail
