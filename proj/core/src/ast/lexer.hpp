#pragma once

#include <string_view>
#include <vector>

namespace bugexplain::ast::detail {

enum class TokenKind { kName, kNumber, kString, kOp, kNewline, kIndent, kDedent, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string_view text;  // view into the source
  int line = 1;           // 1-indexed
  int col = 1;            // 1-indexed
  int end_line = 1;       // line of the last character
};

/// Python tokenizer producing the NEWLINE/INDENT/DEDENT stream the grammar
/// expects. Blank and comment-only lines produce no tokens.
///
/// In bracketed mode the input is treated as if it were already inside an
/// open parenthesis: no indentation tracking and no NEWLINE tokens. This is
/// how replacement fields of f-strings are tokenized.
class Lexer {
 public:
  explicit Lexer(std::string_view source, int first_line = 1, int first_col = 1,
                 bool bracketed = false);

  /// Throws ParseError on malformed input.
  std::vector<Token> tokenize();

 private:
  struct Bracket {
    char opener;
    int line;
    int col;
  };

  bool at_end() const noexcept { return pos_ >= src_.size(); }
  char cur() const noexcept { return at_end() ? '\0' : src_[pos_]; }
  char ahead(std::size_t k) const noexcept {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }
  int column() const noexcept;
  void newline_advance();  // consumes "\n", "\r\n" or "\r"

  void handle_indentation();
  void lex_name_or_string();
  void lex_string(std::size_t token_start, int start_line, int start_col);
  void lex_number();
  void lex_operator();
  void emit(TokenKind kind, std::size_t begin, std::size_t end, int line, int col,
            int end_line);

  [[noreturn]] void fail(int line, int col, const char* message) const;

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  std::size_t line_begin_ = 0;
  int first_line_;
  int first_col_;
  bool bracketed_;
  bool at_line_start_;
  std::vector<int> indents_{0};
  std::vector<Bracket> brackets_;
  std::vector<Token> tokens_;
};

}  // namespace bugexplain::ast::detail
