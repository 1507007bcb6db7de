#ifndef CFCM_INTERNAL_LEXER_HPP
#define CFCM_INTERNAL_LEXER_HPP

#include <cfcm/model.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace cfcm::detail {

struct Token {
  enum class Kind { identifier, integer, symbol, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 0;
  int column = 0;

  bool is(std::string_view s) const { return kind != Kind::end && text == s; }
};

/// Splits one source line into tokens. `column_offset` is added to every
/// column (1-based columns result when it is 0). Lexical errors are appended
/// to `diagnostics` and the offending characters skipped. The last token is
/// always an end token positioned just past the input.
std::vector<Token> lex_line(std::string_view line, int line_number, int column_offset,
                            std::vector<Diagnostic>& diagnostics);

/// True when `s` lexes as a single identifier or (optionally signed) integer.
bool is_plain_token(std::string_view s);

}  // namespace cfcm::detail

#endif  // CFCM_INTERNAL_LEXER_HPP
