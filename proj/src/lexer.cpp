#include "internal/lexer.hpp"

#include <cctype>

namespace cfcm::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\''; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> lex_line(std::string_view line, int line_number, int column_offset,
                            std::vector<Diagnostic>& diagnostics) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto column = [&](std::size_t pos) { return column_offset + static_cast<int>(pos) + 1; };
  auto emit = [&](Token::Kind kind, std::size_t begin, std::size_t end) {
    out.push_back({kind, std::string(line.substr(begin, end - begin)), line_number, column(begin)});
  };
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < line.size() && ident_char(line[j])) ++j;
      emit(Token::Kind::identifier, i, j);
      i = j;
      continue;
    }
    if (digit(c)) {
      std::size_t j = i + 1;
      while (j < line.size() && digit(line[j])) ++j;
      if (j + 1 < line.size() && line[j] == '.' && digit(line[j + 1])) {
        diagnostics.push_back({"decimal literals are not allowed; write p/q", "", line_number, column(i)});
        j += 1;
        while (j < line.size() && digit(line[j])) ++j;
        i = j;
        continue;
      }
      emit(Token::Kind::integer, i, j);
      i = j;
      continue;
    }
    static constexpr std::string_view two_char[] = {"..", "->", ":=", "==", "!="};
    bool matched = false;
    for (std::string_view op : two_char) {
      if (line.substr(i, 2) == op) {
        emit(Token::Kind::symbol, i, i + 2);
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view one_char = ":{},~|;@/()+-*";
    if (one_char.find(c) != std::string_view::npos) {
      emit(Token::Kind::symbol, i, i + 1);
      ++i;
      continue;
    }
    std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "\\x" + [&] {
      static const char* hex = "0123456789abcdef";
      const auto b = static_cast<unsigned char>(c);
      return std::string{hex[b >> 4], hex[b & 15]};
    }();
    diagnostics.push_back({"unexpected character '" + shown + "'", "", line_number, column(i)});
    ++i;
  }
  out.push_back({Token::Kind::end, "", line_number, column(line.size())});
  return out;
}

bool is_plain_token(std::string_view s) {
  if (s.empty()) return false;
  if (ident_start(s[0])) {
    for (char c : s)
      if (!ident_char(c)) return false;
    return true;
  }
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!digit(s[i])) return false;
  return true;
}

}  // namespace cfcm::detail
