#include <cfcm/dsl.hpp>

#include "internal/document.hpp"

#include <sstream>

namespace cfcm {

namespace detail {
namespace {

class LineReader {
 public:
  LineReader(std::vector<Token> tokens, Document& doc) : tokens_(std::move(tokens)), doc_(doc) {}

  const std::vector<Token>& tokens() const { return tokens_; }
  std::size_t position() const { return pos_; }
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_ + 1 < tokens_.size() ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::end; }

  // All helpers report at most one diagnostic per line; later ones would be noise.
  bool fail(const Token& at, const std::string& message) {
    if (!failed_) doc_.diagnostics.push_back({message, "", at.line, at.column});
    failed_ = true;
    return false;
  }
  bool failed() const { return failed_; }

  static Pos pos_of(const Token& t) { return {t.line, t.column}; }

  bool expect(std::string_view symbol) {
    if (peek().kind == Token::Kind::symbol && peek().text == symbol) {
      take();
      return true;
    }
    return fail(peek(), "expected '" + std::string(symbol) + "'" + found());
  }

  std::optional<Symbol> name(const char* what) {
    if (peek().kind != Token::Kind::identifier) {
      fail(peek(), std::string("expected ") + what + found());
      return std::nullopt;
    }
    const Token& t = take();
    return Symbol{t.text, pos_of(t)};
  }

  // identifier | integer | '-' integer
  std::optional<Symbol> symbol(const char* what) {
    const Token& t = peek();
    if (t.kind == Token::Kind::identifier || t.kind == Token::Kind::integer) {
      take();
      return Symbol{t.text, pos_of(t)};
    }
    if (t.is("-") && tokens_[pos_ + 1].kind == Token::Kind::integer) {
      take();
      const Token& digits = take();
      return Symbol{"-" + digits.text, pos_of(t)};
    }
    fail(t, std::string("expected ") + what + found());
    return std::nullopt;
  }

  std::optional<long long> integer() {
    auto s = symbol("an integer");
    if (!s) return std::nullopt;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s->text, &used);
      if (used == s->text.size()) return v;
    } catch (const std::exception&) {
    }
    fail(tokens_[pos_ - 1], "expected an integer, found '" + s->text + "'");
    return std::nullopt;
  }

  // p | p/q
  std::optional<Rational> rational() {
    const Token& start = peek();
    bool negative = false;
    if (start.is("-")) {
      take();
      negative = true;
    }
    if (peek().kind != Token::Kind::integer) {
      fail(peek(), "expected a rational p/q" + found());
      return std::nullopt;
    }
    std::string text = take().text;
    if (peek().is("/")) {
      take();
      if (peek().kind != Token::Kind::integer) {
        fail(peek(), "expected a denominator" + found());
        return std::nullopt;
      }
      text += "/" + take().text;
    }
    auto r = parse_rational(text);
    if (!r) {
      fail(start, "invalid rational '" + text + "'");
      return std::nullopt;
    }
    if (negative) {
      fail(start, "probabilities must be non-negative");
      return std::nullopt;
    }
    return r;
  }

  // lo..hi | {tok, ...}
  std::optional<AlphabetSpec> alphabet() {
    AlphabetSpec spec;
    spec.pos = pos_of(peek());
    if (peek().is("{")) {
      take();
      while (true) {
        auto s = symbol("an alphabet symbol");
        if (!s) return std::nullopt;
        spec.symbols.push_back(*s);
        if (spec.symbols.size() > kMaxAlphabet) {
          fail(peek(), "alphabet larger than " + std::to_string(kMaxAlphabet) + " symbols");
          return std::nullopt;
        }
        if (peek().is(",")) {
          take();
          continue;
        }
        if (!expect("}")) return std::nullopt;
        return spec;
      }
    }
    const Token& first = peek();
    auto lo = integer();
    if (!lo) return std::nullopt;
    if (!expect("..")) return std::nullopt;
    auto hi = integer();
    if (!hi) return std::nullopt;
    if (*hi < *lo) {
      fail(first, "empty range " + std::to_string(*lo) + ".." + std::to_string(*hi));
      return std::nullopt;
    }
    if (static_cast<unsigned long long>(*hi) - static_cast<unsigned long long>(*lo) >= kMaxAlphabet) {
      fail(first, "alphabet larger than " + std::to_string(kMaxAlphabet) + " symbols");
      return std::nullopt;
    }
    for (long long v = *lo; v <= *hi; ++v) spec.symbols.push_back({std::to_string(v), spec.pos});
    return spec;
  }

  bool finish() {
    if (!at_end()) return fail(peek(), "unexpected '" + peek().text + "' at end of statement");
    return true;
  }

 private:
  std::string found() const {
    return at_end() ? std::string(", found end of line") : ", found '" + peek().text + "'";
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Document& doc_;
  bool failed_ = false;
};

void read_vertex(LineReader& r, Document& doc) {
  auto name = r.name("a vertex name");
  if (!name) return;
  VertexDecl decl{*name, std::nullopt};
  if (r.peek().is(":")) {
    r.take();
    decl.alphabet = r.alphabet();
    if (!decl.alphabet) return;
  }
  if (r.finish()) doc.vertices.push_back(std::move(decl));
}

void read_edge(LineReader& r, Document& doc) {
  auto from = r.name("a vertex name");
  if (!from || !r.expect("->")) return;
  auto to = r.name("a vertex name");
  if (to && r.finish()) doc.edges.push_back({*from, *to});
}

void read_error(LineReader& r, Document& doc) {
  auto vertex = r.name("a vertex name");
  if (!vertex || !r.expect("~")) return;
  ErrorDecl decl;
  decl.vertex = *vertex;
  if (r.peek().kind == Token::Kind::identifier && r.peek().text == "uniform") {
    r.take();
    decl.uniform = true;
    if (!r.at_end()) {
      decl.alphabet = r.alphabet();
      if (!decl.alphabet) return;
    }
  } else {
    if (!r.expect("{")) return;
    while (true) {
      auto s = r.symbol("an error symbol");
      if (!s || !r.expect(":")) return;
      auto p = r.rational();
      if (!p) return;
      decl.entries.emplace_back(*s, *p);
      if (decl.entries.size() > kMaxAlphabet) {
        r.fail(r.peek(), "error alphabet larger than " + std::to_string(kMaxAlphabet) + " symbols");
        return;
      }
      if (r.peek().is(",")) {
        r.take();
        continue;
      }
      if (!r.expect("}")) return;
      break;
    }
  }
  if (r.finish()) doc.errors.push_back(std::move(decl));
}

void read_func(LineReader& r, Document& doc) {
  auto vertex = r.name("a vertex name");
  if (!vertex || !r.expect(":=")) return;
  const Token where = r.peek();
  auto expr = Expression::parse(r.tokens(), r.position(), doc.diagnostics);
  if (expr) doc.funcs.push_back({*vertex, where, std::move(*expr)});
}

void read_table(LineReader& r, Document& doc) {
  auto vertex = r.name("a vertex name");
  if (!vertex) return;
  TableDecl decl;
  decl.vertex = *vertex;
  if (r.peek().is("|")) {
    r.take();
    decl.parents.emplace();
    while (r.peek().kind == Token::Kind::identifier) decl.parents->push_back(*r.name("a parent name"));
  }
  if (!r.expect(":")) return;
  while (!r.at_end()) {
    TableRow row;
    row.pos = LineReader::pos_of(r.peek());
    while (!r.peek().is("@") && !r.peek().is("->")) {
      auto v = r.symbol("a parent value, '@' or '->'");
      if (!v) return;
      row.values.push_back(*v);
    }
    if (r.peek().is("@")) {
      r.take();
      row.error = r.symbol("an error symbol");
      if (!row.error) return;
    }
    if (!r.expect("->")) return;
    auto out = r.symbol("an output value");
    if (!out) return;
    row.out = *out;
    decl.rows.push_back(std::move(row));
    if (r.at_end()) break;
    if (!r.expect(";")) return;
  }
  doc.tables.push_back(std::move(decl));
}

Document read_text(std::string_view text) {
  Document doc;
  int line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_number;
    const std::size_t lexical_errors = doc.diagnostics.size();
    LineReader r(lex_line(text.substr(start, end - start), line_number, 0, doc.diagnostics), doc);
    start = end + 1;
    if (r.at_end() || doc.diagnostics.size() != lexical_errors) continue;
    const Token& keyword = r.take();
    if (keyword.kind != Token::Kind::identifier) {
      r.fail(keyword, "expected a statement keyword, found '" + keyword.text + "'");
      continue;
    }
    if (keyword.text == "vertex")
      read_vertex(r, doc);
    else if (keyword.text == "edge")
      read_edge(r, doc);
    else if (keyword.text == "error")
      read_error(r, doc);
    else if (keyword.text == "func")
      read_func(r, doc);
    else if (keyword.text == "table")
      read_table(r, doc);
    else
      r.fail(keyword, "unknown statement '" + keyword.text + "'");
  }
  return doc;
}

std::string alphabet_text(const Alphabet& a) {
  if (a == Alphabet::range(a.size())) return "0.." + std::to_string(a.size() - 1);
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) out += (i > 0 ? ", " : "") + a.symbol(i);
  return out + "}";
}

}  // namespace
}  // namespace detail

ParseResult parse_model(std::string_view text) { return detail::build_model(detail::read_text(text)); }

GraphParseResult parse_graph(std::string_view text) { return detail::build_graph(detail::read_text(text)); }

ModelFormat detect_format(std::string_view text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    return c == '{' ? ModelFormat::json : ModelFormat::dsl;
  }
  return ModelFormat::dsl;
}

std::string format_diagnostic(const Diagnostic& d, std::string_view source) {
  std::ostringstream out;
  out << source << ':' << d.line << ':' << d.column << ": " << d.message;
  return out.str();
}

std::string serialize_model_json(const FunctionalCausalModel& m);

std::string serialize_model(const FunctionalCausalModel& m, ModelFormat format) {
  if (format == ModelFormat::json) return serialize_model_json(m);
  const DirectedGraph& g = m.graph;
  std::ostringstream out;
  for (VertexIndex v = 0; v < m.size(); ++v) out << "vertex " << g.label(v) << " : " << detail::alphabet_text(m.alphabets[v]) << '\n';
  for (const Edge& e : g.edges()) out << "edge " << g.label(e.from) << " -> " << g.label(e.to) << '\n';
  for (VertexIndex v = 0; v < m.size(); ++v) {
    const ErrorVariable& err = m.errors[v];
    if (err == ErrorVariable::deterministic()) continue;
    out << "error " << g.label(v) << " ~ ";
    if (err == ErrorVariable::uniform(err.alphabet)) {
      out << "uniform";
      if (!(err.alphabet == m.alphabets[v])) out << ' ' << detail::alphabet_text(err.alphabet);
    } else {
      out << '{';
      for (std::size_t i = 0; i < err.alphabet.size(); ++i)
        out << (i > 0 ? ", " : "") << err.alphabet.symbol(i) << ": " << to_string(err.distribution[i]);
      out << '}';
    }
    out << '\n';
  }
  for (VertexIndex v = 0; v < m.size(); ++v) {
    const Mechanism& mech = m.mechanisms[v];
    const ErrorVariable& err = m.errors[v];
    const bool show_error = !(err == ErrorVariable::deterministic());
    out << "table " << g.label(v);
    if (!mech.parents.empty()) {
      out << " |";
      for (VertexIndex p : mech.parents) out << ' ' << g.label(p);
    }
    out << " :";
    bool first = true;
    for (Odometer pa(mech.parent_radices); !pa.done(); pa.next()) {
      for (std::size_t u = 0; u < mech.error_size; ++u) {
        out << (first ? " " : "; ");
        first = false;
        for (std::size_t i = 0; i < mech.parents.size(); ++i)
          out << m.alphabets[mech.parents[i]].symbol(pa.digits()[i]) << ' ';
        if (show_error) out << "@ " << err.alphabet.symbol(u) << ' ';
        out << "-> " << m.alphabets[v].symbol(mech.at(pa.digits(), u));
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace cfcm
