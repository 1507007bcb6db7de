#ifndef CFCM_INTERNAL_DOCUMENT_HPP
#define CFCM_INTERNAL_DOCUMENT_HPP

#include "expression.hpp"

#include <cfcm/dsl.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cfcm::detail {

// Format-independent statement list; both the text DSL and the JSON reader
// produce one and share the semantic checks in build_model / build_graph.

struct Pos {
  int line = 0;
  int column = 0;
};

struct Symbol {
  std::string text;
  Pos pos;
};

struct AlphabetSpec {
  std::vector<Symbol> symbols;
  Pos pos;
};

struct VertexDecl {
  Symbol name;
  std::optional<AlphabetSpec> alphabet;
};

struct EdgeDecl {
  Symbol from;
  Symbol to;
};

struct ErrorDecl {
  Symbol vertex;
  bool uniform = false;
  std::optional<AlphabetSpec> alphabet;  // uniform only; defaults to the vertex alphabet
  std::vector<std::pair<Symbol, Rational>> entries;
};

struct FuncDecl {
  Symbol vertex;
  Token where;
  Expression expr;
};

struct TableRow {
  std::vector<Symbol> values;
  std::optional<Symbol> error;  // absent: every error symbol
  Symbol out;
  Pos pos;
};

struct TableDecl {
  Symbol vertex;
  std::optional<std::vector<Symbol>> parents;
  std::vector<TableRow> rows;
};

struct Document {
  std::vector<VertexDecl> vertices;
  std::vector<EdgeDecl> edges;
  std::vector<ErrorDecl> errors;
  std::vector<FuncDecl> funcs;
  std::vector<TableDecl> tables;
  std::vector<Diagnostic> diagnostics;  // syntax errors gathered while reading
};

/// Upper bounds that keep hostile input from exhausting memory.
constexpr std::size_t kMaxAlphabet = 1u << 16;
constexpr std::size_t kMaxTableEntries = 1u << 24;

ParseResult build_model(Document doc);
GraphParseResult build_graph(Document doc);

}  // namespace cfcm::detail

#endif  // CFCM_INTERNAL_DOCUMENT_HPP
