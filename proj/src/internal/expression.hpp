#ifndef CFCM_INTERNAL_EXPRESSION_HPP
#define CFCM_INTERNAL_EXPRESSION_HPP

#include "lexer.hpp"

#include <cfcm/model.hpp>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfcm::detail {

/// Integer expression over parent names and the error symbol `u`.
class Expression {
 public:
  struct Node;

  /// Parses tokens[begin..] up to the end token. Returns nullopt after
  /// appending diagnostics on a syntax error.
  static std::optional<Expression> parse(const std::vector<Token>& tokens, std::size_t begin,
                                         std::vector<Diagnostic>& diagnostics);

  /// Identifiers other than `u` in first-use order.
  const std::vector<std::string>& names() const { return names_; }
  bool uses_error() const { return uses_error_; }

  /// Evaluates with `values[i]` bound to names()[i]. Returns nullopt and sets
  /// `error` on overflow or a mod by a non-positive number.
  std::optional<long long> evaluate(std::span<const long long> values, long long u, std::string& error) const;

 private:
  std::shared_ptr<const Node> root_;
  std::vector<std::string> names_;
  bool uses_error_ = false;
};

/// Compiles `func v := expr` into a table for vertex v of `g`. Diagnostics are
/// reported at `where` (line/column of the expression).
std::optional<Mechanism> compile_expression(const Expression& expr, const DirectedGraph& g,
                                            const std::vector<Alphabet>& alphabets, const ErrorVariable& error,
                                            VertexIndex v, const Token& where, std::vector<Diagnostic>& diagnostics);

}  // namespace cfcm::detail

#endif  // CFCM_INTERNAL_EXPRESSION_HPP
