#ifndef CFCM_DSL_HPP
#define CFCM_DSL_HPP

#include <cfcm/model.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfcm {

struct ParseResult {
  std::optional<FunctionalCausalModel> model;  // set iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

struct GraphParseResult {
  std::optional<DirectedGraph> graph;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return graph.has_value(); }
};

enum class ModelFormat { dsl, json };

/// Text format (.cfcm). On success the model has passed validate_model.
ParseResult parse_model(std::string_view text);
ParseResult parse_model_json(std::string_view text);

/// Reads only the vertex and edge statements; alphabets are optional.
GraphParseResult parse_graph(std::string_view text);
GraphParseResult parse_graph_json(std::string_view text);

/// JSON when the first non-blank character is '{', the text format otherwise.
ModelFormat detect_format(std::string_view text);

/// Tables are written out in full; expressions are not reconstructed.
std::string serialize_model(const FunctionalCausalModel& m, ModelFormat format);

/// "<source>:<line>:<column>: <message>".
std::string format_diagnostic(const Diagnostic& d, std::string_view source);

}  // namespace cfcm

#endif  // CFCM_DSL_HPP
