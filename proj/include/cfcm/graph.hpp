#ifndef CFCM_GRAPH_HPP
#define CFCM_GRAPH_HPP

#include <cfcm/vertex_set.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfcm {

struct Edge {
  VertexIndex from;
  VertexIndex to;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed graph over an ordered, labelled vertex list. Cycles and self-loops
/// are allowed. Immutable once built; every query is const.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Throws GraphError on empty/duplicate labels or unknown edge endpoints.
  /// Duplicate edges are rejected as well.
  static DirectedGraph build(std::vector<std::string> labels,
                             const std::vector<std::pair<std::string, std::string>>& edges);
  /// Index-based construction; same validation as build().
  static DirectedGraph from_edges(std::vector<std::string> labels, std::vector<Edge> edges);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(VertexIndex v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<VertexIndex> find(std::string_view label) const;
  /// Throws GraphError for an unknown label.
  VertexIndex index_of(std::string_view label) const;

  /// Sorted by index.
  const std::vector<VertexIndex>& parents(VertexIndex v) const { return parents_.at(v); }
  const std::vector<VertexIndex>& children(VertexIndex v) const { return children_.at(v); }
  bool has_edge(VertexIndex from, VertexIndex to) const;
  /// Sorted lexicographically by (from, to).
  const std::vector<Edge>& edges() const { return edges_; }

  bool is_exogenous(VertexIndex v) const { return parents_.at(v).empty(); }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<VertexIndex>> parents_;
  std::vector<std::vector<VertexIndex>> children_;
};

enum class Kinship { parents, children, descendants, ancestors };

/// Descendants/ancestors are transitive closures; v belongs to its own
/// descendants (ancestors) only when it lies on a directed cycle.
VertexSet kinship(const DirectedGraph& g, VertexIndex v, Kinship kind);

/// Union of `seeds` and every ancestor of a seed.
VertexSet ancestral_closure(const DirectedGraph& g, const VertexSet& seeds);

/// A self-loop counts as a cycle.
bool is_acyclic(const DirectedGraph& g);

/// Vertices in a topological order; throws GraphError when the graph is cyclic.
std::vector<VertexIndex> topological_order(const DirectedGraph& g);

/// Same vertices, minus every out-edge of every vertex in `s`.
DirectedGraph remove_out_edges(const DirectedGraph& g, const VertexSet& s);

/// True iff removing the out-edges of `s` leaves an acyclic graph.
bool is_split_set(const DirectedGraph& g, const VertexSet& s);

/// Visits every split set of `g` by increasing cardinality, then
/// lexicographically by sorted vertex index. The visitor returns false to stop.
void for_each_split_set(const DirectedGraph& g, const std::function<bool(const VertexSet&)>& visit);

/// Materialized form of for_each_split_set.
std::vector<VertexSet> enumerate_split_sets(const DirectedGraph& g);

}  // namespace cfcm

#endif  // CFCM_GRAPH_HPP
