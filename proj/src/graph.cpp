#include <cfcm/graph.hpp>

#include <cfcm/errors.hpp>

#include <algorithm>
#include <unordered_map>

namespace cfcm {

DirectedGraph DirectedGraph::from_edges(std::vector<std::string> labels, std::vector<Edge> edges) {
  if (labels.empty()) throw GraphError("graph needs at least one vertex");
  std::unordered_map<std::string, VertexIndex> seen;
  for (VertexIndex i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw GraphError("empty vertex label");
    if (!seen.emplace(labels[i], i).second) throw GraphError("duplicate vertex label '" + labels[i] + "'");
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.from >= labels.size() || e.to >= labels.size()) throw GraphError("edge endpoint out of range");
    if (i > 0 && edges[i - 1] == e)
      throw GraphError("duplicate edge " + labels[e.from] + " -> " + labels[e.to]);
  }

  DirectedGraph g;
  g.parents_.resize(labels.size());
  g.children_.resize(labels.size());
  for (const Edge& e : edges) {
    g.children_[e.from].push_back(e.to);
    g.parents_[e.to].push_back(e.from);
  }
  for (auto& p : g.parents_) std::sort(p.begin(), p.end());
  g.labels_ = std::move(labels);
  g.edges_ = std::move(edges);
  return g;
}

DirectedGraph DirectedGraph::build(std::vector<std::string> labels,
                                   const std::vector<std::pair<std::string, std::string>>& edges) {
  std::unordered_map<std::string, VertexIndex> index;
  for (VertexIndex i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  std::vector<Edge> resolved;
  resolved.reserve(edges.size());
  for (const auto& [from, to] : edges) {
    auto a = index.find(from);
    auto b = index.find(to);
    if (a == index.end()) throw GraphError("edge endpoint '" + from + "' is not a declared vertex");
    if (b == index.end()) throw GraphError("edge endpoint '" + to + "' is not a declared vertex");
    resolved.push_back({a->second, b->second});
  }
  return from_edges(std::move(labels), std::move(resolved));
}

std::optional<VertexIndex> DirectedGraph::find(std::string_view label) const {
  for (VertexIndex i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

VertexIndex DirectedGraph::index_of(std::string_view label) const {
  if (auto v = find(label)) return *v;
  throw GraphError("unknown vertex '" + std::string(label) + "'");
}

bool DirectedGraph::has_edge(VertexIndex from, VertexIndex to) const {
  const auto& c = children_.at(from);
  return std::find(c.begin(), c.end(), to) != c.end();
}

namespace {

VertexSet closure(const DirectedGraph& g, VertexIndex v, bool forward) {
  VertexSet reached;
  std::vector<VertexIndex> stack{v};
  while (!stack.empty()) {
    VertexIndex cur = stack.back();
    stack.pop_back();
    for (VertexIndex next : forward ? g.children(cur) : g.parents(cur)) {
      if (!reached.contains(next)) {
        reached.insert(next);
        stack.push_back(next);
      }
    }
  }
  return reached;
}

// Kahn's algorithm on g with the out-edges of `cut` ignored.
bool acyclic_without(const DirectedGraph& g, const VertexSet& cut) {
  const std::size_t n = g.size();
  std::vector<std::size_t> indeg(n, 0);
  for (const Edge& e : g.edges())
    if (!cut.contains(e.from)) ++indeg[e.to];
  std::vector<VertexIndex> ready;
  for (VertexIndex v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  std::size_t done = 0;
  while (!ready.empty()) {
    VertexIndex v = ready.back();
    ready.pop_back();
    ++done;
    if (cut.contains(v)) continue;
    for (VertexIndex c : g.children(v))
      if (--indeg[c] == 0) ready.push_back(c);
  }
  return done == n;
}

}  // namespace

VertexSet kinship(const DirectedGraph& g, VertexIndex v, Kinship kind) {
  if (v >= g.size()) throw GraphError("unknown vertex index " + std::to_string(v));
  switch (kind) {
    case Kinship::parents:
      return VertexSet::from(g.parents(v));
    case Kinship::children:
      return VertexSet::from(g.children(v));
    case Kinship::descendants:
      return closure(g, v, true);
    case Kinship::ancestors:
      return closure(g, v, false);
  }
  return {};
}

VertexSet ancestral_closure(const DirectedGraph& g, const VertexSet& seeds) {
  VertexSet reached = seeds;
  std::vector<VertexIndex> stack = seeds.to_vector();
  while (!stack.empty()) {
    VertexIndex cur = stack.back();
    stack.pop_back();
    for (VertexIndex p : g.parents(cur)) {
      if (!reached.contains(p)) {
        reached.insert(p);
        stack.push_back(p);
      }
    }
  }
  return reached;
}

bool is_acyclic(const DirectedGraph& g) { return acyclic_without(g, {}); }

std::vector<VertexIndex> topological_order(const DirectedGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> indeg(n, 0);
  for (const Edge& e : g.edges()) ++indeg[e.to];
  std::vector<VertexIndex> order;
  order.reserve(n);
  for (VertexIndex v = 0; v < n; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (VertexIndex c : g.children(order[head]))
      if (--indeg[c] == 0) order.push_back(c);
  if (order.size() != n) throw GraphError("graph has a directed cycle");
  return order;
}

DirectedGraph remove_out_edges(const DirectedGraph& g, const VertexSet& s) {
  if (s.bound() > g.size()) throw GraphError("split set names a vertex outside the graph");
  std::vector<Edge> kept;
  for (const Edge& e : g.edges())
    if (!s.contains(e.from)) kept.push_back(e);
  return DirectedGraph::from_edges(g.labels(), std::move(kept));
}

bool is_split_set(const DirectedGraph& g, const VertexSet& s) {
  if (s.bound() > g.size()) throw GraphError("split set names a vertex outside the graph");
  return acyclic_without(g, s);
}

void for_each_split_set(const DirectedGraph& g, const std::function<bool(const VertexSet&)>& visit) {
  const std::size_t n = g.size();
  std::vector<VertexIndex> combo;
  for (std::size_t k = 0; k <= n; ++k) {
    combo.resize(k);
    for (std::size_t i = 0; i < k; ++i) combo[i] = i;
    while (true) {
      VertexSet s = VertexSet::from(combo);
      if (acyclic_without(g, s) && !visit(s)) return;
      // Advance to the next k-combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && combo[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
}

std::vector<VertexSet> enumerate_split_sets(const DirectedGraph& g) {
  std::vector<VertexSet> out;
  for_each_split_set(g, [&](const VertexSet& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

}  // namespace cfcm
