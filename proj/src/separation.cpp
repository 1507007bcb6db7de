#include <cfcm/separation.hpp>

#include <cfcm/errors.hpp>

#include <bit>
#include <span>

namespace cfcm {

void validate_query(const SeparationQuery& q, std::size_t vertex_count) {
  if (q.x.empty() || q.y.empty()) throw QueryError("V1 and V2 must be non-empty");
  if (q.x.intersects(q.y) || q.x.intersects(q.z) || q.y.intersects(q.z))
    throw QueryError("V1, V2 and V3 must be pairwise disjoint");
  if (q.x.bound() > vertex_count || q.y.bound() > vertex_count || q.z.bound() > vertex_count)
    throw QueryError("query names a vertex outside the graph");
}

namespace {

// Parent/child bitmasks without self-loops; a simple path never uses one.
struct MaskGraph {
  std::vector<std::uint64_t> parents;
  std::vector<std::uint64_t> children;
};

constexpr std::size_t kMaskLimit = 64;

MaskGraph mask_graph(const DirectedGraph& g) {
  MaskGraph mg{std::vector<std::uint64_t>(g.size(), 0), std::vector<std::uint64_t>(g.size(), 0)};
  for (const Edge& e : g.edges()) {
    if (e.from == e.to) continue;
    mg.children[e.from] |= std::uint64_t{1} << e.to;
    mg.parents[e.to] |= std::uint64_t{1} << e.from;
  }
  return mg;
}

std::uint64_t to_mask(const VertexSet& s) {
  std::uint64_t m = 0;
  for (VertexIndex v : s.to_vector()) m |= std::uint64_t{1} << v;
  return m;
}

bool d_separated_masks(std::span<const std::uint64_t> parents, std::span<const std::uint64_t> children,
                       std::uint64_t x, std::uint64_t y, std::uint64_t z) {
  std::uint64_t anc = z;
  std::uint64_t frontier = z;
  while (frontier != 0) {
    const auto v = static_cast<std::size_t>(std::countr_zero(frontier));
    frontier &= frontier - 1;
    const std::uint64_t fresh = parents[v] & ~anc;
    anc |= fresh;
    frontier |= fresh;
  }
  // up: entered from a child; down: entered from a parent.
  std::uint64_t seen_up = x;
  std::uint64_t seen_down = 0;
  std::uint64_t todo_up = x;
  std::uint64_t todo_down = 0;
  while ((todo_up | todo_down) != 0) {
    if (((seen_up | seen_down) & y) != 0) return false;
    if (todo_up != 0) {
      const auto v = static_cast<std::size_t>(std::countr_zero(todo_up));
      todo_up &= todo_up - 1;
      if ((z >> v) & 1u) continue;
      const std::uint64_t up = parents[v] & ~seen_up;
      const std::uint64_t down = children[v] & ~seen_down;
      seen_up |= up;
      todo_up |= up;
      seen_down |= down;
      todo_down |= down;
    } else {
      const auto v = static_cast<std::size_t>(std::countr_zero(todo_down));
      todo_down &= todo_down - 1;
      if (((z >> v) & 1u) == 0) {
        const std::uint64_t down = children[v] & ~seen_down;
        seen_down |= down;
        todo_down |= down;
      }
      if ((anc >> v) & 1u) {
        const std::uint64_t up = parents[v] & ~seen_up;
        seen_up |= up;
        todo_up |= up;
      }
    }
  }
  return ((seen_up | seen_down) & y) == 0;
}

bool d_separated_lists(const DirectedGraph& g, const SeparationQuery& q) {
  const std::size_t n = g.size();
  const VertexSet anc = ancestral_closure(g, q.z);
  std::vector<char> seen_up(n, 0);
  std::vector<char> seen_down(n, 0);
  std::vector<std::pair<VertexIndex, bool>> stack;  // (vertex, entered from a child)
  for (VertexIndex v : q.x.to_vector()) {
    seen_up[v] = 1;
    stack.emplace_back(v, true);
  }
  while (!stack.empty()) {
    const auto [v, from_child] = stack.back();
    stack.pop_back();
    if (q.y.contains(v)) return false;
    const bool blocked = q.z.contains(v);
    auto go_up = [&] {
      for (VertexIndex p : g.parents(v))
        if (p != v && !seen_up[p]) {
          seen_up[p] = 1;
          stack.emplace_back(p, true);
        }
    };
    auto go_down = [&] {
      for (VertexIndex c : g.children(v))
        if (c != v && !seen_down[c]) {
          seen_down[c] = 1;
          stack.emplace_back(c, false);
        }
    };
    if (from_child) {
      if (!blocked) {
        go_up();
        go_down();
      }
    } else {
      if (!blocked) go_down();
      if (anc.contains(v)) go_up();
    }
  }
  return true;
}

}  // namespace

bool d_separated(const DirectedGraph& g, const SeparationQuery& q) {
  validate_query(q, g.size());
  if (g.size() <= kMaskLimit) {
    const MaskGraph mg = mask_graph(g);
    return d_separated_masks(mg.parents, mg.children, to_mask(q.x), to_mask(q.y), to_mask(q.z));
  }
  return d_separated_lists(g, q);
}

bool d_separated_exhaustive(const DirectedGraph& g, const SeparationQuery& q) {
  validate_query(q, g.size());
  const std::size_t n = g.size();
  std::vector<char> collider_open(n, 0);
  for (VertexIndex w = 0; w < n; ++w)
    collider_open[w] = q.z.contains(w) || kinship(g, w, Kinship::descendants).intersects(q.z);

  std::vector<char> on_path(n, 0);
  // Walks every simple path leaving `w`, whose last edge pointed into `w` iff `into`.
  // Returns true on reaching V2 along a path with no blocked interior vertex.
  std::function<bool(VertexIndex, bool)> extend = [&](VertexIndex w, bool into) -> bool {
    if (q.y.contains(w)) return true;
    auto step = [&](VertexIndex next, bool next_into, bool collider) {
      if (on_path[next]) return false;
      if (collider ? !collider_open[w] : q.z.contains(w)) return false;
      on_path[next] = 1;
      const bool found = extend(next, next_into);
      on_path[next] = 0;
      return found;
    };
    for (VertexIndex c : g.children(w))
      if (c != w && step(c, true, false)) return true;
    for (VertexIndex p : g.parents(w))
      if (p != w && step(p, false, into)) return true;
    return false;
  };

  for (VertexIndex x : q.x.to_vector()) {
    on_path[x] = 1;
    for (VertexIndex c : g.children(x)) {
      if (c == x || on_path[c]) continue;
      on_path[c] = 1;
      const bool found = extend(c, true);
      on_path[c] = 0;
      if (found) return false;
    }
    for (VertexIndex p : g.parents(x)) {
      if (p == x || on_path[p]) continue;
      on_path[p] = 1;
      const bool found = extend(p, false);
      on_path[p] = 0;
      if (found) return false;
    }
    on_path[x] = 0;
  }
  return true;
}

PSeparationOracle::PSeparationOracle(const DirectedGraph& g) : base_(g) {
  for_each_split_set(g, [&](const VertexSet& s) {
    TeleportationGraph tg = build_teleportation_graph(g, s);
    MaskGraph mg;
    if (tg.graph.size() <= kMaskLimit) mg = mask_graph(tg.graph);
    members_.push_back(
        {s, std::move(tg.graph), tg.post_selection_vertices(), std::move(mg.parents), std::move(mg.children)});
    return true;
  });
}

PSeparationWitness PSeparationOracle::query(const SeparationQuery& q) const {
  validate_query(q, base_.size());
  for (const Member& member : members_) {
    const SeparationQuery extended{q.x, q.y, q.z | member.post};
    bool separated = false;
    if (member.graph.size() <= kMaskLimit) {
      separated =
          d_separated_masks(member.parent_masks, member.child_masks, to_mask(q.x), to_mask(q.y), to_mask(extended.z));
    } else {
      separated = d_separated_lists(member.graph, extended);
    }
    if (separated) return {true, member.split};
  }
  return {false, std::nullopt};
}

PSeparationWitness p_separated(const DirectedGraph& g, const SeparationQuery& q) {
  validate_query(q, g.size());
  PSeparationWitness result;
  for_each_split_set(g, [&](const VertexSet& s) {
    const TeleportationGraph tg = build_teleportation_graph(g, s);
    if (d_separated(tg.graph, {q.x, q.y, q.z | tg.post_selection_vertices()})) {
      result = {true, s};
      return false;
    }
    return true;
  });
  return result;
}

bool ci_holds(const JointDistribution& d, const SeparationQuery& q) {
  if (q.x.empty() || q.y.empty()) throw QueryError("V1 and V2 must be non-empty");
  if (q.x.intersects(q.y) || q.x.intersects(q.z) || q.y.intersects(q.z))
    throw QueryError("V1, V2 and V3 must be pairwise disjoint");
  for (const VertexSet* s : {&q.x, &q.y, &q.z})
    for (VertexIndex v : s->to_vector())
      if (!d.position_of(v)) throw QueryError("query vertex is not a variable of the distribution");

  const JointDistribution m = marginal(d, q.x | q.y | q.z);
  const std::size_t k = m.variables().size();
  // Projection of an entry of m onto the variables in `keep`, as a mixed-radix index.
  auto projector = [&](const VertexSet& keep) {
    std::vector<std::size_t> radix(k, 0);
    std::size_t size = 1;
    for (std::size_t i = 0; i < k; ++i)
      if (keep.contains(m.variables()[i])) {
        radix[i] = m.alphabets()[i].size();
        size *= radix[i];
      }
    return std::pair{radix, size};
  };
  auto project = [&](const std::vector<std::size_t>& radix, const std::vector<std::size_t>& values) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (radix[i] != 0) index = index * radix[i] + values[i];
    return index;
  };
  const auto [rxz, nxz] = projector(q.x | q.z);
  const auto [ryz, nyz] = projector(q.y | q.z);
  const auto [rz, nz] = projector(q.z);
  std::vector<Rational> pxz(nxz), pyz(nyz), pz(nz);
  std::vector<std::vector<std::size_t>> keys(m.entry_count());
  for (std::size_t i = 0; i < m.entry_count(); ++i) {
    const std::vector<std::size_t> values = m.values_at(i);
    keys[i] = {project(rxz, values), project(ryz, values), project(rz, values)};
    pxz[keys[i][0]] += m.probabilities()[i];
    pyz[keys[i][1]] += m.probabilities()[i];
    pz[keys[i][2]] += m.probabilities()[i];
  }
  for (std::size_t i = 0; i < m.entry_count(); ++i) {
    const Rational& z = pz[keys[i][2]];
    if (z == 0) continue;
    if (m.probabilities()[i] * z != pxz[keys[i][0]] * pyz[keys[i][1]]) return false;
  }
  return true;
}

}  // namespace cfcm
