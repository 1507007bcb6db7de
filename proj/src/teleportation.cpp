#include <cfcm/teleportation.hpp>

#include <cfcm/errors.hpp>

#include <algorithm>
#include <functional>
#include <set>

namespace cfcm {

ProtocolCheck validate_protocol(const Alphabet& target, const Alphabet& side, const std::vector<std::uint8_t>& accept,
                                const std::vector<Rational>& prior_side, const std::vector<Rational>& prior_target) {
  const std::size_t nx = target.size();
  const std::size_t nb = side.size();
  if (nx == 0 || nb == 0) return ProtocolViolation{0, 0, "empty alphabet"};
  if (accept.size() != nx * nb * nx) return ProtocolViolation{0, 0, "post-selection table is not total"};
  if (prior_side.size() != nb || prior_target.size() != nx)
    return ProtocolViolation{0, 0, "prior does not match its alphabet"};
  auto normalized = [](const std::vector<Rational>& p) {
    Rational total = 0;
    for (const Rational& x : p) {
      if (x < 0) return false;
      total += x;
    }
    return total == 1;
  };
  if (!normalized(prior_side) || !normalized(prior_target)) return ProtocolViolation{0, 0, "prior not normalized"};

  auto copy_matrix = [&](std::size_t a, std::size_t c) {
    Rational total = 0;
    for (std::size_t b = 0; b < nb; ++b)
      if (accept[(a * nb + b) * nx + c] != 0) total += prior_side[b];
    return Rational(total * prior_target[c]);
  };
  const Rational tau = copy_matrix(0, 0);
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t c = 0; c < nx; ++c) {
      const Rational entry = copy_matrix(a, c);
      if (a == c && tau == 0) return ProtocolViolation{a, c, "success probability must be positive"};
      if (a == c && entry != tau)
        return ProtocolViolation{a, c, "M(" + std::to_string(a) + "," + std::to_string(c) + ")=" + to_string(entry) +
                                           " differs from M(0,0)=" + to_string(tau)};
      if (a != c && entry != 0)
        return ProtocolViolation{a, c, "M(" + std::to_string(a) + "," + std::to_string(c) + ")=" + to_string(entry) +
                                           " must be 0"};
    }
  }
  return tau;
}

TeleportationProtocol make_protocol(Alphabet target, Alphabet side, std::vector<std::uint8_t> accept,
                                    std::vector<Rational> prior_side, std::vector<Rational> prior_target) {
  ProtocolCheck check = validate_protocol(target, side, accept, prior_side, prior_target);
  if (auto* bad = std::get_if<ProtocolViolation>(&check))
    throw ModelError("invalid teleportation protocol at (a,c)=(" + std::to_string(bad->a) + "," +
                     std::to_string(bad->c) + "): " + bad->reason);
  return {std::move(target), std::move(side),         std::move(accept),
          std::move(prior_side), std::move(prior_target), std::get<Rational>(check)};
}

TeleportationProtocol uniform_prior_protocol(const Alphabet& target) {
  const std::size_t n = target.size();
  std::vector<std::uint8_t> accept(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) accept[a * n + a] = 1;
  return make_protocol(target, Alphabet::range(1), std::move(accept), {Rational(1)},
                       std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n))));
}

TeleportationProtocol rejection_protocol(const Alphabet& target, const std::vector<Rational>& prior_target) {
  const std::size_t n = target.size();
  if (prior_target.size() != n) throw ModelError("prior does not match the target alphabet");
  for (const Rational& p : prior_target)
    if (p <= 0) throw ModelError("rejection protocol needs a strictly positive prior");
  const Rational tau = *std::min_element(prior_target.begin(), prior_target.end());

  // Acceptance probability needed for each c, and its distinct levels in decreasing order.
  std::vector<Rational> keep(n);
  for (std::size_t c = 0; c < n; ++c) keep[c] = tau / prior_target[c];
  std::vector<Rational> levels(keep);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const std::size_t m = levels.size();
  std::vector<Rational> prior_side(m);
  for (std::size_t k = 0; k < m; ++k) prior_side[k] = levels[k] - (k + 1 < m ? levels[k + 1] : Rational(0));
  // Side symbol k is accepted for c whenever k reaches c's level.
  std::vector<std::uint8_t> accept(n * m * n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t level = static_cast<std::size_t>(std::find(levels.begin(), levels.end(), keep[c]) - levels.begin());
    for (std::size_t k = level; k < m; ++k) accept[(c * m + k) * n + c] = 1;
  }
  return make_protocol(target, Alphabet::range(m), std::move(accept), std::move(prior_side), prior_target);
}

VertexSet TeleportationGraph::pre_selection_vertices() const {
  VertexSet s;
  for (const auto& [v, r] : pre) s.insert(r);
  return s;
}

VertexSet TeleportationGraph::post_selection_vertices() const {
  VertexSet s;
  for (const auto& [v, t] : post) s.insert(t);
  return s;
}

TeleportationGraph build_teleportation_graph(const DirectedGraph& g, const VertexSet& split) {
  if (!is_split_set(g, split)) throw GraphError("split set does not leave an acyclic graph");
  TeleportationGraph tg;
  tg.base = g;
  tg.split = split;
  tg.split_vertices = split.to_vector();

  std::vector<std::string> labels = g.labels();
  std::set<std::string> taken(labels.begin(), labels.end());
  auto fresh = [&](std::string name) {
    while (taken.count(name) != 0) name += "'";
    taken.insert(name);
    return name;
  };
  const std::size_t n = g.size();
  const std::size_t k = tg.split_vertices.size();
  for (std::size_t i = 0; i < k; ++i) {
    tg.pre[tg.split_vertices[i]] = n + i;
    labels.push_back(fresh("R_" + g.label(tg.split_vertices[i])));
  }
  for (std::size_t i = 0; i < k; ++i) {
    tg.post[tg.split_vertices[i]] = n + k + i;
    labels.push_back(fresh("T_" + g.label(tg.split_vertices[i])));
  }

  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (!split.contains(e.from)) edges.push_back(e);
  for (VertexIndex v : tg.split_vertices) {
    const VertexIndex r = tg.pre[v];
    const VertexIndex t = tg.post[v];
    edges.push_back({v, t});
    edges.push_back({r, t});
    for (VertexIndex child : g.children(v)) edges.push_back({r, child});
  }
  tg.graph = DirectedGraph::from_edges(std::move(labels), std::move(edges));
  return tg;
}

std::string to_dot(const TeleportationGraph& tg) {
  DotShapes shapes;
  for (const auto& [v, r] : tg.pre) shapes[r] = "invhouse";
  for (const auto& [v, t] : tg.post) shapes[t] = "diamond";
  return to_dot(tg.graph, shapes, "teleportation");
}

Rational TeleportationModel::tau_product() const {
  Rational total = 1;
  for (const auto& [v, protocol] : protocols) total *= protocol.tau;
  return total;
}

TeleportationModel build_teleportation_model(const FunctionalCausalModel& m, const TeleportationGraph& tg,
                                             const ProtocolChoice& protocols) {
  if (!(m.graph == tg.base)) throw ModelError("teleportation graph was built from a different graph");
  for (const auto& [v, protocol] : protocols)
    if (!tg.split.contains(v)) throw ModelError("protocol given for non-split vertex '" + m.graph.label(v) + "'");

  TeleportationModel tm;
  tm.tgraph = tg;
  for (VertexIndex v : tg.split_vertices) {
    auto it = protocols.find(v);
    TeleportationProtocol protocol = it == protocols.end() ? uniform_prior_protocol(m.alphabets[v]) : it->second;
    if (!(protocol.target == m.alphabets[v]))
      throw ModelError("protocol target alphabet does not match X(" + m.graph.label(v) + ")");
    ProtocolCheck check =
        validate_protocol(protocol.target, protocol.side, protocol.accept, protocol.prior_side, protocol.prior_target);
    if (std::holds_alternative<ProtocolViolation>(check) || std::get<Rational>(check) != protocol.tau)
      throw ModelError("invalid teleportation protocol for '" + m.graph.label(v) + "'");
    tm.protocols.emplace(v, std::move(protocol));
  }

  const DirectedGraph& sg = tg.graph;
  const std::size_t n = m.size();
  FunctionalCausalModel& out = tm.model;
  out.graph = sg;
  out.alphabets = m.alphabets;
  for (VertexIndex v : tg.split_vertices) out.alphabets.push_back(m.alphabets[v]);  // R_v
  for (std::size_t i = 0; i < tg.split_vertices.size(); ++i) out.alphabets.push_back(Alphabet::range(2));  // T_v

  // Base vertices: same error and function, with R_v standing in for split parents v.
  std::vector<VertexIndex> stand_in(n);
  for (VertexIndex v = 0; v < n; ++v) stand_in[v] = tg.split.contains(v) ? tg.pre.at(v) : v;
  for (VertexIndex w = 0; w < n; ++w) {
    const Mechanism& original = m.mechanisms[w];
    const std::vector<VertexIndex>& new_parents = sg.parents(w);
    std::vector<std::size_t> slot(original.parents.size());
    for (std::size_t i = 0; i < original.parents.size(); ++i)
      slot[i] = static_cast<std::size_t>(
          std::find(new_parents.begin(), new_parents.end(), stand_in[original.parents[i]]) - new_parents.begin());
    std::vector<std::size_t> old_values(original.parents.size());
    out.errors.push_back(m.errors[w]);
    out.mechanisms.push_back(
        tabulate_mechanism(sg, out.alphabets, w, original.error_size, [&](std::span<const std::size_t> pa, std::size_t u) {
          for (std::size_t i = 0; i < slot.size(); ++i) old_values[i] = pa[slot[i]];
          return original.at(old_values, u);
        }));
  }
  for (VertexIndex v : tg.split_vertices) {
    const TeleportationProtocol& protocol = tm.protocols.at(v);
    out.errors.push_back({protocol.target, protocol.prior_target});
    out.mechanisms.push_back(tabulate_mechanism(sg, out.alphabets, tg.pre.at(v), protocol.target.size(),
                                                [](auto, std::size_t u) { return u; }));
  }
  for (VertexIndex v : tg.split_vertices) {
    const TeleportationProtocol& protocol = tm.protocols.at(v);
    out.errors.push_back({protocol.side, protocol.prior_side});
    // Parents of T_v are (v, R_v) in that order since base indices precede R_v.
    out.mechanisms.push_back(tabulate_mechanism(
        sg, out.alphabets, tg.post.at(v), protocol.side.size(),
        [&](std::span<const std::size_t> pa, std::size_t b) { return protocol.accepts(pa[0], b, pa[1]) ? 1u : 0u; }));
  }
  return tm;
}

namespace {

// Unnormalized P_acyc(x, all T = 1) for every base assignment x, with the
// pre-selection values summed out. The acyclic rule factorizes over vertices
// once the error sums are pushed inside, so the enumeration walks vertices in
// topological order and skips zero-weight branches.
std::vector<Rational> postselected_weights(const TeleportationModel& tm) {
  const FunctionalCausalModel& m = tm.model;
  const std::size_t n = tm.tgraph.base.size();
  const std::vector<VertexIndex> order = topological_order(m.graph);
  const VertexSet post = tm.tgraph.post_selection_vertices();

  std::vector<std::vector<Rational>> cond;
  cond.reserve(m.size());
  for (VertexIndex v = 0; v < m.size(); ++v) cond.push_back(conditional_table(m, v));

  std::vector<std::size_t> base_radices;
  for (VertexIndex v = 0; v < n; ++v) base_radices.push_back(m.alphabets[v].size());
  std::vector<Rational> weights(checked_product(base_radices));

  std::vector<std::size_t> x(m.size(), 0);
  std::vector<Rational> partial(order.size() + 1);
  partial[0] = 1;

  std::function<void(std::size_t)> visit = [&](std::size_t depth) {
    if (depth == order.size()) {
      std::size_t idx = 0;
      for (VertexIndex v = 0; v < n; ++v) idx = idx * base_radices[v] + x[v];
      weights[idx] += partial[depth];
      return;
    }
    const VertexIndex v = order[depth];
    const Mechanism& mech = m.mechanisms[v];
    std::size_t row = 0;
    for (std::size_t i = 0; i < mech.parents.size(); ++i) row = row * mech.parent_radices[i] + x[mech.parents[i]];
    const std::size_t width = m.alphabets[v].size();
    const std::size_t first = post.contains(v) ? 1 : 0;
    const std::size_t last = post.contains(v) ? 2 : width;
    for (std::size_t value = first; value < last; ++value) {
      const Rational& p = cond[v][row * width + value];
      if (p == 0) continue;
      x[v] = value;
      partial[depth + 1] = partial[depth] * p;
      visit(depth + 1);
    }
  };
  visit(0);
  return weights;
}

}  // namespace

Rational success_probability(const TeleportationModel& tm) {
  Rational total = 0;
  for (const Rational& w : postselected_weights(tm)) total += w;
  return total;
}

JointDistribution postselected_distribution(const TeleportationModel& tm) {
  std::vector<Rational> weights = postselected_weights(tm);
  Rational total = 0;
  for (const Rational& w : weights) total += w;
  if (total == 0) throw InconsistentModel();
  for (Rational& w : weights) w /= total;
  const std::size_t n = tm.tgraph.base.size();
  std::vector<VertexIndex> vars(n);
  for (VertexIndex v = 0; v < n; ++v) vars[v] = v;
  std::vector<Alphabet> alphabets(tm.model.alphabets.begin(), tm.model.alphabets.begin() + static_cast<long>(n));
  return JointDistribution(std::move(vars), tm.tgraph.base.labels(), std::move(alphabets), std::move(weights));
}

}  // namespace cfcm
