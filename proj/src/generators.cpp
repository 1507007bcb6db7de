#include <cfcm/generators.hpp>

#include <cfcm/errors.hpp>

#include <random>

namespace cfcm {

namespace {

// Plain modulo reduction keeps the stream identical across standard libraries.
std::size_t draw(std::mt19937_64& rng, std::size_t bound) { return static_cast<std::size_t>(rng() % bound); }

std::vector<Rational> random_distribution(std::mt19937_64& rng, std::size_t k) {
  const std::size_t q = 1 + draw(rng, 64);
  std::vector<unsigned long> weights(k, 0);
  for (std::size_t unit = 0; unit < q; ++unit) ++weights[draw(rng, k)];
  std::vector<Rational> out;
  out.reserve(k);
  for (unsigned long w : weights) {
    Rational p(w, static_cast<unsigned long>(q));
    p.canonicalize();
    out.push_back(p);
  }
  return out;
}

}  // namespace

FunctionalCausalModel xor_witness_model(const DirectedGraph& g) {
  FunctionalCausalModel m;
  m.graph = g;
  m.alphabets.assign(g.size(), Alphabet::range(2));
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (g.is_exogenous(v)) {
      m.errors.push_back(ErrorVariable::uniform(Alphabet::range(2)));
      m.mechanisms.push_back(tabulate_mechanism(g, m.alphabets, v, 2, [](auto, std::size_t u) { return u; }));
    } else {
      m.errors.push_back(ErrorVariable::deterministic());
      m.mechanisms.push_back(tabulate_mechanism(g, m.alphabets, v, 1, [](std::span<const std::size_t> pa, std::size_t) {
        std::size_t bit = 0;
        for (std::size_t x : pa) bit ^= x;
        return bit;
      }));
    }
  }
  return m;
}

FunctionalCausalModel random_model(const DirectedGraph& g, std::size_t max_alphabet, std::size_t max_error,
                                   std::uint64_t seed) {
  if (max_alphabet < 1 || max_error < 1) throw ModelError("random_model needs max_alphabet >= 1 and max_error >= 1");
  std::mt19937_64 rng(seed);
  FunctionalCausalModel m;
  m.graph = g;
  for (VertexIndex v = 0; v < g.size(); ++v) m.alphabets.push_back(Alphabet::range(1 + draw(rng, max_alphabet)));
  for (VertexIndex v = 0; v < g.size(); ++v) {
    const std::size_t k = 1 + draw(rng, max_error);
    Alphabet errors = Alphabet::range(k);
    m.errors.push_back({errors, random_distribution(rng, k)});
    const std::size_t width = m.alphabets[v].size();
    m.mechanisms.push_back(
        tabulate_mechanism(g, m.alphabets, v, k, [&](auto, std::size_t) { return draw(rng, width); }));
  }
  return m;
}

DirectedGraph random_graph(std::size_t n, unsigned edge_num, unsigned edge_den, bool acyclic, bool self_loops,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i + 1));
  std::vector<Edge> edges;
  for (VertexIndex i = 0; i < n; ++i) {
    for (VertexIndex j = 0; j < n; ++j) {
      if (acyclic && j <= i) continue;
      if (i == j && !self_loops) continue;
      if (draw(rng, edge_den) < edge_num) edges.push_back({i, j});
    }
  }
  return DirectedGraph::from_edges(std::move(labels), std::move(edges));
}

}  // namespace cfcm
