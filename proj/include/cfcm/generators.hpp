#ifndef CFCM_GENERATORS_HPP
#define CFCM_GENERATORS_HPP

#include <cfcm/model.hpp>

#include <cstdint>

namespace cfcm {

/// Binary model where exogenous vertices are uniform bits (x = u) and every
/// endogenous vertex is the XOR of its parents, deterministically.
FunctionalCausalModel xor_witness_model(const DirectedGraph& g);

/// Seeded random model: alphabet sizes in [1, max_alphabet], error alphabet
/// sizes in [1, max_error], error priors with denominators <= 64 and uniformly
/// drawn mechanism tables. Identical inputs give identical models.
FunctionalCausalModel random_model(const DirectedGraph& g, std::size_t max_alphabet, std::size_t max_error,
                                   std::uint64_t seed);

/// Random graph on n vertices labelled v1..vn. Each ordered pair (i, j), i != j,
/// becomes an edge with probability edge_num/edge_den; when `acyclic` is set only
/// pairs with i < j are considered. Self-loops are added with the same
/// probability when `self_loops` is set (ignored for acyclic graphs).
DirectedGraph random_graph(std::size_t n, unsigned edge_num, unsigned edge_den, bool acyclic, bool self_loops,
                           std::uint64_t seed);

}  // namespace cfcm

#endif  // CFCM_GENERATORS_HPP
