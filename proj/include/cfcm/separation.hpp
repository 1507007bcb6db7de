#ifndef CFCM_SEPARATION_HPP
#define CFCM_SEPARATION_HPP

#include <cfcm/inference.hpp>
#include <cfcm/teleportation.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace cfcm {

/// (V1 ⊥ V2 | V3). V1 and V2 non-empty, the three sets pairwise disjoint.
struct SeparationQuery {
  VertexSet x;
  VertexSet y;
  VertexSet z;
};

/// Throws QueryError when the sets are empty/overlapping or reach past `vertex_count`.
void validate_query(const SeparationQuery& q, std::size_t vertex_count);

/// Reachability formulation: a collider passes when it lies in the ancestral
/// closure of V3, every other vertex when it is outside V3.
bool d_separated(const DirectedGraph& g, const SeparationQuery& q);

/// Literal definition: enumerates every simple path between V1 and V2 and
/// checks that each one is blocked. Exponential; for cross-checking.
bool d_separated_exhaustive(const DirectedGraph& g, const SeparationQuery& q);

struct PSeparationWitness {
  bool separated = false;
  std::optional<VertexSet> split;  // first split set (canonical order) that separates
};

/// Teleportation graphs of every split set of one graph, built once so that many
/// queries against the same graph stay cheap.
class PSeparationOracle {
 public:
  explicit PSeparationOracle(const DirectedGraph& g);

  const DirectedGraph& graph() const { return base_; }
  std::size_t family_size() const { return members_.size(); }
  PSeparationWitness query(const SeparationQuery& q) const;

 private:
  struct Member {
    VertexSet split;
    DirectedGraph graph;
    VertexSet post;
    std::vector<std::uint64_t> parent_masks;  // filled when the graph has at most 64 vertices
    std::vector<std::uint64_t> child_masks;
  };
  DirectedGraph base_;
  std::vector<Member> members_;
};

PSeparationWitness p_separated(const DirectedGraph& g, const SeparationQuery& q);

/// Exact check of P(x1,x2|x3) = P(x1|x3) P(x2|x3) over every x3 with P(x3) > 0.
/// Query sets are vertex indices that must all be variables of `d`.
bool ci_holds(const JointDistribution& d, const SeparationQuery& q);

}  // namespace cfcm

#endif  // CFCM_SEPARATION_HPP
