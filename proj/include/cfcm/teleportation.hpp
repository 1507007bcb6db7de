#ifndef CFCM_TELEPORTATION_HPP
#define CFCM_TELEPORTATION_HPP

#include <cfcm/dot.hpp>
#include <cfcm/inference.hpp>
#include <cfcm/model.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace cfcm {

/// Classical post-selected teleportation protocol (f_T, p_B, p_C) with its
/// success probability tau. Instances returned by this module always satisfy
/// the copy property sum_b [f_T(a,b,c)=1] p_B(b) p_C(c) = tau * delta(a,c).
struct TeleportationProtocol {
  Alphabet target;                    // X(A) = X(C)
  Alphabet side;                      // X(B)
  std::vector<std::uint8_t> accept;   // f_T, indexed [(a * |B| + b) * |C| + c]
  std::vector<Rational> prior_side;   // p_B
  std::vector<Rational> prior_target; // p_C
  Rational tau;

  bool accepts(std::size_t a, std::size_t b, std::size_t c) const {
    return accept[(a * side.size() + b) * target.size() + c] != 0;
  }
};

struct ProtocolViolation {
  std::size_t a = 0;
  std::size_t c = 0;
  std::string reason;
};

/// Either the success probability tau or the first violating (a, c) pair in
/// lexicographic order.
using ProtocolCheck = std::variant<Rational, ProtocolViolation>;

ProtocolCheck validate_protocol(const Alphabet& target, const Alphabet& side, const std::vector<std::uint8_t>& accept,
                                const std::vector<Rational>& prior_side, const std::vector<Rational>& prior_target);

/// Validates and packages a protocol; throws ModelError when invalid.
TeleportationProtocol make_protocol(Alphabet target, Alphabet side, std::vector<std::uint8_t> accept,
                                    std::vector<Rational> prior_side, std::vector<Rational> prior_target);

/// f_T = delta(a, c), p_C uniform, singleton side alphabet, tau = 1/|X|.
TeleportationProtocol uniform_prior_protocol(const Alphabet& target);

/// Protocol with an arbitrary strictly positive prior p_C: the side variable B
/// thins acceptance of each c to min(p_C)/p_C(c), giving tau = min(p_C).
TeleportationProtocol rejection_protocol(const Alphabet& target, const std::vector<Rational>& prior_target);

/// A member of the acyclic teleportation family of `base`. Base vertices keep
/// their indices; pre-selection vertices R_v follow, then post-selection
/// vertices T_v, both in split-vertex order.
struct TeleportationGraph {
  DirectedGraph base;
  VertexSet split;
  DirectedGraph graph;
  std::vector<VertexIndex> split_vertices;
  std::map<VertexIndex, VertexIndex> pre;   // v -> R_v
  std::map<VertexIndex, VertexIndex> post;  // v -> T_v

  VertexSet pre_selection_vertices() const;
  VertexSet post_selection_vertices() const;
};

/// Throws GraphError when `split` is not a valid split set of `g`.
TeleportationGraph build_teleportation_graph(const DirectedGraph& g, const VertexSet& split);

/// DOT with pre-selection vertices as inverted houses and post-selection
/// vertices as diamonds.
std::string to_dot(const TeleportationGraph& tg);

/// Protocol per split vertex; split vertices without an entry get the uniform-prior protocol.
using ProtocolChoice = std::map<VertexIndex, TeleportationProtocol>;

struct TeleportationModel {
  TeleportationGraph tgraph;
  std::map<VertexIndex, TeleportationProtocol> protocols;  // resolved, one per split vertex
  FunctionalCausalModel model;                              // acyclic, over tgraph.graph

  /// Product of tau over the split vertices.
  Rational tau_product() const;
};

/// Throws ModelError on a protocol whose target alphabet differs from X(v).
TeleportationModel build_teleportation_model(const FunctionalCausalModel& m, const TeleportationGraph& tg,
                                             const ProtocolChoice& protocols = {});

/// Probability that every post-selection vertex outputs 1 under the acyclic rule.
Rational success_probability(const TeleportationModel& tm);

/// P_acyc(x | all T = 1) over the base vertices, pre-selection vertices summed
/// out. Throws InconsistentModel when the success probability is zero.
JointDistribution postselected_distribution(const TeleportationModel& tm);

}  // namespace cfcm

#endif  // CFCM_TELEPORTATION_HPP
