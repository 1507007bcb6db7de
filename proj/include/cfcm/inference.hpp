#ifndef CFCM_INFERENCE_HPP
#define CFCM_INFERENCE_HPP

#include <cfcm/model.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfcm {

/// Exact probability table over an ordered list of variables. Entries are laid
/// out lexicographically (first variable most significant, symbols in alphabet
/// order) and sum to exactly one.
class JointDistribution {
 public:
  JointDistribution(std::vector<VertexIndex> vars, std::vector<std::string> names, std::vector<Alphabet> alphabets,
                    std::vector<Rational> probabilities);

  const std::vector<VertexIndex>& variables() const { return vars_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Alphabet>& alphabets() const { return alphabets_; }
  const std::vector<Rational>& probabilities() const { return probs_; }
  std::size_t entry_count() const { return probs_.size(); }

  std::optional<std::size_t> position_of(VertexIndex v) const;
  std::size_t index(std::span<const std::size_t> values) const;
  std::vector<std::size_t> values_at(std::size_t index) const;
  const Rational& at(std::span<const std::size_t> values) const { return probs_[index(values)]; }
  const Rational& at(std::initializer_list<std::size_t> values) const {
    return at(std::span<const std::size_t>(values.begin(), values.size()));
  }

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  std::vector<VertexIndex> vars_;
  std::vector<std::string> names_;
  std::vector<Alphabet> alphabets_;
  std::vector<std::size_t> radices_;
  std::vector<Rational> probs_;
};

/// sum_u prod_v p^v(u_v) [x_v = f^v(x_pa, u_v)] for every full assignment x,
/// indexed like a JointDistribution over all vertices.
std::vector<Rational> solution_weights(const FunctionalCausalModel& m);

/// The cyclic probability rule: solution_weights normalized by their total.
/// Throws InconsistentModel when the total is zero.
JointDistribution joint_distribution(const FunctionalCausalModel& m);

/// True iff the normalization of joint_distribution vanishes.
bool is_inconsistent(const FunctionalCausalModel& m);

/// Sums out every variable not in `keep`. Throws ModelError when `keep` is empty
/// or names a variable outside `d`.
JointDistribution marginal(const JointDistribution& d, const VertexSet& keep);

/// P(targets | given). Throws ZeroProbabilityCondition when P(given) = 0 and
/// ModelError when targets overlap the conditioning variables.
JointDistribution conditional(const JointDistribution& d, const VertexSet& targets, const Assignment& given);

}  // namespace cfcm

#endif  // CFCM_INFERENCE_HPP
