#include <cfcm/inference.hpp>

#include <cfcm/errors.hpp>
#include <cfcm/parallel.hpp>

#include <algorithm>

namespace cfcm {

JointDistribution::JointDistribution(std::vector<VertexIndex> vars, std::vector<std::string> names,
                                     std::vector<Alphabet> alphabets, std::vector<Rational> probabilities)
    : vars_(std::move(vars)), names_(std::move(names)), alphabets_(std::move(alphabets)), probs_(std::move(probabilities)) {
  if (names_.size() != vars_.size() || alphabets_.size() != vars_.size())
    throw ModelError("distribution header sizes disagree");
  for (const Alphabet& a : alphabets_) radices_.push_back(a.size());
  if (checked_product(radices_) != probs_.size()) throw ModelError("distribution table size does not match its header");
}

std::optional<std::size_t> JointDistribution::position_of(VertexIndex v) const {
  auto it = std::find(vars_.begin(), vars_.end(), v);
  if (it == vars_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vars_.begin());
}

std::size_t JointDistribution::index(std::span<const std::size_t> values) const {
  if (values.size() != radices_.size()) throw ModelError("assignment does not cover the distribution's variables");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    if (values[i] >= radices_[i]) throw ModelError("value outside the alphabet of '" + names_[i] + "'");
    idx = idx * radices_[i] + values[i];
  }
  return idx;
}

std::vector<std::size_t> JointDistribution::values_at(std::size_t index) const {
  std::vector<std::size_t> values(radices_.size());
  for (std::size_t i = radices_.size(); i-- > 0;) {
    values[i] = index % radices_[i];
    index /= radices_[i];
  }
  return values;
}

namespace {

struct ErrorTerm {
  std::vector<std::size_t> u;
  Rational weight;
};

// Every joint error assignment with nonzero prior weight.
std::vector<ErrorTerm> error_terms(const FunctionalCausalModel& m) {
  std::vector<std::size_t> radices;
  for (const ErrorVariable& e : m.errors) radices.push_back(e.alphabet.size());
  std::vector<ErrorTerm> terms;
  for (Odometer it(radices); !it.done(); it.next()) {
    Rational w = 1;
    for (VertexIndex v = 0; v < m.size() && w != 0; ++v) w *= m.errors[v].distribution[it.digits()[v]];
    if (w != 0) terms.push_back({it.digits(), w});
  }
  return terms;
}

std::vector<std::size_t> value_radices(const FunctionalCausalModel& m) {
  std::vector<std::size_t> radices;
  for (const Alphabet& a : m.alphabets) radices.push_back(a.size());
  return radices;
}

void decode(std::size_t index, std::span<const std::size_t> radices, std::vector<std::size_t>& out) {
  for (std::size_t i = radices.size(); i-- > 0;) {
    out[i] = index % radices[i];
    index /= radices[i];
  }
}

}  // namespace

std::vector<Rational> solution_weights(const FunctionalCausalModel& m) {
  const std::vector<std::size_t> radices = value_radices(m);
  const std::size_t count = checked_product(radices);
  const std::vector<ErrorTerm> terms = error_terms(m);
  std::vector<Rational> weights(count);

  // x outer, u inner, exactly as the defining sum is written.
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> x(radices.size());
    std::vector<std::size_t> pa;
    for (std::size_t idx = begin; idx < end; ++idx) {
      decode(idx, radices, x);
      Rational total = 0;
      for (const ErrorTerm& term : terms) {
        bool solves = true;
        for (VertexIndex v = 0; v < m.size() && solves; ++v) {
          const Mechanism& mech = m.mechanisms[v];
          pa.clear();
          for (VertexIndex p : mech.parents) pa.push_back(x[p]);
          solves = mech.at(pa, term.u[v]) == x[v];
        }
        if (solves) total += term.weight;
      }
      weights[idx] = std::move(total);
    }
  });
  return weights;
}

JointDistribution joint_distribution(const FunctionalCausalModel& m) {
  std::vector<Rational> weights = solution_weights(m);
  Rational norm = 0;
  for (const Rational& w : weights) norm += w;
  if (norm == 0) throw InconsistentModel();
  for (Rational& w : weights) w /= norm;
  std::vector<VertexIndex> vars(m.size());
  for (VertexIndex v = 0; v < m.size(); ++v) vars[v] = v;
  return JointDistribution(std::move(vars), m.graph.labels(), m.alphabets, std::move(weights));
}

bool is_inconsistent(const FunctionalCausalModel& m) {
  for (const Rational& w : solution_weights(m))
    if (w != 0) return false;
  return true;
}

JointDistribution marginal(const JointDistribution& d, const VertexSet& keep) {
  if (keep.empty()) throw ModelError("marginal needs at least one variable to keep");
  std::vector<std::size_t> kept_positions;
  for (VertexIndex v : keep.to_vector()) {
    auto pos = d.position_of(v);
    if (!pos) throw ModelError("variable " + std::to_string(v) + " is not part of the distribution");
    kept_positions.push_back(*pos);
  }
  std::sort(kept_positions.begin(), kept_positions.end());

  std::vector<VertexIndex> vars;
  std::vector<std::string> names;
  std::vector<Alphabet> alphabets;
  std::vector<std::size_t> radices;
  for (std::size_t pos : kept_positions) {
    vars.push_back(d.variables()[pos]);
    names.push_back(d.names()[pos]);
    alphabets.push_back(d.alphabets()[pos]);
    radices.push_back(d.alphabets()[pos].size());
  }
  std::vector<Rational> probs(checked_product(radices));
  for (std::size_t idx = 0; idx < d.entry_count(); ++idx) {
    const Rational& p = d.probabilities()[idx];
    if (p == 0) continue;
    const std::vector<std::size_t> values = d.values_at(idx);
    std::size_t out = 0;
    for (std::size_t i = 0; i < kept_positions.size(); ++i) out = out * radices[i] + values[kept_positions[i]];
    probs[out] += p;
  }
  return JointDistribution(std::move(vars), std::move(names), std::move(alphabets), std::move(probs));
}

JointDistribution conditional(const JointDistribution& d, const VertexSet& targets, const Assignment& given) {
  VertexSet given_vars = VertexSet::from(given.vertices);
  if (targets.intersects(given_vars)) throw ModelError("conditional targets overlap the conditioning variables");
  if (given.vertices.size() != given.values.size()) throw ModelError("malformed conditioning assignment");
  JointDistribution joint = marginal(d, targets | given_vars);

  std::vector<std::size_t> given_positions;  // position within `joint` for each given variable
  for (std::size_t i = 0; i < given.vertices.size(); ++i) {
    auto pos = joint.position_of(given.vertices[i]);
    if (given.values[i] >= joint.alphabets()[*pos].size())
      throw ModelError("conditioning value outside the alphabet of '" + joint.names()[*pos] + "'");
    given_positions.push_back(*pos);
  }
  std::vector<std::size_t> target_positions;
  std::vector<VertexIndex> vars;
  std::vector<std::string> names;
  std::vector<Alphabet> alphabets;
  std::vector<std::size_t> radices;
  for (std::size_t pos = 0; pos < joint.variables().size(); ++pos) {
    if (given_vars.contains(joint.variables()[pos])) continue;
    target_positions.push_back(pos);
    vars.push_back(joint.variables()[pos]);
    names.push_back(joint.names()[pos]);
    alphabets.push_back(joint.alphabets()[pos]);
    radices.push_back(joint.alphabets()[pos].size());
  }

  std::vector<Rational> probs(checked_product(radices));
  Rational evidence = 0;
  for (std::size_t idx = 0; idx < joint.entry_count(); ++idx) {
    const Rational& p = joint.probabilities()[idx];
    if (p == 0) continue;
    const std::vector<std::size_t> values = joint.values_at(idx);
    bool matches = true;
    for (std::size_t i = 0; i < given_positions.size() && matches; ++i)
      matches = values[given_positions[i]] == given.values[i];
    if (!matches) continue;
    std::size_t out = 0;
    for (std::size_t i = 0; i < target_positions.size(); ++i) out = out * radices[i] + values[target_positions[i]];
    probs[out] += p;
    evidence += p;
  }
  if (evidence == 0) throw ZeroProbabilityCondition();
  for (Rational& p : probs) p /= evidence;
  return JointDistribution(std::move(vars), std::move(names), std::move(alphabets), std::move(probs));
}

}  // namespace cfcm
