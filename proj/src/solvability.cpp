#include <cfcm/solvability.hpp>

#include <cfcm/errors.hpp>
#include <cfcm/parallel.hpp>

namespace cfcm {

namespace {

std::vector<std::size_t> value_radices(const FunctionalCausalModel& m) {
  std::vector<std::size_t> radices;
  for (const Alphabet& a : m.alphabets) radices.push_back(a.size());
  return radices;
}

std::vector<VertexIndex> random_error_vertices(const FunctionalCausalModel& m) {
  std::vector<VertexIndex> out;
  for (VertexIndex v = 0; v < m.size(); ++v)
    if (!m.errors[v].is_deterministic()) out.push_back(v);
  return out;
}

// N(u) for a full error assignment (one symbol index per vertex).
std::uint64_t count_solutions(const FunctionalCausalModel& m, std::span<const std::size_t> u) {
  std::uint64_t count = 0;
  std::vector<std::size_t> pa;
  for (Odometer x(value_radices(m)); !x.done(); x.next()) {
    bool solves = true;
    for (VertexIndex v = 0; v < m.size() && solves; ++v) {
      const Mechanism& mech = m.mechanisms[v];
      pa.clear();
      for (VertexIndex p : mech.parents) pa.push_back(x.digits()[p]);
      solves = mech.at(pa, u[v]) == x.digits()[v];
    }
    if (solves) ++count;
  }
  return count;
}

}  // namespace

std::uint64_t num_solutions(const FunctionalCausalModel& m, const Assignment& u) {
  if (u.vertices.size() != u.values.size()) throw ModelError("malformed error assignment");
  std::vector<std::size_t> full(m.size(), 0);
  std::vector<char> given(m.size(), 0);
  for (std::size_t i = 0; i < u.vertices.size(); ++i) {
    const VertexIndex v = u.vertices[i];
    if (v >= m.size()) throw ModelError("error assignment names an unknown vertex");
    if (given[v]) throw ModelError("error assignment lists U_" + m.graph.label(v) + " twice");
    if (u.values[i] >= m.errors[v].alphabet.size())
      throw ModelError("error value outside the error alphabet of '" + m.graph.label(v) + "'");
    full[v] = u.values[i];
    given[v] = 1;
  }
  for (VertexIndex v = 0; v < m.size(); ++v)
    if (!given[v] && !m.errors[v].is_deterministic())
      throw ModelError("error assignment misses U_" + m.graph.label(v));
  return count_solutions(m, full);
}

Rational average_num_solutions(const FunctionalCausalModel& m) {
  std::vector<std::size_t> radices;
  for (const ErrorVariable& e : m.errors) radices.push_back(e.alphabet.size());
  Rational total = 0;
  for (Odometer u(radices); !u.done(); u.next()) {
    Rational weight = 1;
    for (VertexIndex v = 0; v < m.size() && weight != 0; ++v) weight *= m.errors[v].distribution[u.digits()[v]];
    if (weight != 0) total += weight * count_solutions(m, u.digits());
  }
  return total;
}

std::string to_string(SolvabilityClass c) {
  switch (c) {
    case SolvabilityClass::inconsistent:
      return "inconsistent";
    case SolvabilityClass::uniquely_solvable:
      return "uniquely_solvable";
    case SolvabilityClass::averagely_uniquely_solvable:
      return "averagely_uniquely_solvable";
    case SolvabilityClass::general_consistent:
      return "general_consistent";
  }
  return "unknown";
}

SolvabilityReport classify(const FunctionalCausalModel& m) {
  const std::vector<VertexIndex> random = random_error_vertices(m);
  std::vector<std::size_t> radices;
  for (VertexIndex v : random) radices.push_back(m.errors[v].alphabet.size());
  const std::size_t total = checked_product(radices);

  SolvabilityReport report;
  report.counts.resize(total);
  std::vector<Rational> weighted(total);
  parallel_for(total, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> digits(radices.size());
    std::vector<std::size_t> full(m.size(), 0);
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = radices.size(); i-- > 0;) {
        digits[i] = rest % radices[i];
        rest /= radices[i];
      }
      Rational weight = 1;
      for (std::size_t i = 0; i < random.size(); ++i) {
        full[random[i]] = digits[i];
        weight *= m.errors[random[i]].distribution[digits[i]];
      }
      const std::uint64_t n = count_solutions(m, full);
      report.counts[idx] = {{random, digits}, n};
      weighted[idx] = weight * n;
    }
  });

  report.average = 0;
  bool all_unique = true;
  for (std::size_t i = 0; i < total; ++i) {
    report.average += weighted[i];
    all_unique = all_unique && report.counts[i].count == 1;
  }
  if (report.average == 0)
    report.solvability = SolvabilityClass::inconsistent;
  else if (all_unique)
    report.solvability = SolvabilityClass::uniquely_solvable;
  else if (report.average == 1)
    report.solvability = SolvabilityClass::averagely_uniquely_solvable;
  else
    report.solvability = SolvabilityClass::general_consistent;
  report.markov = report.average == 1;
  return report;
}

std::vector<Rational> mechanism_conditional(const FunctionalCausalModel& m, VertexIndex v) {
  return conditional_table(m, v);
}

bool is_markov(const FunctionalCausalModel& m) {
  const JointDistribution joint = joint_distribution(m);
  std::vector<std::vector<Rational>> tables;
  for (VertexIndex v = 0; v < m.size(); ++v) tables.push_back(mechanism_conditional(m, v));
  for (std::size_t idx = 0; idx < joint.entry_count(); ++idx) {
    const std::vector<std::size_t> x = joint.values_at(idx);
    Rational product = 1;
    for (VertexIndex v = 0; v < m.size() && product != 0; ++v) {
      const Mechanism& mech = m.mechanisms[v];
      std::size_t row = 0;
      for (std::size_t i = 0; i < mech.parents.size(); ++i) row = row * mech.parent_radices[i] + x[mech.parents[i]];
      product *= tables[v][row * m.alphabets[v].size() + x[v]];
    }
    if (product != joint.probabilities()[idx]) return false;
  }
  return true;
}

}  // namespace cfcm
