#ifndef CFCM_SOLVABILITY_HPP
#define CFCM_SOLVABILITY_HPP

#include <cfcm/inference.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace cfcm {

/// Number of x with x_v = f^v(x_pa, u_v) for every v. `u` assigns error symbol
/// indices; vertices with a singleton error alphabet may be omitted. Throws
/// ModelError when a non-singleton error variable is missing or a value is out of range.
std::uint64_t num_solutions(const FunctionalCausalModel& m, const Assignment& u);

/// sum_u N(u) prod_v p^v(u_v).
Rational average_num_solutions(const FunctionalCausalModel& m);

enum class SolvabilityClass { inconsistent, uniquely_solvable, averagely_uniquely_solvable, general_consistent };

std::string to_string(SolvabilityClass c);

struct SolutionCount {
  Assignment u;  // over the vertices with a non-singleton error alphabet
  std::uint64_t count = 0;
};

struct SolvabilityReport {
  std::vector<SolutionCount> counts;  // every joint error assignment, lexicographic
  Rational average;
  SolvabilityClass solvability = SolvabilityClass::general_consistent;
  bool markov = false;
};

/// Most specific class: inconsistent, then uniquely solvable, then averagely
/// uniquely solvable, then general_consistent. `markov` is average == 1.
SolvabilityReport classify(const FunctionalCausalModel& m);

/// P^(v)(x_v | x_pa), laid out as [parent_index * |X(v)| + x_v].
std::vector<Rational> mechanism_conditional(const FunctionalCausalModel& m, VertexIndex v);

/// Compares joint_distribution with prod_v P^(v)(x_v | x_pa) entry by entry.
/// Throws InconsistentModel for inconsistent models.
bool is_markov(const FunctionalCausalModel& m);

}  // namespace cfcm

#endif  // CFCM_SOLVABILITY_HPP
