#ifndef CFCM_MODEL_HPP
#define CFCM_MODEL_HPP

#include <cfcm/graph.hpp>
#include <cfcm/rational.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfcm {

/// Ordered finite set of value tokens. Values are handled by index everywhere
/// except at the I/O boundary.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {}
  /// The canonical numeric alphabet {0, 1, ..., n-1}.
  static Alphabet range(std::size_t n);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<std::size_t> find(std::string_view token) const;

  /// True when every token is a canonical integer literal.
  bool is_numeric() const;
  /// Integer value of symbol i; only meaningful for numeric alphabets.
  long long numeric_value(std::size_t i) const;
  std::optional<std::size_t> find_numeric(long long value) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

/// Error variable U_v with its prior.
struct ErrorVariable {
  Alphabet alphabet;
  std::vector<Rational> distribution;  // parallel to alphabet

  /// Singleton alphabet with probability one; used for deterministic mechanisms.
  static ErrorVariable deterministic();
  static ErrorVariable uniform(const Alphabet& alphabet);

  bool is_deterministic() const { return alphabet.size() == 1; }
  friend bool operator==(const ErrorVariable&, const ErrorVariable&) = default;
};

/// Dense total table f^v : X(pa(v)) x U(v) -> X(v). Row index is the
/// mixed-radix index of the parent assignment (first parent most significant)
/// times |U(v)| plus the error symbol index.
struct Mechanism {
  static constexpr std::uint32_t kUnset = UINT32_MAX;

  std::vector<VertexIndex> parents;
  std::vector<std::size_t> parent_radices;
  std::size_t error_size = 1;
  std::vector<std::uint32_t> table;

  std::size_t parent_assignment_count() const;
  std::size_t row(std::span<const std::size_t> parent_values, std::size_t u) const;
  std::uint32_t at(std::span<const std::size_t> parent_values, std::size_t u) const {
    return table[row(parent_values, u)];
  }

  friend bool operator==(const Mechanism&, const Mechanism&) = default;
};

/// Finite functional causal model on a (possibly cyclic) directed graph.
struct FunctionalCausalModel {
  DirectedGraph graph;
  std::vector<Alphabet> alphabets;
  std::vector<ErrorVariable> errors;
  std::vector<Mechanism> mechanisms;

  std::size_t size() const { return graph.size(); }
  friend bool operator==(const FunctionalCausalModel&, const FunctionalCausalModel&) = default;
};

/// Values (symbol indices) for a set of vertices, listed in increasing vertex order.
struct Assignment {
  std::vector<VertexIndex> vertices;
  std::vector<std::size_t> values;

  std::optional<std::size_t> value_of(VertexIndex v) const;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Diagnostic {
  std::string message;
  std::string vertex;  // empty when not tied to a vertex
  int line = 0;        // 1-based source position; 0 when unknown
  int column = 0;
};

/// Empty result means the model is valid.
std::vector<Diagnostic> validate_model(const FunctionalCausalModel& m);

/// Tabulates f over every parent assignment and error symbol. `f` receives
/// parent values in canonical parent order and returns an output symbol index.
using MechanismFn = std::function<std::size_t(std::span<const std::size_t> parent_values, std::size_t u)>;
Mechanism tabulate_mechanism(const DirectedGraph& g, const std::vector<Alphabet>& alphabets, VertexIndex v,
                             std::size_t error_size, const MechanismFn& f);

/// Table lookup. Throws ModelError when `parents` does not cover exactly pa(v)
/// or names a symbol outside an alphabet.
std::size_t mechanism_eval(const FunctionalCausalModel& m, VertexIndex v, const Assignment& parents, std::size_t u);

/// All assignments over `subset`, lexicographic in vertex order then symbol order.
std::vector<Assignment> enumerate_joint_assignments(const FunctionalCausalModel& m, const VertexSet& subset);

/// P^(v)(x_v | x_pa) = sum_u p(u) [f(x_pa, u) = x_v], laid out as
/// [parent_index * |X(v)| + x_v].
std::vector<Rational> conditional_table(const FunctionalCausalModel& m, VertexIndex v);

/// Product of radices; throws ModelError if it would not fit in size_t.
std::size_t checked_product(std::span<const std::size_t> radices);

/// Mixed-radix counter, last digit fastest.
class Odometer {
 public:
  explicit Odometer(std::vector<std::size_t> radices);
  const std::vector<std::size_t>& digits() const { return digits_; }
  bool done() const { return done_; }
  void next();

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> digits_;
  bool done_ = false;
};

}  // namespace cfcm

#endif  // CFCM_MODEL_HPP
