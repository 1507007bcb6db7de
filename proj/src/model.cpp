#include <cfcm/model.hpp>

#include <cfcm/errors.hpp>

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>

namespace cfcm {

namespace {

std::optional<long long> canonical_integer(std::string_view s) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  if (std::to_string(value) != s) return std::nullopt;
  return value;
}

std::string describe(const FunctionalCausalModel& m, VertexIndex v, std::span<const std::size_t> pa,
                     std::size_t u) {
  const Mechanism& mech = m.mechanisms[v];
  std::string out = "(";
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (i > 0) out += ", ";
    out += m.graph.label(mech.parents[i]) + "=" + m.alphabets[mech.parents[i]].symbol(pa[i]);
  }
  out += ")";
  if (mech.error_size > 1) out += " u=" + m.errors[v].alphabet.symbol(u);
  return out;
}

}  // namespace

Alphabet Alphabet::range(std::size_t n) {
  std::vector<std::string> symbols;
  symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) symbols.push_back(std::to_string(i));
  return Alphabet(std::move(symbols));
}

std::optional<std::size_t> Alphabet::find(std::string_view token) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == token) return i;
  return std::nullopt;
}

bool Alphabet::is_numeric() const {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [](const std::string& s) { return canonical_integer(s).has_value(); });
}

long long Alphabet::numeric_value(std::size_t i) const {
  auto v = canonical_integer(symbol(i));
  if (!v) throw ModelError("symbol '" + symbol(i) + "' is not numeric");
  return *v;
}

std::optional<std::size_t> Alphabet::find_numeric(long long value) const { return find(std::to_string(value)); }

ErrorVariable ErrorVariable::deterministic() { return {Alphabet::range(1), {Rational(1)}}; }

ErrorVariable ErrorVariable::uniform(const Alphabet& alphabet) {
  const Rational p(1, static_cast<unsigned long>(alphabet.size()));
  return {alphabet, std::vector<Rational>(alphabet.size(), p)};
}

std::size_t checked_product(std::span<const std::size_t> radices) {
  std::size_t total = 1;
  for (std::size_t r : radices) {
    if (r != 0 && total > std::numeric_limits<std::size_t>::max() / r)
      throw ModelError("assignment space too large to enumerate");
    total *= r;
  }
  return total;
}

std::size_t Mechanism::parent_assignment_count() const { return checked_product(parent_radices); }

std::size_t Mechanism::row(std::span<const std::size_t> parent_values, std::size_t u) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < parent_radices.size(); ++i) index = index * parent_radices[i] + parent_values[i];
  return index * error_size + u;
}

std::optional<std::size_t> Assignment::value_of(VertexIndex v) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == v) return values[i];
  return std::nullopt;
}

Odometer::Odometer(std::vector<std::size_t> radices) : radices_(std::move(radices)), digits_(radices_.size(), 0) {
  done_ = std::any_of(radices_.begin(), radices_.end(), [](std::size_t r) { return r == 0; });
}

void Odometer::next() {
  for (std::size_t i = radices_.size(); i-- > 0;) {
    if (++digits_[i] < radices_[i]) return;
    digits_[i] = 0;
  }
  done_ = true;
}

std::vector<Diagnostic> validate_model(const FunctionalCausalModel& m) {
  std::vector<Diagnostic> out;
  const DirectedGraph& g = m.graph;
  const std::size_t n = g.size();
  auto report = [&](VertexIndex v, std::string message) {
    out.push_back({std::move(message), v < n ? g.label(v) : std::string{}, 0, 0});
  };
  if (m.alphabets.size() != n || m.errors.size() != n || m.mechanisms.size() != n) {
    report(n, "model must specify an alphabet, error variable and mechanism for every vertex");
    return out;
  }
  auto check_alphabet = [&](VertexIndex v, const Alphabet& a, const char* what) {
    if (a.size() == 0) {
      report(v, std::string(what) + " alphabet is empty");
      return false;
    }
    std::set<std::string> seen(a.symbols().begin(), a.symbols().end());
    if (seen.size() != a.size()) {
      report(v, std::string(what) + " alphabet has duplicate symbols");
      return false;
    }
    return true;
  };

  for (VertexIndex v = 0; v < n; ++v) {
    const bool alphabet_ok = check_alphabet(v, m.alphabets[v], "value");
    const ErrorVariable& err = m.errors[v];
    const bool error_ok = check_alphabet(v, err.alphabet, "error");
    if (error_ok) {
      if (err.distribution.size() != err.alphabet.size()) {
        report(v, "error distribution does not match its alphabet");
      } else {
        Rational total = 0;
        bool negative = false;
        for (const Rational& p : err.distribution) {
          negative = negative || p < 0;
          total += p;
        }
        if (negative) report(v, "error distribution has a negative probability");
        if (total != 1) report(v, "distribution not normalized: sums to " + to_string(total));
      }
    }

    const Mechanism& mech = m.mechanisms[v];
    if (mech.parents != g.parents(v)) {
      report(v, "mechanism parents do not match the graph parents");
      continue;
    }
    bool radices_ok = mech.parent_radices.size() == mech.parents.size();
    for (std::size_t i = 0; radices_ok && i < mech.parents.size(); ++i)
      radices_ok = mech.parent_radices[i] == m.alphabets[mech.parents[i]].size();
    if (!radices_ok || mech.error_size != err.alphabet.size()) {
      report(v, "mechanism shape does not match parent/error alphabets");
      continue;
    }
    if (!alphabet_ok) continue;
    const std::size_t rows = mech.parent_assignment_count() * mech.error_size;
    if (mech.table.size() != rows) {
      report(v, "mechanism not total: expected " + std::to_string(rows) + " entries, found " +
                    std::to_string(mech.table.size()));
      continue;
    }
    for (Odometer pa(mech.parent_radices); !pa.done(); pa.next()) {
      for (std::size_t u = 0; u < mech.error_size; ++u) {
        const std::uint32_t out_symbol = mech.at(pa.digits(), u);
        if (out_symbol == Mechanism::kUnset) {
          report(v, "mechanism not total: no entry for " + describe(m, v, pa.digits(), u));
        } else if (out_symbol >= m.alphabets[v].size()) {
          report(v, "mechanism output outside alphabet at " + describe(m, v, pa.digits(), u));
        }
      }
    }
  }
  return out;
}

Mechanism tabulate_mechanism(const DirectedGraph& g, const std::vector<Alphabet>& alphabets, VertexIndex v,
                             std::size_t error_size, const MechanismFn& f) {
  Mechanism mech;
  mech.parents = g.parents(v);
  for (VertexIndex p : mech.parents) mech.parent_radices.push_back(alphabets.at(p).size());
  mech.error_size = error_size;
  mech.table.assign(mech.parent_assignment_count() * error_size, Mechanism::kUnset);
  for (Odometer pa(mech.parent_radices); !pa.done(); pa.next())
    for (std::size_t u = 0; u < error_size; ++u)
      mech.table[mech.row(pa.digits(), u)] = static_cast<std::uint32_t>(f(pa.digits(), u));
  return mech;
}

std::size_t mechanism_eval(const FunctionalCausalModel& m, VertexIndex v, const Assignment& parents, std::size_t u) {
  if (v >= m.size()) throw ModelError("unknown vertex index " + std::to_string(v));
  const Mechanism& mech = m.mechanisms[v];
  if (parents.vertices.size() != mech.parents.size())
    throw ModelError("parent assignment for '" + m.graph.label(v) + "' must cover exactly its parents");
  std::vector<std::size_t> values(mech.parents.size());
  for (std::size_t i = 0; i < mech.parents.size(); ++i) {
    auto value = parents.value_of(mech.parents[i]);
    if (!value) throw ModelError("parent '" + m.graph.label(mech.parents[i]) + "' missing from assignment");
    if (*value >= mech.parent_radices[i])
      throw ModelError("value outside the alphabet of '" + m.graph.label(mech.parents[i]) + "'");
    values[i] = *value;
  }
  if (u >= mech.error_size) throw ModelError("error symbol outside the error alphabet of '" + m.graph.label(v) + "'");
  return mech.at(values, u);
}

std::vector<Assignment> enumerate_joint_assignments(const FunctionalCausalModel& m, const VertexSet& subset) {
  if (subset.bound() > m.size()) throw ModelError("subset names a vertex outside the model");
  std::vector<VertexIndex> vertices = subset.to_vector();
  std::vector<std::size_t> radices;
  for (VertexIndex v : vertices) radices.push_back(m.alphabets[v].size());
  std::vector<Assignment> out;
  out.reserve(checked_product(radices));
  for (Odometer it(radices); !it.done(); it.next()) out.push_back({vertices, it.digits()});
  return out;
}

std::vector<Rational> conditional_table(const FunctionalCausalModel& m, VertexIndex v) {
  const Mechanism& mech = m.mechanisms.at(v);
  const std::size_t width = m.alphabets[v].size();
  const std::size_t rows = mech.parent_assignment_count();
  std::vector<Rational> table(rows * width);
  for (std::size_t pa = 0; pa < rows; ++pa)
    for (std::size_t u = 0; u < mech.error_size; ++u)
      table[pa * width + mech.table[pa * mech.error_size + u]] += m.errors[v].distribution[u];
  return table;
}

}  // namespace cfcm
