#include "internal/document.hpp"

#include <cfcm/errors.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace cfcm::detail {

namespace {

class Builder {
 public:
  explicit Builder(Document& doc) : doc_(doc) {}

  void error(const Pos& at, std::string message, std::string vertex = {}) {
    doc_.diagnostics.push_back({std::move(message), std::move(vertex), at.line, at.column});
  }
  bool failed() const { return !doc_.diagnostics.empty(); }

  // Declares vertices and edges; returns nullopt when they are not coherent.
  std::optional<DirectedGraph> graph(bool need_alphabets) {
    std::set<std::string> seen;
    for (const VertexDecl& v : doc_.vertices) {
      if (!seen.insert(v.name.text).second) {
        error(v.name.pos, "vertex '" + v.name.text + "' declared twice", v.name.text);
        continue;
      }
      labels_.push_back(v.name.text);
      decls_.push_back(&v);
      if (!v.alphabet) {
        if (need_alphabets) error(v.name.pos, "vertex '" + v.name.text + "' has no alphabet", v.name.text);
        continue;
      }
      std::set<std::string> symbols;
      for (const Symbol& s : v.alphabet->symbols)
        if (!symbols.insert(s.text).second)
          error(s.pos, "symbol '" + s.text + "' repeated in the alphabet of '" + v.name.text + "'", v.name.text);
    }
    if (labels_.empty()) {
      error({1, 1}, "no vertices declared");
      return std::nullopt;
    }
    std::vector<Edge> edges;
    std::set<std::pair<VertexIndex, VertexIndex>> edge_set;
    for (const EdgeDecl& e : doc_.edges) {
      auto from = index(e.from);
      auto to = index(e.to);
      if (!from || !to) continue;
      if (!edge_set.emplace(*from, *to).second) {
        error(e.from.pos, "edge " + e.from.text + " -> " + e.to.text + " declared twice");
        continue;
      }
      edges.push_back({*from, *to});
    }
    if (failed()) return std::nullopt;
    return DirectedGraph::from_edges(labels_, std::move(edges));
  }

  std::optional<VertexIndex> index(const Symbol& name) {
    for (VertexIndex i = 0; i < labels_.size(); ++i)
      if (labels_[i] == name.text) return i;
    error(name.pos, "unknown vertex '" + name.text + "'");
    return std::nullopt;
  }

  static Alphabet alphabet_of(const AlphabetSpec& spec) {
    std::vector<std::string> symbols;
    for (const Symbol& s : spec.symbols) symbols.push_back(s.text);
    return Alphabet(std::move(symbols));
  }

  std::optional<FunctionalCausalModel> model() {
    auto g = graph(true);
    if (!g) return std::nullopt;
    const std::size_t n = g->size();
    FunctionalCausalModel m;
    m.graph = *g;
    for (const VertexDecl* d : decls_) m.alphabets.push_back(alphabet_of(*d->alphabet));

    // Error variables.
    std::vector<const ErrorDecl*> error_decl(n, nullptr);
    m.errors.assign(n, ErrorVariable::deterministic());
    for (const ErrorDecl& e : doc_.errors) {
      auto v = index(e.vertex);
      if (!v) continue;
      if (error_decl[*v] != nullptr) {
        error(e.vertex.pos, "error for '" + e.vertex.text + "' declared twice", e.vertex.text);
        continue;
      }
      error_decl[*v] = &e;
      if (e.uniform) {
        Alphabet a = e.alphabet ? alphabet_of(*e.alphabet) : m.alphabets[*v];
        if (std::set<std::string>(a.symbols().begin(), a.symbols().end()).size() != a.size()) {
          error(e.vertex.pos, "error alphabet of '" + e.vertex.text + "' repeats a symbol", e.vertex.text);
          continue;
        }
        m.errors[*v] = ErrorVariable::uniform(a);
        continue;
      }
      ErrorVariable err;
      std::vector<std::string> symbols;
      std::set<std::string> seen;
      Rational total = 0;
      bool ok = true;
      for (const auto& [s, p] : e.entries) {
        if (!seen.insert(s.text).second) {
          error(s.pos, "error symbol '" + s.text + "' repeated", e.vertex.text);
          ok = false;
        }
        symbols.push_back(s.text);
        err.distribution.push_back(p);
        total += p;
      }
      if (ok && total != 1) {
        error(e.vertex.pos, "distribution sums to " + to_string(total) + ", expected 1", e.vertex.text);
        ok = false;
      }
      if (!ok) continue;
      err.alphabet = Alphabet(std::move(symbols));
      m.errors[*v] = std::move(err);
    }
    if (failed()) return std::nullopt;

    // Table size guard, before anything is tabulated.
    for (VertexIndex v = 0; v < n; ++v) {
      std::size_t entries = m.errors[v].alphabet.size();
      bool too_big = false;
      for (VertexIndex p : g->parents(v)) {
        entries *= m.alphabets[p].size();
        if (entries > kMaxTableEntries) too_big = true;
        if (too_big) break;
      }
      if (too_big) error(decls_[v]->name.pos, "mechanism table of '" + labels_[v] + "' is too large", labels_[v]);
    }
    if (failed()) return std::nullopt;

    // Mechanisms.
    std::vector<const FuncDecl*> func(n, nullptr);
    std::vector<std::vector<const TableDecl*>> tables(n);
    for (const FuncDecl& f : doc_.funcs) {
      auto v = index(f.vertex);
      if (!v) continue;
      if (func[*v] != nullptr)
        error(f.vertex.pos, "func for '" + f.vertex.text + "' given twice", f.vertex.text);
      else
        func[*v] = &f;
    }
    for (const TableDecl& t : doc_.tables) {
      auto v = index(t.vertex);
      if (v) tables[*v].push_back(&t);
    }
    if (failed()) return std::nullopt;

    for (VertexIndex v = 0; v < n; ++v) {
      const std::string& label = labels_[v];
      if (func[v] != nullptr && !tables[v].empty()) {
        error(tables[v].front()->vertex.pos, "'" + label + "' has both a func and a table", label);
        continue;
      }
      if (func[v] != nullptr) {
        auto mech = compile_expression(func[v]->expr, *g, m.alphabets, m.errors[v], v, func[v]->where,
                                       doc_.diagnostics);
        m.mechanisms.push_back(mech ? std::move(*mech) : Mechanism{});
        continue;
      }
      if (!tables[v].empty()) {
        m.mechanisms.push_back(table(m, v, tables[v]));
        continue;
      }
      if (g->is_exogenous(v) && error_decl[v] != nullptr) {
        // f(u) = u
        const Alphabet& ua = m.errors[v].alphabet;
        bool ok = true;
        for (std::size_t u = 0; u < ua.size() && ok; ++u) {
          if (!m.alphabets[v].find(ua.symbol(u))) {
            error(error_decl[v]->vertex.pos,
                  "'" + label + "' has no func or table and error symbol '" + ua.symbol(u) +
                      "' is not in its alphabet",
                  label);
            ok = false;
          }
        }
        m.mechanisms.push_back(tabulate_mechanism(*g, m.alphabets, v, ua.size(), [&](auto, std::size_t u) {
          return ok ? *m.alphabets[v].find(ua.symbol(u)) : 0;
        }));
        continue;
      }
      error(decls_[v]->name.pos, "vertex '" + label + "' has no func or table", label);
      m.mechanisms.push_back(Mechanism{});
    }
    if (failed()) return std::nullopt;

    for (Diagnostic d : validate_model(m)) {
      auto v = m.graph.find(d.vertex);
      const Pos at = v ? decls_[*v]->name.pos : Pos{1, 1};
      error(at, d.message, d.vertex);
    }
    if (failed()) return std::nullopt;
    return m;
  }

 private:
  Mechanism table(const FunctionalCausalModel& m, VertexIndex v, const std::vector<const TableDecl*>& decls) {
    const DirectedGraph& g = m.graph;
    const std::string& label = labels_[v];
    const std::vector<VertexIndex>& parents = g.parents(v);
    const ErrorVariable& err = m.errors[v];
    Mechanism mech = tabulate_mechanism(g, m.alphabets, v, err.alphabet.size(),
                                        [](auto, std::size_t) { return Mechanism::kUnset; });
    for (const TableDecl* t : decls) {
      // Column i of this table holds parent slot order[i].
      std::vector<std::size_t> order;
      if (!t->parents) {
        if (!parents.empty()) {
          error(t->vertex.pos, "table for '" + label + "' must list its parents after '|'", label);
          return mech;
        }
      } else {
        std::vector<char> listed(parents.size(), 0);
        for (const Symbol& p : *t->parents) {
          auto pv = g.find(p.text);
          auto it = pv ? std::find(parents.begin(), parents.end(), *pv) : parents.end();
          if (it == parents.end()) {
            error(p.pos, "'" + p.text + "' is not a parent of '" + label + "'", label);
            return mech;
          }
          const auto slot = static_cast<std::size_t>(it - parents.begin());
          if (listed[slot]) {
            error(p.pos, "parent '" + p.text + "' listed twice", label);
            return mech;
          }
          listed[slot] = 1;
          order.push_back(slot);
        }
        for (std::size_t i = 0; i < parents.size(); ++i) {
          if (!listed[i]) {
            error(t->vertex.pos, "table for '" + label + "' does not list parent '" + g.label(parents[i]) + "'",
                  label);
            return mech;
          }
        }
      }
      std::vector<std::size_t> pa(parents.size());
      for (const TableRow& row : t->rows) {
        if (row.values.size() != order.size()) {
          error(row.pos,
                "row has " + std::to_string(row.values.size()) + " parent values, expected " +
                    std::to_string(order.size()),
                label);
          return mech;
        }
        for (std::size_t i = 0; i < order.size(); ++i) {
          const VertexIndex p = parents[order[i]];
          auto value = m.alphabets[p].find(row.values[i].text);
          if (!value) {
            error(row.values[i].pos, "'" + row.values[i].text + "' is not in the alphabet of '" + g.label(p) + "'",
                  label);
            return mech;
          }
          pa[order[i]] = *value;
        }
        std::size_t u_begin = 0;
        std::size_t u_end = err.alphabet.size();
        if (row.error) {
          auto u = err.alphabet.find(row.error->text);
          if (!u) {
            error(row.error->pos, "'" + row.error->text + "' is not an error symbol of '" + label + "'", label);
            return mech;
          }
          u_begin = *u;
          u_end = *u + 1;
        }
        auto out = m.alphabets[v].find(row.out.text);
        if (!out) {
          error(row.out.pos, "'" + row.out.text + "' is not in the alphabet of '" + label + "'", label);
          return mech;
        }
        for (std::size_t u = u_begin; u < u_end; ++u) {
          std::uint32_t& cell = mech.table[mech.row(pa, u)];
          if (cell != Mechanism::kUnset && cell != *out) {
            error(row.pos, "row conflicts with an earlier row for '" + label + "'", label);
            return mech;
          }
          cell = static_cast<std::uint32_t>(*out);
        }
      }
    }
    for (Odometer it(mech.parent_radices); !it.done(); it.next()) {
      for (std::size_t u = 0; u < mech.error_size; ++u) {
        if (mech.at(it.digits(), u) != Mechanism::kUnset) continue;
        std::string where = "(";
        for (std::size_t i = 0; i < parents.size(); ++i)
          where += (i > 0 ? ", " : "") + g.label(parents[i]) + "=" + m.alphabets[parents[i]].symbol(it.digits()[i]);
        where += ")";
        if (!err.is_deterministic()) where += " u=" + err.alphabet.symbol(u);
        error(decls.front()->vertex.pos, "mechanism not total: no row for " + where, label);
        return mech;
      }
    }
    return mech;
  }

  Document& doc_;
  std::vector<std::string> labels_;
  std::vector<const VertexDecl*> decls_;
};

}  // namespace

ParseResult build_model(Document doc) {
  ParseResult result;
  if (doc.diagnostics.empty()) {
    Builder b(doc);
    try {
      auto m = b.model();
      if (m && doc.diagnostics.empty()) result.model = std::move(m);
    } catch (const Error& e) {
      doc.diagnostics.push_back({e.what(), "", 1, 1});
    }
  }
  result.diagnostics = std::move(doc.diagnostics);
  if (!result.diagnostics.empty()) result.model.reset();
  return result;
}

GraphParseResult build_graph(Document doc) {
  GraphParseResult result;
  if (doc.diagnostics.empty()) {
    Builder b(doc);
    try {
      auto g = b.graph(false);
      if (g && doc.diagnostics.empty()) result.graph = std::move(g);
    } catch (const Error& e) {
      doc.diagnostics.push_back({e.what(), "", 1, 1});
    }
  }
  result.diagnostics = std::move(doc.diagnostics);
  if (!result.diagnostics.empty()) result.graph.reset();
  return result;
}

}  // namespace cfcm::detail
