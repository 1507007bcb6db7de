#include <cfcm/dsl.hpp>

#include "internal/document.hpp"

#include <json.hpp>

#include <cctype>

namespace cfcm {

using Json = nlohmann::ordered_json;

namespace detail {
namespace {

Pos position_at(std::string_view text, std::size_t offset) {
  Pos p{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

// JSON values carry no positions; point semantic diagnostics at the first
// occurrence of the vertex name in quotes, else at the top of the document.
class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}
  Pos near(const std::string& name) const {
    const std::size_t at = text_.find("\"" + name + "\"");
    return at == std::string_view::npos ? Pos{1, 1} : position_at(text_, at);
  }

 private:
  std::string_view text_;
};

class JsonReader {
 public:
  JsonReader(std::string_view text, Document& doc) : locate_(text), doc_(doc) {}

  void fail(const Pos& at, const std::string& path, const std::string& message) {
    doc_.diagnostics.push_back({path + ": " + message, "", at.line, at.column});
  }

  std::optional<std::string> token(const Json& j, const Pos& at, const std::string& path) {
    std::string s;
    if (j.is_string())
      s = j.get<std::string>();
    else if (j.is_number_integer())
      s = j.dump();
    else {
      fail(at, path, "expected a symbol (string or integer)");
      return std::nullopt;
    }
    if (!is_plain_token(s)) {
      fail(at, path, "symbol '" + s + "' must be an identifier or an integer");
      return std::nullopt;
    }
    return s;
  }

  std::optional<AlphabetSpec> alphabet(const Json& j, const Pos& at, const std::string& path) {
    if (!j.is_array() || j.empty()) {
      fail(at, path, "expected a non-empty array of symbols");
      return std::nullopt;
    }
    if (j.size() > kMaxAlphabet) {
      fail(at, path, "alphabet larger than " + std::to_string(kMaxAlphabet) + " symbols");
      return std::nullopt;
    }
    AlphabetSpec spec{{}, at};
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto s = token(j[i], at, path + "/" + std::to_string(i));
      if (!s) return std::nullopt;
      spec.symbols.push_back({*s, at});
    }
    return spec;
  }

  void read(const Json& root, bool graph_only) {
    if (!root.is_object()) return fail({1, 1}, "", "document must be an object");
    for (const auto& [key, value] : root.items())
      if (key != "vertices" && key != "edges") fail({1, 1}, "/" + key, "unknown member");
    if (!root.contains("vertices") || !root["vertices"].is_array())
      return fail({1, 1}, "/vertices", "expected an array of vertices");
    const Json& vertices = root["vertices"];
    for (std::size_t i = 0; i < vertices.size(); ++i) vertex(vertices[i], "/vertices/" + std::to_string(i), graph_only);
    if (root.contains("edges")) {
      const Json& edges = root["edges"];
      if (!edges.is_array()) return fail({1, 1}, "/edges", "expected an array of [from, to] pairs");
      for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string path = "/edges/" + std::to_string(i);
        const Json& e = edges[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
          fail({1, 1}, path, "expected a [from, to] pair of vertex names");
          continue;
        }
        const std::string from = e[0].get<std::string>();
        const std::string to = e[1].get<std::string>();
        doc_.edges.push_back({{from, locate_.near(from)}, {to, locate_.near(to)}});
      }
    }
  }

 private:
  void vertex(const Json& j, const std::string& path, bool graph_only) {
    if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
      return fail({1, 1}, path, "expected an object with a string \"name\"");
    const std::string name = j["name"].get<std::string>();
    const Pos at = locate_.near(name);
    if (!is_plain_token(name) || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
      return fail(at, path + "/name", "vertex name '" + name + "' must be an identifier");
    for (const auto& [key, value] : j.items())
      if (key != "name" && key != "alphabet" && key != "error" && key != "func" && key != "table")
        fail(at, path + "/" + key, "unknown member");

    VertexDecl decl{{name, at}, std::nullopt};
    if (j.contains("alphabet")) {
      decl.alphabet = alphabet(j["alphabet"], at, path + "/alphabet");
      if (!decl.alphabet) return;
    }
    doc_.vertices.push_back(std::move(decl));
    if (graph_only) return;

    if (j.contains("error")) error(j["error"], {name, at}, path + "/error");
    if (j.contains("func")) {
      const Json& f = j["func"];
      if (!f.is_string()) return fail(at, path + "/func", "expected an expression string");
      std::vector<Token> tokens = lex_line(f.get<std::string>(), at.line, at.column, doc_.diagnostics);
      auto expr = Expression::parse(tokens, 0, doc_.diagnostics);
      if (expr) doc_.funcs.push_back({{name, at}, tokens.front(), std::move(*expr)});
    }
    if (j.contains("table")) table(j["table"], {name, at}, path + "/table");
  }

  void error(const Json& j, const Symbol& vertex, const std::string& path) {
    ErrorDecl decl;
    decl.vertex = vertex;
    if (j.is_string() && j.get<std::string>() == "uniform") {
      decl.uniform = true;
    } else if (j.is_object() && j.size() == 1 && j.contains("uniform")) {
      decl.uniform = true;
      decl.alphabet = alphabet(j["uniform"], vertex.pos, path + "/uniform");
      if (!decl.alphabet) return;
    } else if (j.is_object() && j.size() == 1 && j.contains("distribution") && j["distribution"].is_object() &&
               !j["distribution"].empty()) {
      for (const auto& [key, value] : j["distribution"].items()) {
        const std::string entry = path + "/distribution/" + key;
        if (!is_plain_token(key)) return fail(vertex.pos, entry, "symbol must be an identifier or an integer");
        std::optional<Rational> p;
        if (value.is_string())
          p = parse_rational(value.get<std::string>());
        else if (value.is_number_integer())
          p = parse_rational(value.dump());
        if (!p) return fail(vertex.pos, entry, "expected a rational \"p/q\"");
        if (*p < 0) return fail(vertex.pos, entry, "probabilities must be non-negative");
        decl.entries.emplace_back(Symbol{key, vertex.pos}, *p);
      }
    } else {
      return fail(vertex.pos, path, R"(expected "uniform", {"uniform": [...]} or {"distribution": {...}})");
    }
    doc_.errors.push_back(std::move(decl));
  }

  void table(const Json& j, const Symbol& vertex, const std::string& path) {
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
      return fail(vertex.pos, path, "expected an object with a \"rows\" array");
    TableDecl decl;
    decl.vertex = vertex;
    if (j.contains("parents")) {
      const Json& ps = j["parents"];
      if (!ps.is_array()) return fail(vertex.pos, path + "/parents", "expected an array of vertex names");
      decl.parents.emplace();
      for (const Json& p : ps) {
        if (!p.is_string()) return fail(vertex.pos, path + "/parents", "expected an array of vertex names");
        decl.parents->push_back({p.get<std::string>(), vertex.pos});
      }
    }
    const Json& rows = j["rows"];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string rp = path + "/rows/" + std::to_string(i);
      const Json& r = rows[i];
      if (!r.is_object() || !r.contains("x")) return fail(vertex.pos, rp, "expected an object with an \"x\" member");
      TableRow row;
      row.pos = vertex.pos;
      if (r.contains("pa")) {
        if (!r["pa"].is_array()) return fail(vertex.pos, rp + "/pa", "expected an array of parent values");
        for (std::size_t k = 0; k < r["pa"].size(); ++k) {
          auto s = token(r["pa"][k], vertex.pos, rp + "/pa/" + std::to_string(k));
          if (!s) return;
          row.values.push_back({*s, vertex.pos});
        }
      }
      if (r.contains("u")) {
        auto s = token(r["u"], vertex.pos, rp + "/u");
        if (!s) return;
        row.error = Symbol{*s, vertex.pos};
      }
      auto out = token(r["x"], vertex.pos, rp + "/x");
      if (!out) return;
      row.out = {*out, vertex.pos};
      decl.rows.push_back(std::move(row));
    }
    // A table without "parents" is read in canonical parent order.
    doc_.tables.push_back(std::move(decl));
  }

  Locator locate_;
  Document& doc_;
};

Document read_json(std::string_view text, bool graph_only) {
  Document doc;
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const Pos at = position_at(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string message = e.what();
    if (auto cut = message.find("parse error"); cut != std::string::npos) message = message.substr(cut);
    doc.diagnostics.push_back({message, "", at.line, at.column});
    return doc;
  }
  JsonReader(text, doc).read(root, graph_only);
  return doc;
}

}  // namespace
}  // namespace detail

ParseResult parse_model_json(std::string_view text) {
  detail::Document doc = detail::read_json(text, false);
  // Tables without an explicit parent list use the canonical parent order.
  if (doc.diagnostics.empty()) {
    GraphParseResult g = detail::build_graph(doc);
    if (g.graph) {
      for (detail::TableDecl& t : doc.tables) {
        if (t.parents) continue;
        auto v = g.graph->find(t.vertex.text);
        if (!v || g.graph->parents(*v).empty()) continue;
        t.parents.emplace();
        for (VertexIndex p : g.graph->parents(*v)) t.parents->push_back({g.graph->label(p), t.vertex.pos});
      }
    }
  }
  return detail::build_model(std::move(doc));
}

GraphParseResult parse_graph_json(std::string_view text) { return detail::build_graph(detail::read_json(text, true)); }

std::string serialize_model_json(const FunctionalCausalModel& m) {
  const DirectedGraph& g = m.graph;
  Json root = Json::object();
  Json vertices = Json::array();
  for (VertexIndex v = 0; v < m.size(); ++v) {
    Json vj = Json::object();
    vj["name"] = g.label(v);
    vj["alphabet"] = m.alphabets[v].symbols();
    const ErrorVariable& err = m.errors[v];
    const bool show_error = !(err == ErrorVariable::deterministic());
    if (show_error) {
      Json dist = Json::object();
      for (std::size_t i = 0; i < err.alphabet.size(); ++i) dist[err.alphabet.symbol(i)] = to_string(err.distribution[i]);
      vj["error"] = Json{{"distribution", dist}};
    }
    const Mechanism& mech = m.mechanisms[v];
    Json parents = Json::array();
    for (VertexIndex p : mech.parents) parents.push_back(g.label(p));
    Json rows = Json::array();
    for (Odometer pa(mech.parent_radices); !pa.done(); pa.next()) {
      for (std::size_t u = 0; u < mech.error_size; ++u) {
        Json row = Json::object();
        Json values = Json::array();
        for (std::size_t i = 0; i < mech.parents.size(); ++i)
          values.push_back(m.alphabets[mech.parents[i]].symbol(pa.digits()[i]));
        row["pa"] = values;
        if (show_error) row["u"] = err.alphabet.symbol(u);
        row["x"] = m.alphabets[v].symbol(mech.at(pa.digits(), u));
        rows.push_back(row);
      }
    }
    vj["table"] = Json{{"parents", parents}, {"rows", rows}};
    vertices.push_back(vj);
  }
  root["vertices"] = vertices;
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back(Json::array({g.label(e.from), g.label(e.to)}));
  root["edges"] = edges;
  return root.dump(2) + "\n";
}

}  // namespace cfcm
