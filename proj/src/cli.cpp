#include <cfcm/cli.hpp>

#include <cfcm/dot.hpp>
#include <cfcm/dsl.hpp>
#include <cfcm/errors.hpp>
#include <cfcm/inference.hpp>
#include <cfcm/separation.hpp>
#include <cfcm/solvability.hpp>
#include <cfcm/teleportation.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace cfcm {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputError {
  std::string source;
  std::vector<Diagnostic> diagnostics;
};

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool json = false;
  bool decimal = false;
};

std::string source_name(const std::string& path) { return path == "-" ? "<stdin>" : path; }

std::string read_input(Context& ctx, const std::string& path) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << ctx.in.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot read '" + path + "'");
  buffer << file.rdbuf();
  return buffer.str();
}

FunctionalCausalModel load_model(Context& ctx, const std::string& path) {
  const std::string text = read_input(ctx, path);
  ParseResult r = detect_format(text) == ModelFormat::json ? parse_model_json(text) : parse_model(text);
  if (!r.ok()) throw InputError{source_name(path), std::move(r.diagnostics)};
  return std::move(*r.model);
}

DirectedGraph load_graph(Context& ctx, const std::string& path) {
  const std::string text = read_input(ctx, path);
  GraphParseResult r = detect_format(text) == ModelFormat::json ? parse_graph_json(text) : parse_graph(text);
  if (!r.ok()) throw InputError{source_name(path), std::move(r.diagnostics)};
  return std::move(*r.graph);
}

VertexSet vertex_list(const DirectedGraph& g, const std::vector<std::string>& names, const char* flag) {
  VertexSet s;
  for (const std::string& name : names) {
    auto v = g.find(name);
    if (!v) throw UsageError(std::string(flag) + ": unknown vertex '" + name + "'");
    s.insert(*v);
  }
  return s;
}

Assignment condition(const FunctionalCausalModel& m, const std::vector<std::string>& items) {
  std::map<VertexIndex, std::size_t> values;
  for (const std::string& item : items) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--cond: expected V=x, found '" + item + "'");
    const std::string name = item.substr(0, eq);
    const std::string symbol = item.substr(eq + 1);
    auto v = m.graph.find(name);
    if (!v) throw UsageError("--cond: unknown vertex '" + name + "'");
    auto x = m.alphabets[*v].find(symbol);
    if (!x) throw UsageError("--cond: '" + symbol + "' is not in the alphabet of '" + name + "'");
    if (!values.emplace(*v, *x).second) throw UsageError("--cond: '" + name + "' given twice");
  }
  Assignment a;
  for (const auto& [v, x] : values) {
    a.vertices.push_back(v);
    a.values.push_back(x);
  }
  return a;
}

std::string decimal(const Rational& r) {
  std::ostringstream s;
  s << std::setprecision(12) << to_double(r);
  return s.str();
}

std::string set_text(const DirectedGraph& g, const VertexSet& s) {
  std::string out;
  for (VertexIndex v : s.to_vector()) out += (out.empty() ? "" : ",") + g.label(v);
  return out.empty() ? "(none)" : out;
}

Json names_json(const DirectedGraph& g, const VertexSet& s) {
  Json a = Json::array();
  for (VertexIndex v : s.to_vector()) a.push_back(g.label(v));
  return a;
}

int validate_command(Context& ctx, const std::string& path) {
  const FunctionalCausalModel m = load_model(ctx, path);
  if (ctx.json) {
    ctx.out << Json{{"valid", true}, {"vertices", m.size()}, {"edges", m.graph.edges().size()}}.dump(2) << '\n';
  } else {
    ctx.out << "valid: " << m.size() << " vertices, " << m.graph.edges().size() << " edges\n";
  }
  return kExitOk;
}

int prob_command(Context& ctx, const std::string& path, const std::vector<std::string>& keep,
                 const std::vector<std::string>& cond) {
  const FunctionalCausalModel m = load_model(ctx, path);
  const Assignment given = condition(m, cond);
  const VertexSet given_vars = VertexSet::from(given.vertices);
  VertexSet targets;
  if (keep.empty()) {
    for (VertexIndex v = 0; v < m.size(); ++v)
      if (!given_vars.contains(v)) targets.insert(v);
  } else {
    targets = vertex_list(m.graph, keep, "--marginal");
    if (targets.intersects(given_vars)) throw UsageError("--marginal and --cond name the same vertex");
  }
  if (targets.empty()) throw UsageError("no variables left to report");

  const JointDistribution joint = joint_distribution(m);
  const JointDistribution d = given.vertices.empty() ? marginal(joint, targets) : conditional(joint, targets, given);

  std::string given_text;
  for (std::size_t i = 0; i < given.vertices.size(); ++i)
    given_text += (i > 0 ? "," : "") + m.graph.label(given.vertices[i]) + "=" +
                  m.alphabets[given.vertices[i]].symbol(given.values[i]);

  if (ctx.json) {
    Json doc = Json::object();
    doc["variables"] = d.names();
    if (!given.vertices.empty()) {
      Json g = Json::object();
      for (std::size_t i = 0; i < given.vertices.size(); ++i)
        g[m.graph.label(given.vertices[i])] = m.alphabets[given.vertices[i]].symbol(given.values[i]);
      doc["given"] = g;
    }
    Json probs = Json::object();
    Json floats = Json::object();
    for (std::size_t i = 0; i < d.entry_count(); ++i) {
      const std::vector<std::size_t> values = d.values_at(i);
      std::string key;
      for (std::size_t k = 0; k < values.size(); ++k) key += (k > 0 ? "," : "") + d.alphabets()[k].symbol(values[k]);
      probs[key] = to_string(d.probabilities()[i]);
      if (ctx.decimal) floats[key] = to_double(d.probabilities()[i]);
    }
    doc["probabilities"] = probs;
    if (ctx.decimal) doc["float"] = floats;
    ctx.out << doc.dump(2) << '\n';
    return kExitOk;
  }

  std::string header;
  for (const std::string& name : d.names()) header += (header.empty() ? "" : ",") + name;
  ctx.out << "# P(" << header << (given_text.empty() ? "" : " | " + given_text) << ")\n";
  for (const std::string& name : d.names()) ctx.out << name << ' ';
  ctx.out << 'P' << (ctx.decimal ? " float" : "") << '\n';
  for (std::size_t i = 0; i < d.entry_count(); ++i) {
    const std::vector<std::size_t> values = d.values_at(i);
    for (std::size_t k = 0; k < values.size(); ++k) ctx.out << d.alphabets()[k].symbol(values[k]) << ' ';
    ctx.out << to_string(d.probabilities()[i]);
    if (ctx.decimal) ctx.out << ' ' << decimal(d.probabilities()[i]);
    ctx.out << '\n';
  }
  return kExitOk;
}

SeparationQuery query_from(const DirectedGraph& g, const std::vector<std::string>& x, const std::vector<std::string>& y,
                           const std::vector<std::string>& z) {
  return {vertex_list(g, x, "--x"), vertex_list(g, y, "--y"), vertex_list(g, z, "--z")};
}

int dsep_command(Context& ctx, const std::string& path, const std::vector<std::string>& x,
                 const std::vector<std::string>& y, const std::vector<std::string>& z) {
  const DirectedGraph g = load_graph(ctx, path);
  const bool separated = d_separated(g, query_from(g, x, y, z));
  if (ctx.json)
    ctx.out << Json{{"separated", separated}}.dump(2) << '\n';
  else
    ctx.out << (separated ? "separated" : "connected") << '\n';
  return kExitOk;
}

int psep_command(Context& ctx, const std::string& path, const std::vector<std::string>& x,
                 const std::vector<std::string>& y, const std::vector<std::string>& z) {
  const DirectedGraph g = load_graph(ctx, path);
  const PSeparationWitness w = p_separated(g, query_from(g, x, y, z));
  if (ctx.json) {
    Json doc{{"separated", w.separated}};
    doc["witness"] = w.split ? names_json(g, *w.split) : Json(nullptr);
    ctx.out << doc.dump(2) << '\n';
  } else {
    ctx.out << (w.separated ? "separated" : "connected") << '\n';
    if (w.split) ctx.out << "witness split set: " << set_text(g, *w.split) << '\n';
  }
  return kExitOk;
}

int solve_command(Context& ctx, const std::string& path) {
  const FunctionalCausalModel m = load_model(ctx, path);
  const SolvabilityReport report = classify(m);
  auto key = [&](const SolutionCount& c) {
    if (c.u.vertices.empty()) return std::string("()");
    std::string k;
    for (std::size_t i = 0; i < c.u.vertices.size(); ++i) {
      const VertexIndex v = c.u.vertices[i];
      k += (i > 0 ? "," : "") + ("U_" + m.graph.label(v)) + "=" + m.errors[v].alphabet.symbol(c.u.values[i]);
    }
    return k;
  };
  if (ctx.json) {
    Json counts = Json::object();
    for (const SolutionCount& c : report.counts) counts[key(c)] = c.count;
    Json doc{{"class", to_string(report.solvability)}, {"average_num_solutions", to_string(report.average)}};
    if (ctx.decimal) doc["average_float"] = to_double(report.average);
    doc["markov"] = report.markov;
    doc["counts"] = counts;
    ctx.out << doc.dump(2) << '\n';
    return kExitOk;
  }
  ctx.out << "class: " << to_string(report.solvability) << '\n';
  ctx.out << "average_num_solutions: " << to_string(report.average);
  if (ctx.decimal) ctx.out << " (" << decimal(report.average) << ')';
  ctx.out << '\n';
  ctx.out << "markov: " << (report.markov ? "true" : "false") << '\n';
  ctx.out << "solutions:\n";
  for (const SolutionCount& c : report.counts) ctx.out << "  " << key(c) << ": " << c.count << '\n';
  return kExitOk;
}

int telegraph_command(Context& ctx, const std::string& path, const std::vector<std::string>& split_names,
                      bool split_given, bool emit_dot) {
  const FunctionalCausalModel m = load_model(ctx, path);
  VertexSet split;
  if (split_given) {
    split = vertex_list(m.graph, split_names, "--split");
    if (!is_split_set(m.graph, split))
      throw UsageError("--split: removing the out-edges of {" + set_text(m.graph, split) +
                       "} leaves a cycle");
  } else {
    for_each_split_set(m.graph, [&](const VertexSet& s) {
      split = s;
      return false;
    });
  }
  const TeleportationGraph tg = build_teleportation_graph(m.graph, split);
  if (emit_dot) {
    ctx.out << to_dot(tg);
    return kExitOk;
  }
  const TeleportationModel tm = build_teleportation_model(m, tg);
  const Rational p = success_probability(tm);
  const DirectedGraph& g = tg.graph;
  if (ctx.json) {
    Json edges = Json::array();
    for (const Edge& e : g.edges()) edges.push_back(Json::array({g.label(e.from), g.label(e.to)}));
    Json doc{{"split", names_json(m.graph, split)}, {"vertices", g.labels()}, {"edges", edges},
             {"tau", to_string(tm.tau_product())}, {"success_probability", to_string(p)}};
    if (ctx.decimal) doc["success_probability_float"] = to_double(p);
    ctx.out << doc.dump(2) << '\n';
    return kExitOk;
  }
  ctx.out << "split: " << set_text(m.graph, split) << '\n';
  ctx.out << "vertices:";
  for (const std::string& label : g.labels()) ctx.out << ' ' << label;
  ctx.out << "\nedges:\n";
  for (const Edge& e : g.edges()) ctx.out << "  " << g.label(e.from) << " -> " << g.label(e.to) << '\n';
  ctx.out << "tau: " << to_string(tm.tau_product()) << '\n';
  ctx.out << "success_probability: " << to_string(p);
  if (ctx.decimal) ctx.out << " (" << decimal(p) << ')';
  ctx.out << '\n';
  return kExitOk;
}

int report_error(Context& ctx, int code, const std::string& message) {
  if (ctx.json)
    ctx.err << Json{{"error", {{"code", code}, {"message", message}}}}.dump(2) << '\n';
  else
    ctx.err << "error: " << message << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Context ctx{in, out, err};
  CLI::App app{"Exact inference for finite functional causal models on directed graphs, cycles included.", "cfcm"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json", ctx.json, "Machine-readable JSON output (diagnostics go to stderr)");
  app.add_flag("--float", ctx.decimal, "Add decimal renderings next to exact rationals");

  std::string file;
  std::vector<std::string> keep, cond, xs, ys, zs, split;
  bool emit_dot = false;

  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a model file");
  validate->add_option("file", file, "Model file (.cfcm or JSON), - for stdin")->required();

  CLI::App* prob = app.add_subcommand("prob", "Probability distribution of the model");
  prob->add_option("file", file, "Model file, - for stdin")->required();
  prob->add_option("--marginal", keep, "Vertices to keep, comma separated")->delimiter(',');
  prob->add_option("--cond", cond, "Conditioning values V=x, comma separated")->delimiter(',');

  CLI::App* dsep = app.add_subcommand("dsep", "d-separation test");
  CLI::App* psep = app.add_subcommand("psep", "p-separation test with witness split set");
  for (CLI::App* sub : {dsep, psep}) {
    sub->add_option("file", file, "Model or graph-only file, - for stdin")->required();
    sub->add_option("--x", xs, "First vertex set")->delimiter(',')->required();
    sub->add_option("--y", ys, "Second vertex set")->delimiter(',')->required();
    sub->add_option("--z", zs, "Conditioning vertex set")->delimiter(',');
  }

  CLI::App* solve = app.add_subcommand("solve", "Solution counts, solvability class and Markov property");
  solve->add_option("file", file, "Model file, - for stdin")->required();

  CLI::App* telegraph = app.add_subcommand("telegraph", "Teleportation graph and post-selection success probability");
  telegraph->add_option("file", file, "Model file, - for stdin")->required();
  CLI::Option* split_opt =
      telegraph->add_option("--split", split, "Split vertices (default: first valid split set)")->delimiter(',');
  telegraph->add_flag("--emit-dot", emit_dot, "Print the teleportation graph as DOT");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("cfcm");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return validate_command(ctx, file);
    if (prob->parsed()) return prob_command(ctx, file, keep, cond);
    if (dsep->parsed()) return dsep_command(ctx, file, xs, ys, zs);
    if (psep->parsed()) return psep_command(ctx, file, xs, ys, zs);
    if (solve->parsed()) return solve_command(ctx, file);
    if (telegraph->parsed()) return telegraph_command(ctx, file, split, split_opt->count() > 0, emit_dot);
  } catch (const InputError& e) {
    if (ctx.json) {
      Json diags = Json::array();
      for (const Diagnostic& d : e.diagnostics)
        diags.push_back({{"line", d.line}, {"column", d.column}, {"vertex", d.vertex}, {"message", d.message}});
      err << Json{{"valid", false}, {"source", e.source}, {"diagnostics", diags}}.dump(2) << '\n';
    } else {
      for (const Diagnostic& d : e.diagnostics) err << format_diagnostic(d, e.source) << '\n';
    }
    return kExitInvalidInput;
  } catch (const UsageError& e) {
    return report_error(ctx, kExitUsage, e.what());
  } catch (const QueryError& e) {
    return report_error(ctx, kExitUsage, e.what());
  } catch (const InconsistentModel& e) {
    return report_error(ctx, kExitInconsistent, e.what());
  } catch (const ZeroProbabilityCondition& e) {
    return report_error(ctx, kExitZeroProbability, e.what());
  } catch (const Error& e) {
    return report_error(ctx, kExitInvalidInput, e.what());
  }
  return kExitUsage;
}

}  // namespace cfcm
