#include <cfcm/dot.hpp>

#include <sstream>

namespace cfcm {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const DirectedGraph& g, const DotShapes& shapes, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << quote(name) << " {\n";
  for (VertexIndex v = 0; v < g.size(); ++v) {
    auto it = shapes.find(v);
    out << "  " << quote(g.label(v)) << " [shape=" << (it == shapes.end() ? "ellipse" : it->second) << "];\n";
  }
  for (const Edge& e : g.edges()) out << "  " << quote(g.label(e.from)) << " -> " << quote(g.label(e.to)) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace cfcm
