#ifndef CFCM_TESTS_FIXTURES_HPP
#define CFCM_TESTS_FIXTURES_HPP

// Small worked models in the text format.

#include <cfcm/dsl.hpp>
#include <cfcm/errors.hpp>

#include <string>

namespace fixtures {

inline cfcm::FunctionalCausalModel must_parse(const std::string& text) {
  cfcm::ParseResult r = cfcm::parse_model(text);
  if (!r.ok()) {
    std::string all;
    for (const auto& d : r.diagnostics) all += cfcm::format_diagnostic(d, "fixture") + "\n";
    throw cfcm::ModelError("fixture does not parse:\n" + all);
  }
  return *r.model;
}

inline cfcm::DirectedGraph must_parse_graph(const std::string& text) {
  cfcm::GraphParseResult r = cfcm::parse_graph(text);
  if (!r.ok()) throw cfcm::GraphError("fixture graph does not parse");
  return *r.graph;
}

inline std::string copy_loop_text(int n) {
  return "vertex A : 0.." + std::to_string(n - 1) + "\nvertex B : 0.." + std::to_string(n - 1) +
         "\nedge A -> B\nedge B -> A\nfunc A := B\nfunc B := A\n";
}
inline cfcm::FunctionalCausalModel copy_loop(int n) { return must_parse(copy_loop_text(n)); }

inline const char* kNotLoop = R"(vertex A : 0..1
vertex B : 0..1
edge A -> B
edge B -> A
func A := B xor 1
func B := A
)";
inline cfcm::FunctionalCausalModel not_loop() { return must_parse(kNotLoop); }

inline const char* kXorLoop = R"(# two-vertex loop fed by two uniform bits
vertex v1 : 0..1
vertex v2 : 0..1
vertex v3 : 0..1
vertex v4 : 0..1
edge v1 -> v2
edge v2 -> v1
edge v3 -> v1
edge v4 -> v2
error v3 ~ uniform
error v4 ~ uniform
func v1 := v2 xor v3
func v2 := v1 xor v4
)";
inline cfcm::FunctionalCausalModel xor_loop() { return must_parse(kXorLoop); }

inline std::string latent_parity_text(const std::string& p0, const std::string& p1) {
  return "vertex L : 0..1\nvertex A : 0..1\nvertex B : 0..1\nvertex C : 0..1\n"
         "edge L -> A\nedge L -> C\nedge A -> B\nedge C -> B\nedge B -> C\n"
         "error L ~ {0: " + p0 + ", 1: " + p1 + "}\n"
         "func A := L\nfunc B := A xor C\nfunc C := L xor B\n";
}
inline cfcm::FunctionalCausalModel latent_parity(const std::string& p0, const std::string& p1) {
  return must_parse(latent_parity_text(p0, p1));
}

inline const char* kTwinLoops = R"(vertex v1 : 0..1
vertex v2 : 0..1
vertex v3 : 0..1
vertex v4 : 0..1
vertex v5 : 0..1
vertex v6 : 0..1
vertex v7 : 0..1
edge v1 -> v2
edge v1 -> v3
edge v2 -> v3
edge v3 -> v2
edge v2 -> v6
edge v2 -> v7
edge v4 -> v6
edge v4 -> v7
edge v5 -> v6
edge v5 -> v7
edge v6 -> v7
edge v7 -> v6
error v1 ~ uniform
error v4 ~ uniform
error v5 ~ uniform
func v2 := v1 xor v3
func v3 := v1 xor v2
func v6 := (v2 xor v4 xor v5) * (v7 xor 1)
func v7 := (v2 xor v4 xor v5) * v6
)";
inline cfcm::FunctionalCausalModel twin_loops() { return must_parse(kTwinLoops); }

inline const char* kAveragelySolvable = R"(vertex X1 : 0..1
vertex X2 : 0..1
edge X1 -> X2
edge X2 -> X1
error X2 ~ uniform
func X1 := X2
func X2 := X1 xor u
)";
inline cfcm::FunctionalCausalModel averagely_solvable() { return must_parse(kAveragelySolvable); }

inline const char* kMod3Loop = R"(vertex A : 0..2
vertex B : 0..2
edge A -> B
edge B -> A
func A := 2*B mod 3
func B := A
)";
inline cfcm::FunctionalCausalModel mod3_loop() { return must_parse(kMod3Loop); }

// X -> Y, X -> Z, Y -> Z with deterministic Y and Z.
inline const char* kAcyclicExample = R"(vertex X : 0..2
vertex Y : 0..1
vertex Z : 0..3
edge X -> Y
edge X -> Z
edge Y -> Z
error X ~ {0: 1/2, 1: 1/3, 2: 1/6}
func Y := X mod 2
func Z := X + Y
)";
inline cfcm::FunctionalCausalModel acyclic_example() { return must_parse(kAcyclicExample); }

inline const char* kFourCycle = R"(vertex v1
vertex v2
vertex v3
vertex v4
edge v1 -> v2
edge v2 -> v3
edge v3 -> v4
edge v4 -> v1
)";
inline cfcm::DirectedGraph four_cycle() { return must_parse_graph(kFourCycle); }

inline const char* kColliderWithDescendant = R"(vertex A
vertex B
vertex C
vertex D
edge A -> C
edge B -> C
edge C -> D
)";
inline cfcm::DirectedGraph collider_with_descendant() { return must_parse_graph(kColliderWithDescendant); }

inline cfcm::DirectedGraph chain() { return cfcm::DirectedGraph::build({"A", "C", "B"}, {{"A", "C"}, {"C", "B"}}); }
inline cfcm::DirectedGraph collider() { return cfcm::DirectedGraph::build({"A", "B", "C"}, {{"A", "C"}, {"B", "C"}}); }
inline cfcm::DirectedGraph two_cycle() { return cfcm::DirectedGraph::build({"A", "B"}, {{"A", "B"}, {"B", "A"}}); }

}  // namespace fixtures

#endif  // CFCM_TESTS_FIXTURES_HPP
