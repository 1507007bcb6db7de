#ifndef CFCM_DOT_HPP
#define CFCM_DOT_HPP

#include <cfcm/graph.hpp>

#include <map>
#include <string>

namespace cfcm {

/// Graphviz node shape per vertex; vertices not in the map use "ellipse".
using DotShapes = std::map<VertexIndex, std::string>;

std::string to_dot(const DirectedGraph& g, const DotShapes& shapes = {}, const std::string& name = "G");

}  // namespace cfcm

#endif  // CFCM_DOT_HPP
