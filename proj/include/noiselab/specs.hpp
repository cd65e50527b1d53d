#pragma once

#include <map>
#include <string>

#include "noiselab/boolean.hpp"
#include "noiselab/graph.hpp"

namespace noiselab {

/// `family:key=val,...` split into its parts.
struct MiniSpec {
  std::string family;
  std::map<std::string, std::string> params;
};

MiniSpec parse_mini_spec(const std::string& text);

/// torus:m=,n= | hypercube:n= | johnson:n=,m= | sym:n= | custom:path=FILE
/// (a bare path ending in .json is read as a custom graph file).
SchreierGraph graph_from_spec(const std::string& text, std::size_t max_states = kDefaultMaxStates);

/// constant:c= | dictator:i= | parity | majority | tribes:l=,k= | slice:m= |
/// fixes:i=,j=. A path ending in .json is read as a function file.
BooleanFunction function_from_spec(const SchreierGraph& g, const std::string& text);

NamedFunctionSpec parse_named_function(const std::string& text);

}  // namespace noiselab
