#pragma once

#include <string>

#include "noiselab/boolean.hpp"
#include "noiselab/graph.hpp"
#include "noiselab/spectral.hpp"

namespace noiselab {

/// {"size": N, "generators": [[...], ...], "labels": [...], "auto_close_inverses": bool}
SchreierGraph read_graph_json(const std::string& path, std::size_t max_states = kDefaultMaxStates);
SchreierGraph parse_graph_json(const std::string& text, std::size_t max_states = kDefaultMaxStates);
std::string graph_to_json(const SchreierGraph& g);

/// {"size": N, "values": [0, 1, ...]}
BooleanFunction read_function_json(const std::string& path);
BooleanFunction parse_function_json(const std::string& text, std::string name = "custom");
std::string function_to_json(const BooleanFunction& f);

/// Real-valued vector file {"size": N, "values": [...]}.
Eigen::VectorXd read_vector_json(const std::string& path);

/// `index,eigenvalue,multiplicity_group`.
std::string spectrum_to_csv(const Spectrum& s);
std::string spectrum_to_json(const Spectrum& s, bool with_vectors);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// %.17g.
std::string format_double(double x);

}  // namespace noiselab
