#include "noiselab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "noiselab/errors.hpp"

namespace noiselab {

using nlohmann::json;

namespace {

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw_error(ErrorCode::invalid_argument, what + " is not valid JSON: " + e.what());
  }
}

std::size_t read_size(const json& doc, const std::string& what) {
  require(doc.is_object() && doc.contains("size") && doc["size"].is_number_unsigned(),
          ErrorCode::invalid_argument, what + " needs a nonnegative integer \"size\"");
  return doc["size"].get<std::size_t>();
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::io, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorCode::io, "write failed for " + path);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SchreierGraph parse_graph_json(const std::string& text, std::size_t max_states) {
  const json doc = parse(text, "graph file");
  const std::size_t size = read_size(doc, "graph file");
  require(doc.contains("generators") && doc["generators"].is_array(),
          ErrorCode::invalid_argument, "graph file needs a \"generators\" array");
  std::vector<Permutation> gens;
  try {
    for (const auto& g : doc["generators"]) gens.push_back(g.get<Permutation>());
  } catch (const json::exception&) {
    throw_error(ErrorCode::invalid_argument, "generators must be arrays of state indices");
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    try {
      labels = doc["labels"].get<std::vector<std::string>>();
    } catch (const json::exception&) {
      throw_error(ErrorCode::invalid_argument, "labels must be strings");
    }
  }
  CustomOptions opts;
  opts.max_states = max_states;
  if (doc.contains("auto_close_inverses")) {
    require(doc["auto_close_inverses"].is_boolean(), ErrorCode::invalid_argument,
            "auto_close_inverses must be a boolean");
    opts.auto_close_inverses = doc["auto_close_inverses"].get<bool>();
  }
  return build_custom(size, std::move(gens), std::move(labels), opts);
}

SchreierGraph read_graph_json(const std::string& path, std::size_t max_states) {
  return parse_graph_json(read_text_file(path), max_states);
}

std::string graph_to_json(const SchreierGraph& g) {
  json doc;
  doc["size"] = g.size();
  doc["generators"] = json::array();
  doc["labels"] = json::array();
  for (const auto& gen : g.generators().generators()) {
    doc["generators"].push_back(gen.image);
    doc["labels"].push_back(gen.label);
  }
  return doc.dump() + "\n";
}

BooleanFunction parse_function_json(const std::string& text, std::string name) {
  const json doc = parse(text, "function file");
  const std::size_t size = read_size(doc, "function file");
  require(doc.contains("values") && doc["values"].is_array(), ErrorCode::invalid_argument,
          "function file needs a \"values\" array");
  std::vector<std::uint8_t> values;
  for (const auto& v : doc["values"]) {
    require(v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1),
            ErrorCode::invalid_argument, "function values must be 0 or 1");
    values.push_back(static_cast<std::uint8_t>(v.get<int>()));
  }
  require(values.size() == size, ErrorCode::invalid_argument,
          "function file: values length differs from size");
  return {std::move(values), std::move(name)};
}

BooleanFunction read_function_json(const std::string& path) {
  return parse_function_json(read_text_file(path), path);
}

std::string function_to_json(const BooleanFunction& f) {
  json doc;
  doc["size"] = f.size();
  doc["values"] = f.values();
  return doc.dump() + "\n";
}

Eigen::VectorXd read_vector_json(const std::string& path) {
  const json doc = parse(read_text_file(path), path);
  const std::size_t size = read_size(doc, "vector file");
  require(doc.contains("values") && doc["values"].is_array() && doc["values"].size() == size,
          ErrorCode::invalid_argument, "vector file needs \"values\" of length size");
  Eigen::VectorXd v(static_cast<Eigen::Index>(size));
  for (std::size_t i = 0; i < size; ++i) {
    require(doc["values"][i].is_number(), ErrorCode::invalid_argument,
            "vector values must be numbers");
    v[static_cast<Eigen::Index>(i)] = doc["values"][i].get<double>();
  }
  return v;
}

std::string spectrum_to_csv(const Spectrum& s) {
  std::string out = "index,eigenvalue,multiplicity_group\n";
  for (std::size_t j = 0; j < s.size(); ++j)
    out += std::to_string(j) + "," + format_double(s.eigenvalue(j)) + "," +
           std::to_string(s.group_of(j)) + "\n";
  return out;
}

std::string spectrum_to_json(const Spectrum& s, bool with_vectors) {
  json doc;
  doc["size"] = s.size();
  doc["eigenvalues"] = s.eigenvalues();
  json groups = json::array();
  for (const auto& g : s.eigenspaces())
    groups.push_back({{"eigenvalue", g.eigenvalue}, {"members", g.members}});
  doc["eigenspaces"] = groups;
  if (with_vectors) {
    json vecs = json::array();
    for (std::size_t j = 0; j < s.size(); ++j) {
      const Eigen::VectorXd v = s.vector(j);
      vecs.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    }
    doc["vectors"] = vecs;
  }
  return doc.dump() + "\n";
}

}  // namespace noiselab
