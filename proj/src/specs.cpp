#include "noiselab/specs.hpp"

#include <charconv>

#include "noiselab/errors.hpp"
#include "noiselab/io.hpp"

namespace noiselab {

namespace {

bool ends_with_json(const std::string& s) {
  return s.size() > 5 && s.compare(s.size() - 5, 5, ".json") == 0;
}

int to_int(const MiniSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  require(it != spec.params.end(), ErrorCode::invalid_argument,
          spec.family + " needs parameter '" + key + "'");
  int value = 0;
  const std::string& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  require(ec == std::errc() && ptr == s.data() + s.size(), ErrorCode::invalid_argument,
          "parameter '" + key + "' is not an integer: " + s);
  return value;
}

void allow_only(const MiniSpec& spec, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : spec.params) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    require(known, ErrorCode::invalid_argument,
            "unknown parameter '" + k + "' for " + spec.family);
  }
}

}  // namespace

MiniSpec parse_mini_spec(const std::string& text) {
  MiniSpec spec;
  const auto colon = text.find(':');
  spec.family = text.substr(0, colon);
  require(!spec.family.empty(), ErrorCode::invalid_argument, "empty spec");
  if (colon == std::string::npos) return spec;
  const std::string rest = text.substr(colon + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      require(!item.empty(), ErrorCode::invalid_argument, "empty parameter in spec: " + text);
      spec.params["path"] = item;
    } else {
      spec.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return spec;
}

SchreierGraph graph_from_spec(const std::string& text, std::size_t max_states) {
  if (ends_with_json(text) && text.rfind("custom:", 0) != 0)
    return read_graph_json(text, max_states);
  const MiniSpec spec = parse_mini_spec(text);
  const BuildOptions opts{max_states};
  if (spec.family == "torus") {
    allow_only(spec, {"m", "n"});
    return build_torus(to_int(spec, "m"), to_int(spec, "n"), opts);
  }
  if (spec.family == "hypercube") {
    allow_only(spec, {"n"});
    return build_hypercube(to_int(spec, "n"), opts);
  }
  if (spec.family == "johnson") {
    allow_only(spec, {"n", "m"});
    return build_johnson(to_int(spec, "n"), to_int(spec, "m"), opts);
  }
  if (spec.family == "sym") {
    allow_only(spec, {"n"});
    return build_transposition_cayley(to_int(spec, "n"), opts);
  }
  if (spec.family == "custom") {
    allow_only(spec, {"path"});
    auto it = spec.params.find("path");
    require(it != spec.params.end(), ErrorCode::invalid_argument, "custom graph needs a path");
    return read_graph_json(it->second, max_states);
  }
  throw_error(ErrorCode::invalid_argument, "unknown graph family: " + spec.family);
}

NamedFunctionSpec parse_named_function(const std::string& text) {
  const MiniSpec spec = parse_mini_spec(text);
  NamedFunctionSpec out;
  if (spec.family == "constant") {
    allow_only(spec, {"c"});
    out.kind = NamedKind::constant;
    out.value = spec.params.count("c") ? to_int(spec, "c") : 1;
  } else if (spec.family == "dictator") {
    allow_only(spec, {"i"});
    out.kind = NamedKind::dictator;
    out.index = spec.params.count("i") ? to_int(spec, "i") : 1;
  } else if (spec.family == "parity") {
    allow_only(spec, {});
    out.kind = NamedKind::parity;
  } else if (spec.family == "majority") {
    allow_only(spec, {});
    out.kind = NamedKind::majority;
  } else if (spec.family == "tribes") {
    allow_only(spec, {"l", "k"});
    out.kind = NamedKind::tribes;
    out.tribes = to_int(spec, "l");
    out.members = to_int(spec, "k");
  } else if (spec.family == "slice") {
    allow_only(spec, {"m"});
    out.kind = NamedKind::slice;
    out.level = to_int(spec, "m");
  } else if (spec.family == "fixes") {
    allow_only(spec, {"i", "j"});
    out.kind = NamedKind::fixes;
    out.index = to_int(spec, "i");
    out.image = to_int(spec, "j");
  } else {
    throw_error(ErrorCode::invalid_argument, "unknown function: " + spec.family);
  }
  return out;
}

BooleanFunction function_from_spec(const SchreierGraph& g, const std::string& text) {
  if (ends_with_json(text)) {
    std::string path = text;
    if (path.rfind("custom:", 0) == 0) path = parse_mini_spec(text).params.at("path");
    BooleanFunction f = read_function_json(path);
    require(f.size() == g.size(), ErrorCode::invalid_argument,
            "function file size does not match the graph");
    return f;
  }
  return make_named(g, parse_named_function(text));
}

}  // namespace noiselab
