#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <functional>

#include "noiselab/errors.hpp"
#include "noiselab/io.hpp"
#include "noiselab/specs.hpp"

using namespace noiselab;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::invalid_argument;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("noiselab_" + name)).string();
}

}  // namespace

TEST(MiniSpec, Parsing) {
  const MiniSpec a = parse_mini_spec("torus:m=2,n=4");
  EXPECT_EQ(a.family, "torus");
  EXPECT_EQ(a.params.at("m"), "2");
  EXPECT_EQ(a.params.at("n"), "4");
  EXPECT_TRUE(parse_mini_spec("parity").params.empty());
  EXPECT_EQ(parse_mini_spec("custom:g.json").params.at("path"), "g.json");
  EXPECT_EQ(code_of([] { parse_mini_spec(""); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_mini_spec("torus:m=2,,n=3"); }), ErrorCode::invalid_argument);
}

TEST(GraphSpec, Families) {
  const SchreierGraph t = graph_from_spec("torus:m=3,n=2");
  EXPECT_EQ(t.size(), 9u);
  EXPECT_EQ(t.degree(), 4u);
  EXPECT_EQ(graph_from_spec("hypercube:n=3").states().tag().family, Family::hypercube);
  EXPECT_EQ(graph_from_spec("johnson:n=5,m=2").size(), 10u);
  EXPECT_EQ(graph_from_spec("sym:n=4").size(), 24u);
}

TEST(GraphSpec, Errors) {
  EXPECT_EQ(code_of([] { graph_from_spec("torus:m=2"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { graph_from_spec("torus:m=2,n=x"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { graph_from_spec("torus:m=2,n=3,q=1"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { graph_from_spec("lattice:n=3"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { graph_from_spec("torus:m=2,n=20"); }), ErrorCode::size_limit);
  EXPECT_EQ(code_of([] { graph_from_spec("/nonexistent/g.json"); }), ErrorCode::io);
}

TEST(FunctionSpec, NamedParsing) {
  const NamedFunctionSpec t = parse_named_function("tribes:l=2,k=3");
  EXPECT_EQ(t.kind, NamedKind::tribes);
  EXPECT_EQ(t.tribes, 2);
  EXPECT_EQ(t.members, 3);
  EXPECT_EQ(parse_named_function("constant:c=0").value, 0);
  EXPECT_EQ(parse_named_function("dictator").index, 1);
  EXPECT_EQ(parse_named_function("slice:m=2").level, 2);
  const NamedFunctionSpec f = parse_named_function("fixes:i=2,j=3");
  EXPECT_EQ(f.index, 2);
  EXPECT_EQ(f.image, 3);
  EXPECT_EQ(code_of([] { parse_named_function("parity:x=1"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_named_function("xor"); }), ErrorCode::invalid_argument);
}

TEST(FunctionSpec, OnGraph) {
  const SchreierGraph g = graph_from_spec("torus:m=2,n=4");
  EXPECT_EQ(function_from_spec(g, "tribes:l=2,k=2").ones(), 7u);
  EXPECT_EQ(function_from_spec(g, "parity").ones(), 8u);
  const SchreierGraph t3 = graph_from_spec("torus:m=3,n=2");
  EXPECT_THROW(function_from_spec(t3, "parity"), Error);
}

TEST(GraphJson, RoundTrip) {
  for (const char* spec : {"torus:m=3,n=2", "johnson:n=5,m=2", "sym:n=4"}) {
    const SchreierGraph g = graph_from_spec(spec);
    const SchreierGraph back = parse_graph_json(graph_to_json(g));
    ASSERT_EQ(back.size(), g.size());
    ASSERT_EQ(back.degree(), g.degree());
    for (std::size_t u = 0; u < g.degree(); ++u) {
      EXPECT_EQ(back.generators()[u].label, g.generators()[u].label);
      for (StateIndex x = 0; x < g.size(); ++x) EXPECT_EQ(back.apply(x, u), g.apply(x, u));
    }
    EXPECT_EQ(graph_to_json(back), graph_to_json(g));
  }
}

TEST(GraphJson, FileAndErrors) {
  const std::string path = temp_path("cycle.json");
  write_text_file(path, R"({"size": 3, "generators": [[1,2,0]], "auto_close_inverses": true})");
  const SchreierGraph g = graph_from_spec(path);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.degree(), 2u);
  EXPECT_EQ(graph_from_spec("custom:path=" + path).degree(), 2u);
  std::filesystem::remove(path);

  EXPECT_EQ(code_of([] { parse_graph_json("{"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_graph_json(R"({"generators": []})"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_graph_json(R"({"size": 3, "generators": [["a"]]})"); }),
            ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_graph_json(R"({"size": 3, "generators": [[1,2,0]]})"); }),
            ErrorCode::validation);
  EXPECT_EQ(code_of([] { parse_graph_json(R"({"size": 3, "generators": [[1,1,0]]})"); }),
            ErrorCode::validation);
}

TEST(FunctionJson, RoundTripAndErrors) {
  const SchreierGraph g = graph_from_spec("torus:m=2,n=3");
  const BooleanFunction f = function_from_spec(g, "majority");
  const BooleanFunction back = parse_function_json(function_to_json(f));
  EXPECT_EQ(back.values(), f.values());

  const std::string path = temp_path("f.json");
  write_text_file(path, function_to_json(f));
  EXPECT_EQ(function_from_spec(g, path).values(), f.values());
  const SchreierGraph big = graph_from_spec("torus:m=2,n=4");
  EXPECT_EQ(code_of([&] { function_from_spec(big, path); }), ErrorCode::invalid_argument);
  std::filesystem::remove(path);

  EXPECT_EQ(code_of([] { parse_function_json(R"({"size": 2, "values": [0, 2]})"); }),
            ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_function_json(R"({"size": 3, "values": [0, 1]})"); }),
            ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_function_json(R"({"size": -1, "values": []})"); }),
            ErrorCode::invalid_argument);
}

TEST(Format, DoublesRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -0.0, 5e-324}) {
    EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(SpectrumCsv, Header) {
  const std::string csv = spectrum_to_csv(decompose(graph_from_spec("torus:m=2,n=2")));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,eigenvalue,multiplicity_group");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}
