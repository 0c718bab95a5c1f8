#include "ddd/io.hpp"

#include <cstdio>
#include <filesystem>

#include "ddd/error.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ddd;

TEST_CASE("minimal config fills the defaults") {
  const SimulationConfig c = parse_config(R"({"epsilon": 0.1})");
  CHECK(c.epsilon == 0.1);
  CHECK(c.sphere_order == 24);
  CHECK(c.evolution.step.c1 == 0.1);
  CHECK(c.evolution.h_min == 0.3);
  CHECK(c.evolution.kappa == 3.0);
  CHECK(c.evolution.theta_max == 50.0);
  CHECK(c.output.every == 10);
  const std::string dumped = dump_config(c);
  CHECK(dumped.find("\"step_policy\"") != std::string::npos);
  CHECK(dump_config(parse_config(dumped)) == dumped);
}

TEST_CASE("config errors name the key") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"epsilon": -1})"), doctest::Contains("epsilon"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({})"), doctest::Contains("epsilon"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"epsilon": 1, "step_policy": {"c3": 1}})"),
                       doctest::Contains("step_policy.c3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"epsilon": 1, "remesh": {"h_min": 1.5}})"), doctest::Contains("remesh.h_max"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("{\"epsilon\": 1,\n  \"kappa\": }"), doctest::Contains("line 2"), ConfigError);
}

TEST_CASE("mobility and elasticity sections") {
  const SimulationConfig c = parse_config(
      R"({"epsilon": 1, "mobility": {"alpha": 0.5, "bcc": {"B_eg": 2, "B_ec": 0.5, "B_s": 1}},
          "elasticity": {"isotropic": {"lambda": 2, "mu": 0.5}}})");
  CHECK(c.mobility.alpha == 0.5);
  CHECK(std::holds_alternative<BccDrag>(c.mobility.kind));
  CHECK(c.elasticity.make()(0, 0, 0, 0) == doctest::Approx(3.0));
  CHECK(dump_config(parse_config(dump_config(c))) == dump_config(c));
}

TEST_CASE("network round trip is bit exact") {
  DislocationNetwork S = testing::wobbly_pair(12);
  S.loops[0].nodes[0][0] = 0.1 + 0.2;  // needs all 17 digits
  const std::string text = dump_network(S);
  const DislocationNetwork T = parse_network(text);
  CHECK(T.epsilon == S.epsilon);
  for (std::size_t i = 0; i < S.loops.size(); ++i) {
    CHECK(T.loops[i].nodes == S.loops[i].nodes);
    CHECK(T.loops[i].burgers.lattice_coords == S.loops[i].burgers.lattice_coords);
  }
  CHECK(dump_network(T) == text);
}

TEST_CASE("malformed networks name the loop") {
  CHECK_THROWS_WITH_AS(parse_network(R"({"format": "ddd-net/1", "epsilon": 1, "loops": [
      {"burgers": [1, 0, 0], "nodes": [[0,0,0],[1,0,0],[0,1,0]]},
      {"burgers": [1, 0.5, 0], "nodes": [[0,0,0],[1,0,0],[0,1,0]]}]})"),
                       doctest::Contains("loop 1"), InvalidArgument);
  CHECK_THROWS_AS(parse_network(R"({"format": "ddd-net/2", "epsilon": 1, "loops": []})"), InvalidArgument);
  CHECK_THROWS_AS(parse_network(R"({"format": "ddd-net/1", "loops": []})"), InvalidArgument);
}

TEST_CASE("diagnostics writer emits the header and one row per step") {
  const std::string path = (std::filesystem::temp_directory_path() / "ddd_unit_diag.csv").string();
  {
    DiagnosticsWriter w(path);
    DiagnosticsRow r;
    r.step = 3;
    r.t = 0.1;
    w.write(r);
  }
  const std::string text = read_file(path);
  std::remove(path.c_str());
  CHECK(text.rfind("step,t,dt,", 0) == 0);
  CHECK(text.find("\n3,0.10000000000000001,") != std::string::npos);
}

TEST_CASE("events are single-line JSON") {
  Event e;
  e.step = 7;
  e.t = 1.5;
  e.kind = "remesh";
  e.detail = R"({"loop": 0})";
  const std::string s = event_json(e);
  CHECK(s.find('\n') == std::string::npos);
  CHECK(s.find("\"kind\":\"remesh\"") != std::string::npos);
  CHECK(s.find("\"loop\":0") != std::string::npos);
}

TEST_CASE("missing files are configuration errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/ddd.json"), ConfigError);
  CHECK(format_double(0.5) == "0.5");
}
