// Configuration files, network files and run outputs.
//
// Network file (format tag "ddd-net/1"):
//   {"format": "ddd-net/1", "epsilon": 1.0,
//    "lattice": [[1,0,0],[0,1,0],[0,0,1]],        // primitive vectors
//    "loops": [{"burgers": [1,0,0], "nodes": [[x,y,z], ...]}, ...]}
// Doubles are written in the shortest form that reads back to the same value.
#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "ddd/elasticity.hpp"
#include "ddd/evolution.hpp"
#include "ddd/geometry.hpp"
#include "ddd/mobility.hpp"

namespace ddd {

struct ElasticitySpec {
  bool isotropic = true;
  double lambda = 1.0;
  double mu = 1.0;
  std::array<double, 81> components{};

  ElasticityTensor make() const;
};

struct OutputSpec {
  std::size_t every = 10;  // snapshot cadence in steps
  bool svg = false;
  std::string plane = "xy";
};

struct SimulationConfig {
  double epsilon = 1.0;
  ElasticitySpec elasticity;
  MobilityModel mobility;
  int sphere_order = 24;
  int line_order = 4;
  EvolutionOptions evolution;
  OutputSpec output;
  std::uint64_t seed = 1;

  SimulationConfig();
};

// Throws ConfigError naming the key (or the line and column of a syntax error).
SimulationConfig parse_config(const std::string& text);
SimulationConfig load_config(const std::string& path);
// Every field, defaults included.
std::string dump_config(const SimulationConfig& cfg);

// Throws InvalidArgument for malformed networks (with the loop index).
DislocationNetwork parse_network(const std::string& text);
DislocationNetwork load_network(const std::string& path);
std::string dump_network(const DislocationNetwork& S);
void save_network(const DislocationNetwork& S, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// %.17g
std::string format_double(double x);

class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::string& path);
  void write(const DiagnosticsRow& row);

 private:
  std::ofstream out_;
};

// One JSON object per line: {"step":..,"t":..,"kind":..,"detail":{..}}
std::string event_json(const Event& e);

}  // namespace ddd
