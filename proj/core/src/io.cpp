#include "ddd/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "ddd/error.hpp"
#include "json.hpp"

namespace ddd {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError((path.empty() ? std::string("config") : path) + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(join(path, k) + ": unknown key");
}

double get_number(const json& j, const std::string& key, const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key) + ": must be finite");
  return x;
}

std::int64_t get_integer(const json& j, const std::string& key, const std::string& path, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key) + ": expected an integer");
  return v.get<std::int64_t>();
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(std::string(what) + ": syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(col));
  }
}

Vec3 to_vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) throw InvalidArgument(where + ": expected [x, y, z]");
  Vec3 r;
  for (int i = 0; i < 3; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) throw InvalidArgument(where + ": expected numbers");
    r[i] = v[static_cast<std::size_t>(i)].get<double>();
  }
  return r;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

ElasticityTensor ElasticitySpec::make() const {
  if (isotropic) return make_isotropic(lambda, mu);
  return ElasticityTensor::from_components(components);
}

SimulationConfig::SimulationConfig() { evolution.step.t_end = 1000.0; }

SimulationConfig parse_config(const std::string& text) {
  const json j = parse_json(text, "config");
  check_keys(j, "", {"epsilon", "elasticity", "mobility", "quadrature", "step_policy", "remesh", "theta_max", "kappa",
                     "force", "output", "seed"});
  SimulationConfig c;
  require(j.contains("epsilon"), "epsilon", "is required");
  c.epsilon = get_number(j, "epsilon", "", 1.0);
  require(c.epsilon > 0.0, "epsilon", "must be positive");

  if (j.contains("elasticity")) {
    const json& e = j.at("elasticity");
    check_keys(e, "elasticity", {"isotropic", "components"});
    require(e.size() == 1, "elasticity", "give exactly one of isotropic, components");
    if (e.contains("isotropic")) {
      const json& iso = e.at("isotropic");
      check_keys(iso, "elasticity.isotropic", {"lambda", "mu"});
      c.elasticity.isotropic = true;
      c.elasticity.lambda = get_number(iso, "lambda", "elasticity.isotropic", 1.0);
      c.elasticity.mu = get_number(iso, "mu", "elasticity.isotropic", 1.0);
      require(c.elasticity.mu > 0.0, "elasticity.isotropic.mu", "must be positive");
      require(c.elasticity.lambda + 2.0 * c.elasticity.mu > 0.0, "elasticity.isotropic.lambda",
              "lambda + 2 mu must be positive");
    } else {
      const json& comp = e.at("components");
      require(comp.is_array() && comp.size() == 81, "elasticity.components", "expected 81 numbers");
      c.elasticity.isotropic = false;
      for (std::size_t i = 0; i < 81; ++i) {
        require(comp[i].is_number(), "elasticity.components", "expected 81 numbers");
        c.elasticity.components[i] = comp[i].get<double>();
      }
      const ElasticityTensor C = c.elasticity.make();
      require(validate_symmetries(C), "elasticity.components", "tensor lacks the major and minor symmetries");
      require(estimate_lh_constant(C, 2000) > 0.0, "elasticity.components", "tensor is not strongly elliptic");
    }
  }

  if (j.contains("mobility")) {
    const json& m = j.at("mobility");
    check_keys(m, "mobility", {"alpha", "isotropic", "bcc", "screw_tolerance"});
    c.mobility.alpha = get_number(m, "alpha", "mobility", 1.0);
    require(c.mobility.alpha > 0.0, "mobility.alpha", "must be positive");
    c.mobility.screw_tolerance = get_number(m, "screw_tolerance", "mobility", 1e-6);
    require(c.mobility.screw_tolerance >= 0.0 && c.mobility.screw_tolerance < 0.5, "mobility.screw_tolerance",
            "must be in [0, 0.5)");
    require(!(m.contains("isotropic") && m.contains("bcc")), "mobility", "give at most one of isotropic, bcc");
    if (m.contains("bcc")) {
      const json& b = m.at("bcc");
      check_keys(b, "mobility.bcc", {"B_eg", "B_ec", "B_s"});
      BccDrag d;
      d.B_eg = get_number(b, "B_eg", "mobility.bcc", 1.0);
      d.B_ec = get_number(b, "B_ec", "mobility.bcc", 1.0);
      d.B_s = get_number(b, "B_s", "mobility.bcc", 1.0);
      require(d.B_eg > 0.0, "mobility.bcc.B_eg", "must be positive");
      require(d.B_ec > 0.0, "mobility.bcc.B_ec", "must be positive");
      require(d.B_s > 0.0, "mobility.bcc.B_s", "must be positive");
      c.mobility.kind = d;
    } else if (m.contains("isotropic")) {
      const json& i = m.at("isotropic");
      check_keys(i, "mobility.isotropic", {"m"});
      IsotropicDrag d;
      d.m = get_number(i, "m", "mobility.isotropic", 1.0);
      require(d.m > 0.0, "mobility.isotropic.m", "must be positive");
      c.mobility.kind = d;
    }
  }

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    check_keys(q, "quadrature", {"sphere_order", "line_order"});
    c.sphere_order = static_cast<int>(get_integer(q, "sphere_order", "quadrature", 24));
    c.line_order = static_cast<int>(get_integer(q, "line_order", "quadrature", 4));
    require(c.sphere_order >= 2 && c.sphere_order <= 256, "quadrature.sphere_order", "must be in [2, 256]");
    require(c.line_order >= 1 && c.line_order <= 32, "quadrature.line_order", "must be in [1, 32]");
  }

  StepPolicy& sp = c.evolution.step;
  if (j.contains("step_policy")) {
    const json& s = j.at("step_policy");
    check_keys(s, "step_policy", {"c1", "c2", "dt_max", "dt_min", "t_end", "max_steps"});
    sp.c1 = get_number(s, "c1", "step_policy", sp.c1);
    sp.c2 = get_number(s, "c2", "step_policy", sp.c2);
    sp.dt_max = get_number(s, "dt_max", "step_policy", sp.dt_max);
    sp.dt_min = get_number(s, "dt_min", "step_policy", sp.dt_min);
    sp.t_end = get_number(s, "t_end", "step_policy", sp.t_end);
    const std::int64_t ms = get_integer(s, "max_steps", "step_policy", static_cast<std::int64_t>(sp.max_steps));
    require(ms > 0, "step_policy.max_steps", "must be positive");
    sp.max_steps = static_cast<std::size_t>(ms);
  }
  if (j.contains("remesh")) {
    const json& r = j.at("remesh");
    check_keys(r, "remesh", {"h_min", "h_max"});
    c.evolution.h_min = get_number(r, "h_min", "remesh", c.evolution.h_min);
    c.evolution.h_max = get_number(r, "h_max", "remesh", c.evolution.h_max);
  }
  c.evolution.theta_max = get_number(j, "theta_max", "", c.evolution.theta_max);
  c.evolution.kappa = get_number(j, "kappa", "", c.evolution.kappa);
  if (j.contains("force")) {
    const json& f = j.at("force");
    require(f.is_string(), "force", "expected \"variational\" or \"line\"");
    const std::string s = f.get<std::string>();
    if (s == "variational") c.evolution.force = ForceModel::Variational;
    else if (s == "line") c.evolution.force = ForceModel::LineFormula;
    else throw ConfigError("force: expected \"variational\" or \"line\"");
  }
  c.evolution.validate();
  require(c.evolution.h_min * 3.0 <= c.evolution.kappa, "kappa", "must be at least 3 h_min so that remeshing never sees a shorter loop");

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"every", "svg", "plane"});
    const std::int64_t every = get_integer(o, "every", "output", 10);
    require(every > 0, "output.every", "must be positive");
    c.output.every = static_cast<std::size_t>(every);
    if (o.contains("svg")) {
      require(o.at("svg").is_boolean(), "output.svg", "expected true or false");
      c.output.svg = o.at("svg").get<bool>();
    }
    if (o.contains("plane")) {
      require(o.at("plane").is_string(), "output.plane", "expected one of xy, yz, xz");
      c.output.plane = o.at("plane").get<std::string>();
      require(c.output.plane == "xy" || c.output.plane == "yz" || c.output.plane == "xz", "output.plane",
              "expected one of xy, yz, xz");
    }
  }
  if (j.contains("seed")) {
    require(j.at("seed").is_number_unsigned(), "seed", "expected a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  return c;
}

SimulationConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string dump_config(const SimulationConfig& c) {
  json j;
  j["epsilon"] = c.epsilon;
  if (c.elasticity.isotropic) {
    j["elasticity"] = {{"isotropic", {{"lambda", c.elasticity.lambda}, {"mu", c.elasticity.mu}}}};
  } else {
    j["elasticity"] = {{"components", c.elasticity.components}};
  }
  json m = {{"alpha", c.mobility.alpha}, {"screw_tolerance", c.mobility.screw_tolerance}};
  if (const auto* iso = std::get_if<IsotropicDrag>(&c.mobility.kind)) {
    m["isotropic"] = {{"m", iso->m}};
  } else {
    const auto& b = std::get<BccDrag>(c.mobility.kind);
    m["bcc"] = {{"B_eg", b.B_eg}, {"B_ec", b.B_ec}, {"B_s", b.B_s}};
  }
  j["mobility"] = m;
  j["quadrature"] = {{"sphere_order", c.sphere_order}, {"line_order", c.line_order}};
  const StepPolicy& s = c.evolution.step;
  j["step_policy"] = {{"c1", s.c1},     {"c2", s.c2},       {"dt_max", s.dt_max},
                      {"dt_min", s.dt_min}, {"t_end", s.t_end}, {"max_steps", s.max_steps}};
  j["remesh"] = {{"h_min", c.evolution.h_min}, {"h_max", c.evolution.h_max}};
  j["theta_max"] = c.evolution.theta_max;
  j["kappa"] = c.evolution.kappa;
  j["force"] = c.evolution.force == ForceModel::Variational ? "variational" : "line";
  j["output"] = {{"every", c.output.every}, {"svg", c.output.svg}, {"plane", c.output.plane}};
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

DislocationNetwork parse_network(const std::string& text) {
  json j;
  try {
    j = parse_json(text, "network");
  } catch (const ConfigError& e) {
    throw InvalidArgument(e.what());
  }
  if (!j.is_object()) throw InvalidArgument("network: expected an object");
  for (const auto& [k, v] : j.items())
    if (k != "format" && k != "epsilon" && k != "lattice" && k != "loops") throw InvalidArgument("network: unknown key " + k);
  if (!j.contains("format") || j.at("format") != "ddd-net/1") throw InvalidArgument("network: format must be \"ddd-net/1\"");
  DislocationNetwork S;
  if (!j.contains("epsilon") || !j.at("epsilon").is_number()) throw InvalidArgument("network: epsilon is required");
  S.epsilon = j.at("epsilon").get<double>();
  if (j.contains("lattice")) {
    const json& L = j.at("lattice");
    if (!L.is_array() || L.size() != 3) throw InvalidArgument("network: lattice must list three vectors");
    Mat3 B;
    for (int c = 0; c < 3; ++c) {
      const Vec3 v = to_vec3(L[static_cast<std::size_t>(c)], "network: lattice");
      for (int r = 0; r < 3; ++r) B(r, c) = v[r];
    }
    S.lattice = Lattice::make(B);
  }
  if (!j.contains("loops") || !j.at("loops").is_array()) throw InvalidArgument("network: loops must be an array");
  std::size_t li = 0;
  for (const json& lj : j.at("loops")) {
    const std::string where = "network: loop " + std::to_string(li);
    if (!lj.is_object() || !lj.contains("burgers") || !lj.contains("nodes"))
      throw InvalidArgument(where + ": needs burgers and nodes");
    const json& b = lj.at("burgers");
    if (!b.is_array() || b.size() != 3) throw InvalidArgument(where + ": burgers must be three integers");
    std::array<int, 3> n{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!b[i].is_number_integer()) throw InvalidArgument(where + ": burgers must be three integers");
      n[i] = b[i].get<int>();
    }
    Loop l;
    try {
      l.burgers = BurgersVector::make(S.lattice, n);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(where + ": " + e.what());
    }
    if (!lj.at("nodes").is_array()) throw InvalidArgument(where + ": nodes must be an array");
    for (const json& p : lj.at("nodes")) l.nodes.push_back(to_vec3(p, where));
    S.loops.push_back(std::move(l));
    ++li;
  }
  validate(S);
  return S;
}

DislocationNetwork load_network(const std::string& path) { return parse_network(read_file(path)); }

std::string dump_network(const DislocationNetwork& S) {
  json j;
  j["format"] = "ddd-net/1";
  j["epsilon"] = S.epsilon;
  json L = json::array();
  for (int c = 0; c < 3; ++c) L.push_back(json::array({S.lattice.basis(0, c), S.lattice.basis(1, c), S.lattice.basis(2, c)}));
  j["lattice"] = L;
  json loops = json::array();
  for (const auto& l : S.loops) {
    json nodes = json::array();
    for (const auto& x : l.nodes) nodes.push_back(vec_json(x));
    loops.push_back({{"burgers", l.burgers.lattice_coords}, {"nodes", nodes}});
  }
  j["loops"] = loops;
  return j.dump() + "\n";
}

void save_network(const DislocationNetwork& S, const std::string& path) { write_file(path, dump_network(S)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write");
  out << text;
  if (!out) throw Error(path + ": write failed");
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) throw Error(path + ": cannot write");
  const auto& cols = diagnostics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
  out_ << "\n";
}

void DiagnosticsWriter::write(const DiagnosticsRow& row) {
  const auto v = diagnostics_values(row);
  for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? "," : "") << format_double(v[i]);
  out_ << "\n";
  out_.flush();
}

std::string event_json(const Event& e) {
  json j = {{"step", e.step}, {"t", e.t}, {"kind", e.kind}};
  j["detail"] = e.detail.empty() ? json::object() : json::parse(e.detail);
  return j.dump();
}

}  // namespace ddd
