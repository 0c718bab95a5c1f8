// ddd: batch driver for the dislocation dynamics library.
//
// Exit codes: 0 ok, 1 usage, 2 configuration or input error, 3 numerical
// failure, 4 blow-up (simulate --fail-on-blowup only).
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ddd/checks.hpp"
#include "ddd/energy_force.hpp"
#include "ddd/error.hpp"
#include "ddd/evolution.hpp"
#include "ddd/io.hpp"
#include "ddd/svg.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBlowup = 4;

struct Inputs {
  ddd::SimulationConfig cfg;
  ddd::DislocationNetwork net;
};

Inputs load_inputs(const std::string& net_path, const std::string& cfg_path) {
  Inputs in;
  in.net = ddd::load_network(net_path);
  if (!cfg_path.empty()) {
    in.cfg = ddd::load_config(cfg_path);
    if (in.cfg.epsilon != in.net.epsilon) {
      std::cerr << "warning: network epsilon " << in.net.epsilon << " replaced by config epsilon " << in.cfg.epsilon
                << "\n";
      in.net.epsilon = in.cfg.epsilon;
    }
  } else {
    in.cfg.epsilon = in.net.epsilon;
  }
  for (std::size_t g : ddd::resolution_advisory(in.net)) {
    std::cerr << "note: segment " << g << " is longer than epsilon; consider refining\n";
    break;
  }
  return in;
}

ddd::KernelEvaluator make_evaluator(const ddd::SimulationConfig& cfg) {
  return ddd::KernelEvaluator(cfg.elasticity.make(), ddd::MollifierProfile{cfg.epsilon},
                              ddd::KernelEvaluator::Options{cfg.sphere_order, -1});
}

std::string snapshot_name(std::size_t step, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "net_%06zu.%s", step, ext);
  return buf;
}

int cmd_simulate(const std::string& input, const std::string& config, const std::string& out_dir, bool svg,
                 bool fail_on_blowup) {
  Inputs in = load_inputs(input, config);
  fs::create_directories(fs::path(out_dir) / "snapshots");
  ddd::write_file((fs::path(out_dir) / "config.json").string(), ddd::dump_config(in.cfg));
  const ddd::KernelEvaluator ev = make_evaluator(in.cfg);
  const ddd::Evolution evo(ev, in.cfg.mobility, ddd::make_line_rule(in.cfg.line_order), in.cfg.evolution);
  ddd::EvolutionState st = evo.start(in.net);
  ddd::DiagnosticsWriter diag((fs::path(out_dir) / "diagnostics.csv").string());
  std::ofstream events(fs::path(out_dir) / "events.jsonl", std::ios::binary);
  const bool want_svg = svg || in.cfg.output.svg;
  auto snapshot = [&](const ddd::EvolutionState& s) {
    if (s.network.empty()) return;
    const fs::path dir = fs::path(out_dir) / "snapshots";
    ddd::save_network(s.network, (dir / snapshot_name(s.step, "json")).string());
    if (want_svg) ddd::render_svg(s.network, in.cfg.output.plane, (dir / snapshot_name(s.step, "svg")).string());
  };
  std::size_t rows_written = 0, events_written = 0;
  auto flush = [&](const ddd::EvolutionState& s) {
    for (; rows_written < s.diagnostics.size(); ++rows_written) diag.write(s.diagnostics[rows_written]);
    for (; events_written < s.events.size(); ++events_written) events << ddd::event_json(s.events[events_written]) << "\n";
    events.flush();
  };
  snapshot(st);
  std::size_t last_snapshot = 0;
  evo.run(st, [&](const ddd::EvolutionState& s) {
    flush(s);
    if (s.step % in.cfg.output.every == 0) {
      snapshot(s);
      last_snapshot = s.step;
    }
  });
  flush(st);
  if (last_snapshot != st.step) snapshot(st);
  std::cout << "terminated: " << st.termination << " after " << st.step << " steps at t = " << st.time << "\n";
  if (st.termination == "blowup" && fail_on_blowup) return kExitBlowup;
  return kExitOk;
}

int cmd_energy(const std::string& input, const std::string& config, const std::string& surface, double tau) {
  Inputs in = load_inputs(input, config);
  const ddd::KernelEvaluator ev = make_evaluator(in.cfg);
  const ddd::EnergyBreakdown e = ddd::energy_line(in.net, ev, ddd::make_line_rule(in.cfg.line_order));
  json out = {{"energy", e.total}, {"loops", e.loops}};
  json pairs = json::array();
  for (std::size_t i = 0; i < e.loops; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < e.loops; ++j) row.push_back(e.at(i, j));
    pairs.push_back(row);
  }
  out["pairs"] = pairs;
  if (!surface.empty()) {
    std::vector<ddd::SpanningSurface> T;
    for (std::size_t i = 0; i < in.net.loops.size(); ++i) {
      const ddd::Loop& l = in.net.loops[i];
      if (surface == "disk") {
        T.push_back(ddd::make_planar_surface(l, static_cast<int>(i)));
      } else {
        ddd::Vec3 c;
        for (const auto& x : l.nodes) c += x;
        c = c / static_cast<double>(l.size());
        ddd::Vec3 n;
        for (std::size_t k = 0; k < l.size(); ++k) n += ddd::cross(l.node(k) - c, l.node(k + 1) - c);
        T.push_back(ddd::make_cone_surface(l, c + 2.0 * in.cfg.epsilon * ddd::normalized(n), static_cast<int>(i)));
      }
    }
    ddd::SurfaceQuadratureOptions opt;
    opt.tau = tau;
    out["surface_energy"] = ddd::energy_surface(T, ev, opt);
    out["surface"] = surface;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_force(const std::string& input, const std::string& config, const std::string& formula) {
  Inputs in = load_inputs(input, config);
  const ddd::KernelEvaluator ev = make_evaluator(in.cfg);
  const auto rule = ddd::make_line_rule(in.cfg.line_order);
  const ddd::ForceField f =
      formula == "line" ? ddd::pk_force(in.net, ev, rule) : ddd::variational_force(in.net, ev, rule);
  std::cout << "loop,node,x,y,z,fx,fy,fz\n";
  std::size_t g = 0;
  for (std::size_t li = 0; li < in.net.loops.size(); ++li)
    for (std::size_t k = 0; k < in.net.loops[li].size(); ++k, ++g) {
      const ddd::Vec3& x = in.net.loops[li].nodes[k];
      const ddd::Vec3& v = f.force[g];
      std::cout << li << "," << k;
      for (double c : {x[0], x[1], x[2], v[0], v[1], v[2]}) std::cout << "," << ddd::format_double(c);
      std::cout << "\n";
    }
  return kExitOk;
}

int cmd_kernel_table(const std::string& config, const std::string& kernel, double r_min, double r_max, int n,
                     const std::vector<double>& dir) {
  ddd::SimulationConfig cfg;
  if (!config.empty()) cfg = ddd::load_config(config);
  if (dir.size() != 3) throw ddd::ConfigError("--direction: expected three numbers");
  if (!(r_min > 0.0 && r_max > r_min && n >= 2)) throw ddd::ConfigError("--r-min, --r-max, --n: need 0 < r_min < r_max and n >= 2");
  const ddd::Vec3 d = ddd::normalized(ddd::Vec3(dir[0], dir[1], dir[2]));
  const ddd::KernelEvaluator ev = make_evaluator(cfg);
  std::cout << "r";
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int e = 0; e < 3; ++e) std::cout << "," << kernel << a << b << c << e;
  std::cout << "\n";
  for (int i = 0; i < n; ++i) {
    const double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (n - 1));
    const ddd::Tensor4 T = kernel == "J" ? ev.J(r * d) : ev.K(r * d);
    std::cout << ddd::format_double(r);
    for (double x : T.c) std::cout << "," << ddd::format_double(x);
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_check(int order, double scale, std::uint64_t seed) {
  ddd::CheckOptions opt;
  opt.sphere_order = order;
  opt.normalization = ddd::kGaussianNormalization * scale;
  opt.seed = seed;
  bool all = true;
  ddd::run_checks(opt, [&](const ddd::CheckResult& r) {
    all = all && r.passed;
    std::printf("%-4s %-26s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
  });
  return all ? kExitOk : kExitNumerical;
}

int cmd_render(const std::string& input, const std::string& plane, const std::string& out) {
  const ddd::DislocationNetwork S = ddd::load_network(input);
  ddd::render_svg(S, plane, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized discrete dislocation dynamics"};
  app.require_subcommand(1);

  std::string input, config, out_dir, surface, formula = "variational", kernel = "K", plane = "xy", out;
  bool svg = false, fail_on_blowup = false;
  double tau = 1.0, r_min = 0.01, r_max = 1000.0, scale = 1.0;
  int n = 41, order = 24;
  std::uint64_t seed = 1;
  std::vector<double> dir{0.0, 0.0, 1.0};

  auto* sim = app.add_subcommand("simulate", "Run the time evolution");
  sim->add_option("--input", input, "Network JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--config", config, "Configuration JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--out-dir", out_dir, "Output directory")->required();
  sim->add_flag("--svg", svg, "Write SVG snapshots");
  sim->add_flag("--fail-on-blowup", fail_on_blowup, "Exit with status 4 on blow-up");

  auto* en = app.add_subcommand("energy", "Print the energy of a network");
  en->add_option("--input", input, "Network JSON")->required()->check(CLI::ExistingFile);
  en->add_option("--config", config, "Configuration JSON")->check(CLI::ExistingFile);
  en->add_option("--surface", surface, "Also integrate over a spanning surface")->check(CLI::IsMember({"disk", "cone"}));
  en->add_option("--tau", tau, "Surface quadrature refinement threshold");

  auto* fo = app.add_subcommand("force", "Print nodal forces as CSV");
  fo->add_option("--input", input, "Network JSON")->required()->check(CLI::ExistingFile);
  fo->add_option("--config", config, "Configuration JSON")->check(CLI::ExistingFile);
  fo->add_option("--formula", formula, "variational or line")->check(CLI::IsMember({"variational", "line"}));

  auto* kt = app.add_subcommand("kernel-table", "Tabulate K or J along a ray");
  kt->add_option("--config", config, "Configuration JSON")->check(CLI::ExistingFile);
  kt->add_option("--kernel", kernel, "K or J")->check(CLI::IsMember({"K", "J"}));
  kt->add_option("--r-min", r_min, "Smallest radius");
  kt->add_option("--r-max", r_max, "Largest radius");
  kt->add_option("--n", n, "Number of radii (log-spaced)");
  kt->add_option("--direction", dir, "Ray direction")->expected(3);

  auto* ck = app.add_subcommand("check", "Run the invariant suites");
  ck->add_option("--sphere-order", order, "Sphere quadrature order")->check(CLI::Range(2, 256));
  ck->add_option("--normalization-scale", scale, "Multiply the mollifier normalization (for testing the checks)");
  ck->add_option("--seed", seed, "Random seed");

  auto* rd = app.add_subcommand("render", "Write an SVG projection of a network");
  rd->add_option("--input", input, "Network JSON")->required()->check(CLI::ExistingFile);
  rd->add_option("--plane", plane, "xy, yz or xz")->check(CLI::IsMember({"xy", "yz", "xz"}));
  rd->add_option("--out", out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(input, config, out_dir, svg, fail_on_blowup);
    if (*en) return cmd_energy(input, config, surface, tau);
    if (*fo) return cmd_force(input, config, formula);
    if (*kt) return cmd_kernel_table(config, kernel, r_min, r_max, n, dir);
    if (*ck) return cmd_check(order, scale, seed);
    if (*rd) return cmd_render(input, plane, out);
  } catch (const ddd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ddd::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ddd::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
