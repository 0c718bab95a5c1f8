// ddd-calibrate: fits the mollifier normalization against the real-space
// oracle and the bound constants on a family of circular loops. Prints JSON;
// the numbers are copied into kernels.hpp and bounds.cpp by hand.
#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "ddd/bounds.hpp"
#include "ddd/energy_force.hpp"
#include "ddd/evolution.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

json fit_normalization(const std::vector<ddd::Vec3>& probes) {
  const ddd::ElasticityTensor C = ddd::make_isotropic(1.0, 1.0);
  const ddd::MollifierProfile unit{1.0, 1.0};
  const ddd::KernelEvaluator ev(C, unit);
  double num = 0.0, den = 0.0;
  std::vector<std::pair<ddd::Tensor4, ddd::Tensor4>> pairs;
  for (const auto& s : probes) {
    const ddd::Tensor4 a = ev.K(s), b = ddd::eval_K_direct(C, unit, s);
    for (std::size_t i = 0; i < 81; ++i) {
      num += a.c[i] * b.c[i];
      den += a.c[i] * a.c[i];
    }
    pairs.emplace_back(a, b);
  }
  const double N = num / den;
  double worst = 0.0;
  for (const auto& [a, b] : pairs) {
    ddd::Tensor4 d;
    for (std::size_t i = 0; i < 81; ++i) d.c[i] = N * a.c[i] - b.c[i];
    worst = std::max(worst, ddd::frob(d) / ddd::frob(b));
  }
  return {{"normalization", N}, {"closed_form", 1.0 / (8.0 * std::pow(M_PI, 2.5))}, {"max_relative_residual", worst}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibrate the mollifier normalization and the bound constants"};
  std::vector<double> radii{5, 10, 20, 40};
  int steps = 5;
  double h = 0.5, safety = 2.0;
  app.add_option("--radii", radii, "Circle radii in units of eps");
  app.add_option("--steps", steps, "Evolution steps per circle");
  app.add_option("--spacing", h, "Segment length in units of eps");
  app.add_option("--safety", safety, "Factor applied to the observed maxima");
  CLI11_PARSE(app, argc, argv);

  std::vector<ddd::Vec3> probes;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 10; ++i) probes.push_back((0.2 + 0.4 * i) * ddd::normalized(ddd::Vec3(nd(rng), nd(rng), nd(rng))));
  json out;
  out["nphi"] = fit_normalization(probes);

  const ddd::ElasticityTensor C = ddd::make_isotropic(1.0, 1.0);
  const ddd::KernelEvaluator ev(C, ddd::MollifierProfile{1.0});
  const auto rule = ddd::make_line_rule(4);
  ddd::EvolutionOptions opt;
  opt.constants = {1, 1, 1, 1, 1, 1, 1};
  opt.step.max_steps = static_cast<std::size_t>(steps);
  const ddd::MobilityModel model;
  const ddd::Evolution evo(ev, model, rule, opt);

  ddd::BoundRatios worst;
  double continuity = 0.0;
  json per_circle = json::array();
  for (double R : radii) {
    const int N = static_cast<int>(std::lround(2.0 * M_PI * R / h));
    for (const std::array<int, 3> n : {std::array<int, 3>{0, 0, 1}, std::array<int, 3>{1, 0, 0}}) {
      const ddd::Vec3 b(n[0], n[1], n[2]);
      ddd::DislocationNetwork S;
      S.epsilon = 1.0;
      S.loops.push_back(ddd::make_circle_loop({0, 0, 0}, {0, 0, 1}, R, N, ddd::BurgersVector::make(S.lattice, n)));
      ddd::EvolutionState st = evo.start(S);
      evo.run(st);
      ddd::BoundRatios r = ddd::Evolution::bound_monitor(st.diagnostics);
      // The line formula may exceed the variational force on coarse meshes.
      const ddd::ForceField fl = ddd::pk_force(S, ev, rule);
      const auto in = ddd::bound_inputs(S, model, ddd::mass_ratio(S));
      const auto fn = ddd::field_norms(S, fl.force);
      r.pk_linf = std::max(r.pk_linf, fn.linf / ddd::pk_linf_rhs(in));
      r.pk_l2 = std::max(r.pk_l2, fn.l2 / ddd::pk_l2_rhs(in));
      worst.update_max(r);

      // Continuity: a smooth displacement of size 0.1 eps.
      std::vector<ddd::Vec3> g;
      for (const auto& x : S.loops[0].nodes) g.push_back(0.1 * ddd::Vec3(std::sin(x[1] / R), std::cos(x[0] / R), 0.0));
      const auto cr = ddd::continuity_check(S, g, ev, rule, opt.constants);
      // Fitted without the leading |grad g| term, which only loosens the bound.
      continuity = std::max(continuity, cr.check.lhs / (cr.mass * (cr.grad_g_linf + cr.g_linf)));

      per_circle.push_back({{"R", R}, {"nodes", N}, {"burgers", {b[0], b[1], b[2]}}, {"max_ratio", r.max()}});
      std::cerr << "R = " << R << " b = (" << b[0] << "," << b[1] << "," << b[2] << "): max ratio " << r.max() << "\n";
    }
  }
  out["circles"] = per_circle;
  out["constants"] = {{"pk_linf", safety * worst.pk_linf},         {"pk_l2", safety * worst.pk_l2},
                      {"ap_vel", safety * worst.ap_vel},           {"length_rate", safety * worst.length_rate},
                      {"v_uniform", safety * worst.v_uniform},     {"dv_uniform", safety * worst.dv_uniform},
                      {"continuity", safety * continuity}};
  std::cout << out.dump(2) << "\n";
  return 0;
}
