#include "ddd/checks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "ddd/elasticity.hpp"
#include "ddd/energy_force.hpp"
#include "ddd/error.hpp"
#include "ddd/evolution.hpp"
#include "ddd/geometry.hpp"
#include "ddd/io.hpp"
#include "ddd/mobility.hpp"
#include "ddd/quadrature.hpp"

namespace ddd {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel_diff(const Tensor4& a, const Tensor4& b) {
  Tensor4 d;
  for (std::size_t i = 0; i < 81; ++i) d.c[i] = a.c[i] - b.c[i];
  return frob(d) / std::max(frob(b), 1e-300);
}

struct Ctx {
  const CheckOptions& opt;
  ElasticityTensor C = make_isotropic(1.0, 1.0);
  MollifierProfile profile;
  KernelEvaluator ev;
  LineQuadratureRule rule = make_line_rule(4);
  Lattice lattice;

  explicit Ctx(const CheckOptions& o)
      : opt(o),
        profile{1.0, o.normalization},
        ev(C, profile, KernelEvaluator::Options{o.sphere_order, -1}) {}
};

CheckResult elasticity_suite(Ctx&) {
  CheckResult r{"elasticity", true, "", 0.0};
  double worst = 0.0;
  for (const ElasticityTensor& C : {make_isotropic(1.0, 1.0), make_cubic(3.0, 1.5, 1.0)}) {
    if (!validate_symmetries(C) || !(estimate_lh_constant(C, 500) > 0.0)) r.passed = false;
    for (const Vec3& k : {Vec3(1, 0, 0), Vec3(0.3, -0.4, 0.866), Vec3(1, 1, 1)}) {
      const AcousticTensor D = acoustic_tensor(C, k);
      const Mat3 P = D.matrix * acoustic_inverse(D);
      worst = std::max(worst, max_abs(P - Mat3::identity()));
    }
  }
  if (worst > 1e-12) r.passed = false;
  r.detail = fmt("max |D Dinv - I| = %.2e", worst);
  return r;
}

CheckResult quadrature_suite(Ctx&) {
  CheckResult r{"quadrature", true, "", 0.0};
  const GaussRule g = gauss_legendre(10);
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 18);
  const double e1 = std::fabs(s - 2.0 / 19.0);
  const SphericalQuadrature q = make_spherical_quadrature(24);
  double x4 = 0.0, x2y2 = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const Vec3& z = q.nodes[i];
    x4 += q.weights[i] * std::pow(z[0], 4);
    x2y2 += q.weights[i] * z[0] * z[0] * z[1] * z[1];
  }
  const double e2 = std::max(std::fabs(x4 - 4.0 * M_PI / 5.0), std::fabs(x2y2 - 4.0 * M_PI / 15.0));
  r.passed = e1 < 1e-14 && e2 < 1e-13;
  r.detail = fmt("Gauss-Legendre error %.1e, sphere error %.1e", e1, e2);
  return r;
}

CheckResult symmetry_suite(Ctx& c) {
  CheckResult r{"kernel symmetry", true, "", 0.0};
  std::mt19937_64 rng(c.opt.seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 s = ud(rng) * normalized(Vec3(nd(rng), nd(rng), nd(rng)));
    const Tensor4 K = c.ev.K(s), Km = c.ev.K(-s), J = c.ev.J(s), Jm = c.ev.J(-s);
    const double kscale = max_abs(K.c), jscale = max_abs(J.c);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int cc = 0; cc < 3; ++cc)
          for (int d = 0; d < 3; ++d) {
            worst = std::max(worst, std::fabs(K(a, b, cc, d) - K(cc, d, a, b)) / kscale);
            worst = std::max(worst, std::fabs(K(a, b, cc, d) - Km(a, b, cc, d)) / kscale);
            worst = std::max(worst, std::fabs(J(a, b, cc, d) - J(cc, d, a, b)) / jscale);
            worst = std::max(worst, std::fabs(J(a, b, cc, d) - Jm(a, b, cc, d)) / jscale);
          }
  }
  r.passed = worst <= 1e-12;
  r.detail = fmt("max relative asymmetry %.2e", worst);
  return r;
}

CheckResult self_convergence_suite(Ctx& c) {
  CheckResult r{"kernel self-convergence", true, "", 0.0};
  const int fine_order = std::max(48, 2 * c.opt.sphere_order);
  const KernelEvaluator fine(c.C, c.profile, KernelEvaluator::Options{fine_order, -1});
  double worst = 0.0;
  for (double rad : {0.3, 1.0, 3.0, 10.0, 30.0, 100.0}) {
    const Vec3 s = rad * normalized(Vec3(0.3, -0.5, 0.8));
    worst = std::max(worst, rel_diff(c.ev.K(s), fine.K(s)));
    worst = std::max(worst, rel_diff(c.ev.J(s), fine.J(s)));
  }
  r.passed = worst < 1e-10;
  r.detail = "order " + std::to_string(c.opt.sphere_order) + " vs " + std::to_string(fine_order) +
             fmt(": max relative difference %.2e", worst);
  return r;
}

CheckResult oracle_suite(Ctx& c) {
  CheckResult r{"oracle equivalence", true, "", 0.0};
  double worst = 0.0;
  for (const Vec3& s : {Vec3(0.3, 0.2, 0.1), Vec3(1.0, -0.5, 0.7), Vec3(2.5, 1.0, -1.5)})
    worst = std::max(worst, rel_diff(c.ev.K(s), eval_K_direct(c.C, c.profile, s)));
  r.passed = worst < 1e-6;
  r.detail = fmt("max relative difference to real-space K %.2e", worst);
  return r;
}

CheckResult decay_suite(Ctx& c) {
  CheckResult r{"kernel decay", true, "", 0.0};
  std::ostringstream d;
  for (auto [m, j] : {std::pair{0, 0}, {1, 0}, {1, 1}, {2, 0}}) {
    const DecayCheckReport rep = decay_bound_scan(c.ev, m, j, static_cast<unsigned>(c.opt.seed));
    if (!(rep.finite && rep.slope <= rep.slope_limit)) r.passed = false;
    d << "(" << m << "," << j << ") slope " << fmt("%.3f", rep.slope) << " ";
  }
  r.detail = d.str();
  return r;
}

DislocationNetwork random_network(const Lattice& L, std::uint64_t seed, int nodes) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  DislocationNetwork S;
  S.lattice = L;
  S.epsilon = 1.0;
  const std::array<std::array<int, 3>, 3> bs{{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}};
  for (int i = 0; i < 3; ++i) {
    const Vec3 center(4.0 * i, 0.5 * nd(rng), 0.5 * nd(rng));
    const Vec3 normal = normalized(Vec3(nd(rng), nd(rng), nd(rng)));
    Loop l = make_circle_loop(center, normal, 2.0 + 0.3 * i, nodes, BurgersVector::make(L, bs[static_cast<std::size_t>(i)]));
    for (auto& x : l.nodes) x += 0.1 * Vec3(nd(rng), nd(rng), nd(rng));
    S.loops.push_back(l);
  }
  return S;
}

CheckResult gradient_suite(Ctx& c) {
  CheckResult r{"energy gradient", true, "", 0.0};
  DislocationNetwork S = random_network(c.lattice, c.opt.seed, 10);
  const EnergyGradient eg = discrete_energy_gradient(S, c.ev, c.rule);
  const double h = 1e-6;
  double worst = 0.0, scale = 0.0;
  for (const Vec3& g : eg.gradient) scale = std::max(scale, norm(g));
  std::size_t gi = 0;
  for (auto& l : S.loops)
    for (auto& x : l.nodes) {
      for (int k = 0; k < 3; ++k) {
        const double x0 = x[k];
        x[k] = x0 + h;
        const double ep = energy_line(S, c.ev, c.rule).total;
        x[k] = x0 - h;
        const double em = energy_line(S, c.ev, c.rule).total;
        x[k] = x0;
        worst = std::max(worst, std::fabs((ep - em) / (2.0 * h) - eg.gradient[gi][k]) / scale);
      }
      ++gi;
    }
  r.passed = worst < 1e-5;
  r.detail = fmt("max relative finite-difference error %.2e", worst);
  return r;
}

CheckResult force_suite(Ctx& c) {
  CheckResult r{"force consistency", true, "", 0.0};
  const BurgersVector b = BurgersVector::make(c.lattice, {1, 0, 0});
  double err[2];
  for (int i = 0; i < 2; ++i) {
    const int N = 40 << i;
    DislocationNetwork S;
    S.lattice = c.lattice;
    S.loops.push_back(make_ellipse_loop({0, 0, 0}, 8.0, 4.0, N, b));
    const ForceField fv = variational_force(S, c.ev, c.rule);
    const ForceField fp = pk_force(S, c.ev, c.rule);
    double e = 0.0, m = 0.0;
    for (int k = 0; k < N; k += N / 40) e = std::max(e, norm(fv.force[static_cast<std::size_t>(k)] - fp.force[static_cast<std::size_t>(k)]));
    for (const Vec3& f : fp.force) m = std::max(m, norm(f));
    err[i] = e / m;
  }
  const double order = std::log2(err[0] / err[1]);
  r.passed = order >= 0.9 && err[1] < 0.01;
  r.detail = fmt("nodal force vs line formula: error %.2e, order %.2f", err[1], order);
  return r;
}

CheckResult mobility_suite(Ctx& c) {
  CheckResult r{"mobility", true, "", 0.0};
  std::mt19937_64 rng(c.opt.seed);
  std::normal_distribution<double> nd;
  MobilityModel m;
  m.kind = BccDrag{2.0, 0.5, 1.0};
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 b = c.lattice.cartesian({static_cast<int>(i % 3) - 1, 1, static_cast<int>(i % 2)});
    const Vec3 tau = normalized(Vec3(nd(rng), nd(rng), nd(rng)));
    const DragMatrix D = drag_matrix(m, b, tau);
    const Mat3 P = normal_projector(tau);
    worst = std::max(worst, norm(D.matrix * tau) + norm(D.pseudo_inverse * tau));
    worst = std::max(worst, max_abs(D.matrix * D.pseudo_inverse - P));
    worst = std::max(worst, max_abs(D.matrix - transpose(D.matrix)));
    const Vec3 f(nd(rng), nd(rng), nd(rng));
    const Vec3 v = D.matrix * f;
    worst = std::max(worst, std::fabs(dot(f, v) - psi(m, b, tau, v) - psi_star(m, b, tau, f)) / std::max(1.0, dot(f, v)));
  }
  r.passed = worst < 1e-10;
  r.detail = fmt("max identity error %.2e", worst);
  return r;
}

CheckResult velocity_suite(Ctx& c) {
  CheckResult r{"velocity solve", true, "", 0.0};
  DislocationNetwork S = random_network(c.lattice, c.opt.seed + 1, 16);
  const ForceField f = pk_force(S, c.ev, c.rule);
  const MobilityModel m;
  const VelocityField v = solve_velocity(S, f, m);
  std::mt19937_64 rng(c.opt.seed);
  std::normal_distribution<double> nd;
  double res = 0.0, cons = 0.0, vmax = 0.0;
  for (std::size_t i = 0; i < v.velocity.size(); ++i) {
    cons = std::max(cons, std::fabs(dot(v.velocity[i], f.tangent[i])));
    vmax = std::max(vmax, norm(v.velocity[i]));
  }
  for (int t = 0; t < 20; ++t) {
    std::vector<Vec3> w(v.velocity.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto Q = normal_basis(f.tangent[i]);
      w[i] = nd(rng) * Q[0] + nd(rng) * Q[1];
    }
    const double a = weak_form_bilinear(S, f.tangent, m, v.velocity, w);
    const double l = weak_form_load(S, f, w);
    res = std::max(res, std::fabs(a - l) / std::max(std::fabs(a) + std::fabs(l), 1e-300));
  }
  ForceField zero = f;
  for (auto& x : zero.force) x = Vec3{};
  const VelocityField v0 = solve_velocity(S, zero, m);
  bool exact_zero = true;
  for (const Vec3& x : v0.velocity) exact_zero = exact_zero && x == Vec3{};
  r.passed = res < 1e-9 && cons < 1e-12 * std::max(vmax, 1.0) && exact_zero;
  r.detail = fmt("weak-form residual %.2e, max |v.tau| %.2e", res, cons);
  return r;
}

CheckResult mass_ratio_suite(Ctx& c) {
  CheckResult r{"mass ratio", true, "", 0.0};
  DislocationNetwork S;
  S.lattice = c.lattice;
  S.loops.push_back(make_circle_loop({0, 0, 0}, {0, 0, 1}, 10.0, 256, BurgersVector::make(c.lattice, {1, 0, 0})));
  const double th = mass_ratio(S);
  const double th2 = mass_ratio(random_network(c.lattice, c.opt.seed, 10));
  r.passed = th >= 0.99 * M_PI && th <= M_PI && th2 >= 1.0 - 1e-6;
  r.detail = fmt("circle %.6f (pi = 3.141593), random network %.4f", th, th2);
  return r;
}

CheckResult surface_suite(Ctx& c) {
  CheckResult r{"surface independence", true, "", 0.0};
  DislocationNetwork S;
  S.lattice = c.lattice;
  S.loops.push_back(make_circle_loop({0, 0, 0}, {0, 0, 1}, 3.0, 16, BurgersVector::make(c.lattice, {1, 0, 0})));
  const double line = energy_line(S, c.ev, c.rule).total;
  const double disk = energy_surface({make_planar_surface(S.loops[0])}, c.ev);
  const double cone = energy_surface({make_cone_surface(S.loops[0], {0, 0, 1.0})}, c.ev);
  const double d = std::max({std::fabs(line - disk), std::fabs(line - cone), std::fabs(disk - cone)}) / std::fabs(line);
  r.passed = d < 0.01;
  r.detail = fmt("line %.6f, largest relative spread %.2e", line, d);
  return r;
}

CheckResult io_suite(Ctx& c) {
  CheckResult r{"io round trip", true, "", 0.0};
  const std::string cfg = dump_config(parse_config("{\"epsilon\": 0.1}"));
  const bool cfg_ok = dump_config(parse_config(cfg)) == cfg;
  const DislocationNetwork S = random_network(c.lattice, c.opt.seed, 10);
  const std::string net = dump_network(S);
  const DislocationNetwork S2 = parse_network(net);
  bool exact = dump_network(S2) == net;
  for (std::size_t i = 0; i < S.loops.size(); ++i) exact = exact && S.loops[i].nodes == S2.loops[i].nodes;
  bool rejects = false;
  try {
    parse_config("{\"epsilon\": 1, \"epsilonn\": 2}");
  } catch (const ConfigError&) {
    rejects = true;
  }
  r.passed = cfg_ok && exact && rejects;
  r.detail = std::string("config ") + (cfg_ok ? "ok" : "differs") + ", network " + (exact ? "bit-exact" : "differs");
  return r;
}

}  // namespace

std::vector<CheckResult> run_checks(const CheckOptions& opt, const std::function<void(const CheckResult&)>& on_result) {
  Ctx ctx(opt);
  using Fn = CheckResult (*)(Ctx&);
  const std::pair<const char*, Fn> suites[] = {
      {"elasticity", elasticity_suite},
      {"quadrature", quadrature_suite},
      {"kernel symmetry", symmetry_suite},
      {"kernel self-convergence", self_convergence_suite},
      {"oracle equivalence", oracle_suite},
      {"kernel decay", decay_suite},
      {"energy gradient", gradient_suite},
      {"force consistency", force_suite},
      {"mobility", mobility_suite},
      {"velocity solve", velocity_suite},
      {"mass ratio", mass_ratio_suite},
      {"surface independence", surface_suite},
      {"io round trip", io_suite},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = fn(ctx);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.name = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace ddd
