// Acceptance checks. Prints one PASS/FAIL line per item and exits non-zero if
// any item fails. Items 4, 7 and 10 dominate the runtime (several minutes on
// one core).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "ddd/bounds.hpp"
#include "ddd/energy_force.hpp"
#include "ddd/evolution.hpp"
#include "ddd/geometry.hpp"
#include "ddd/io.hpp"
#include "ddd/kernels.hpp"
#include "ddd/mobility.hpp"

#ifndef DDD_CLI_PATH
#error "DDD_CLI_PATH must point at the ddd executable"
#endif

namespace fs = std::filesystem;
using namespace ddd;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel_frob(const Tensor4& a, const Tensor4& b) {
  double d = 0.0, n = 0.0;
  for (std::size_t i = 0; i < 81; ++i) {
    d += (a.c[i] - b.c[i]) * (a.c[i] - b.c[i]);
    n += b.c[i] * b.c[i];
  }
  return std::sqrt(d / n);
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const ElasticityTensor kIso = make_isotropic(1.0, 1.0);
const Lattice kLattice;

BurgersVector burgers(int a, int b, int c) { return BurgersVector::make(kLattice, {a, b, c}); }

DislocationNetwork single(const Loop& l) {
  DislocationNetwork S;
  S.loops.push_back(l);
  return S;
}

// Three perturbed circles in random planes with different Burgers vectors.
DislocationNetwork random_three_loops(unsigned seed, int nodes) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  DislocationNetwork S;
  const BurgersVector bs[3] = {burgers(1, 0, 0), burgers(0, 1, 0), burgers(1, 1, 1)};
  for (int i = 0; i < 3; ++i) {
    const Vec3 c(3.5 * i, 0.4 * nd(rng), 0.4 * nd(rng));
    Loop l = make_circle_loop(c, normalized(Vec3(nd(rng), nd(rng), nd(rng))), 1.8 + 0.25 * i, nodes, bs[i]);
    for (auto& x : l.nodes) x += 0.08 * Vec3(nd(rng), nd(rng), nd(rng));
    S.loops.push_back(l);
  }
  return S;
}

DislocationNetwork shrinking_loop() { return single(make_circle_loop({0, 0, 0}, {0, 0, 1}, 10.0, 128, burgers(0, 0, 1))); }

DislocationNetwork held_out_ellipse() { return single(make_ellipse_loop({0, 0, 0}, 20.0, 10.0, 194, burgers(1, 0, 0))); }

DislocationNetwork held_out_square() {
  return single(make_rounded_square_loop({0, 0, 0}, 30.0, 5.0, 222, burgers(0, 0, 1)));
}

DislocationNetwork held_out_pair() {
  DislocationNetwork S;
  S.loops.push_back(make_circle_loop({0, 0, 0}, {0, 0, 1}, 10.0, 126, burgers(0, 0, 1)));
  S.loops.push_back(make_circle_loop({0, 0, 5}, {0, 0, 1}, 10.0, 126, burgers(0, 0, 1)));
  return S;
}

Outcome kernel_symmetry() {
  const KernelEvaluator ev(kIso, MollifierProfile{1.0});
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 s = ud(rng) * normalized(Vec3(nd(rng), nd(rng), nd(rng)));
    const Tensor4 K = ev.K(s), Km = ev.K(-s), J = ev.J(s), Jm = ev.J(-s);
    double ks = 0.0, js = 0.0;
    for (std::size_t k = 0; k < 81; ++k) {
      ks = std::max(ks, std::fabs(K.c[k]));
      js = std::max(js, std::fabs(J.c[k]));
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 3; ++d) {
            worst = std::max(worst, std::fabs(K(a, b, c, d) - K(c, d, a, b)) / ks);
            worst = std::max(worst, std::fabs(K(a, b, c, d) - Km(a, b, c, d)) / ks);
            worst = std::max(worst, std::fabs(J(a, b, c, d) - Jm(a, b, c, d)) / js);
          }
  }
  return {worst <= 1e-12, fmt("100 points, max relative asymmetry %.2e", worst)};
}

Outcome oracle_equivalence() {
  const MollifierProfile p{1.0};
  const KernelEvaluator ev(kIso, p);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Vec3 s = (0.15 + 0.55 * i) * normalized(Vec3(nd(rng), nd(rng), nd(rng)));
    worst = std::max(worst, rel_frob(ev.K(s), eval_K_direct(kIso, p, s)));
  }
  return {worst < 1e-6, fmt("10 probes, max relative difference to real-space K %.2e", worst)};
}

Outcome decay_scaling() {
  const KernelEvaluator ev(kIso, MollifierProfile{1.0});
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  Outcome out;
  std::ostringstream d;
  for (auto [m, j] : {std::pair{0, 0}, {1, 0}, {1, 1}, {2, 0}}) {
    double slope = -1e300;
    bool finite = true;
    for (int dir = 0; dir < 6; ++dir) {
      const Vec3 sh = normalized(Vec3(nd(rng), nd(rng), nd(rng)));
      const Vec3 v = normalized(cross(sh, Vec3(nd(rng), nd(rng), nd(rng))));
      // Derivative directions: j along s-hat, the rest along v.
      std::vector<Vec3> e;
      for (int k = 0; k < m; ++k) e.push_back(k < j ? sh : v);
      std::vector<double> rs, ys;
      for (int i = 0; i <= 40; ++i) {
        const double r = 1e-2 * std::pow(1e5, i / 40.0);
        const Vec3 s = r * sh;
        Tensor4 T;
        if (m == 0) {
          T = ev.K(s);
        } else if (m == 1) {
          const Tensor5 G = ev.gradK(s);
          for (std::size_t q = 0; q < 81; ++q)
            for (int x = 0; x < 3; ++x) T.c[q] += G.c[3 * q + static_cast<std::size_t>(x)] * e[0][x];
        } else {
          const Tensor6 H = ev.hessK(s);
          for (std::size_t q = 0; q < 81; ++q)
            for (int x = 0; x < 3; ++x)
              for (int y = 0; y < 3; ++y) T.c[q] += H.c[9 * q + static_cast<std::size_t>(3 * x + y)] * e[0][x] * e[1][y];
        }
        double n = 0.0;
        for (double c : T.c) n += c * c;
        n = std::sqrt(n);
        const double ratio = n * std::pow(r, m - j + 1);
        if (!std::isfinite(ratio)) finite = false;
        if (r >= 10.0 - 1e-9) {
          rs.push_back(r);
          ys.push_back(n);
        }
      }
      slope = std::max(slope, loglog_slope(rs, ys));
    }
    const double limit = -(m - j + 1) + 0.1;
    if (!(finite && slope <= limit)) out.passed = false;
    d << (m + j ? ", " : "") << "(" << m << "," << j << ") " << fmt("%.3f", slope) << " <= " << fmt("%.1f", limit);
  }
  out.detail = "slopes " + d.str();
  return out;
}

Outcome surface_independence() {
  const KernelEvaluator ev(kIso, MollifierProfile{1.0});
  const DislocationNetwork S = single(make_circle_loop({0, 0, 0}, {0, 0, 1}, 8.0, 64, burgers(1, 0, 0)));
  double spread[2];
  std::ostringstream d;
  int level = 0;
  for (auto [order, tau] : {std::pair{2, 2.0}, {4, 1.0}}) {
    SurfaceQuadratureOptions o;
    o.tau = tau;
    const double line = energy_line(S, ev, make_line_rule(order)).total;
    const double disk = energy_surface({make_planar_surface(S.loops[0])}, ev, o);
    const double cone = energy_surface({make_cone_surface(S.loops[0], {0, 0, 2.0})}, ev, o);
    spread[level] = std::max({std::fabs(line - disk), std::fabs(line - cone), std::fabs(disk - cone)}) /
                    std::min({std::fabs(line), std::fabs(disk), std::fabs(cone)});
    d << (level ? "; " : "") << fmt("line order %.0f, tau %.1f: ", order, tau)
      << fmt("line %.6f disk %.6f cone %.6f", line, disk, cone) << fmt(" spread %.2e", spread[level]);
    ++level;
  }
  return {spread[0] < 0.01 && spread[1] < 0.01 && spread[1] < spread[0], d.str()};
}

Outcome force_gradient() {
  const KernelEvaluator ev(kIso, MollifierProfile{1.0});
  const auto rule = make_line_rule(4);
  DislocationNetwork S = random_three_loops(23, 12);
  const EnergyGradient eg = discrete_energy_gradient(S, ev, rule);
  double scale = 0.0, worst = 0.0;
  for (const Vec3& g : eg.gradient) scale = std::max(scale, norm(g));
  const double h = 1e-6 * S.epsilon;
  std::size_t gi = 0;
  for (auto& l : S.loops)
    for (auto& x : l.nodes) {
      for (int k = 0; k < 3; ++k) {
        const double x0 = x[k];
        x[k] = x0 + h;
        const double ep = energy_line(S, ev, rule).total;
        x[k] = x0 - h;
        const double em = energy_line(S, ev, rule).total;
        x[k] = x0;
        worst = std::max(worst, std::fabs((ep - em) / (2.0 * h) - eg.gradient[gi][k]) / scale);
      }
      ++gi;
    }
  // Refinement h ~ eps, eps/2, eps/4 on an 8 x 4 ellipse (perimeter 38.8 eps).
  double err[3];
  for (int i = 0; i < 3; ++i) {
    const int N = 40 << i;
    const DislocationNetwork E = single(make_ellipse_loop({0, 0, 0}, 8.0, 4.0, N, burgers(1, 0, 0)));
    const ForceField fv = variational_force(E, ev, rule);
    const ForceField fp = pk_force(E, ev, rule);
    double e = 0.0, m = 0.0;
    // Nodes shared by all three meshes.
    for (int k = 0; k < N; k += N / 40) e = std::max(e, norm(fv.force[static_cast<std::size_t>(k)] - fp.force[static_cast<std::size_t>(k)]));
    for (const Vec3& f : fp.force) m = std::max(m, norm(f));
    err[i] = e / m;
  }
  const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
  return {worst < 1e-5 && std::min(o1, o2) >= 0.9,
          fmt("finite-difference error %.2e; nodal force vs line formula orders %.2f, %.2f", worst, o1, o2)};
}

Outcome velocity_solve() {
  const KernelEvaluator ev(kIso, MollifierProfile{1.0});
  const DislocationNetwork S = random_three_loops(31, 16);
  const ForceField f = pk_force(S, ev, make_line_rule(4));
  MobilityModel iso, bcc;
  bcc.kind = BccDrag{2.0, 0.5, 1.0};
  bcc.alpha = 0.5;
  std::mt19937_64 rng(41);
  std::normal_distribution<double> nd;
  double res = 0.0, cons = 0.0;
  bool zero_exact = true;
  for (const MobilityModel& m : {iso, bcc}) {
    const VelocityField v = solve_velocity(S, f, m);
    double vmax = 0.0, c = 0.0;
    for (std::size_t i = 0; i < v.velocity.size(); ++i) {
      vmax = std::max(vmax, norm(v.velocity[i]));
      c = std::max(c, std::fabs(dot(v.velocity[i], v.tangent[i])));
    }
    cons = std::max(cons, c / std::max(vmax, 1.0));
    const double avv = weak_form_bilinear(S, v.tangent, m, v.velocity, v.velocity);
    for (int t = 0; t < 100; ++t) {
      std::vector<Vec3> w(v.velocity.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        const auto Q = normal_basis(v.tangent[i]);
        w[i] = nd(rng) * Q[0] + nd(rng) * Q[1];
      }
      const double a = weak_form_bilinear(S, v.tangent, m, v.velocity, w);
      const double l = weak_form_load(S, f, w);
      const double aww = weak_form_bilinear(S, v.tangent, m, w, w);
      res = std::max(res, std::fabs(a - l) / std::sqrt(avv * aww));
    }
    ForceField zero = f;
    for (auto& x : zero.force) x = Vec3{};
    for (const Vec3& x : solve_velocity(S, zero, m).velocity) zero_exact = zero_exact && x == Vec3{};
  }
  return {res < 1e-9 && cons < 1e-12 && zero_exact,
          fmt("isotropic and BCC drag: residual %.2e, max |v.tau| %.2e, ", res, cons) +
              (zero_exact ? "f = 0 gives v = 0" : "f = 0 gives v != 0")};
}

// |Phi(S + dt v) - Phi(S) + dt <f, v>| for dt, dt/2, dt/4; returns the smaller order.
double dissipation_order(const Evolution& evo, const DislocationNetwork& S, const KernelEvaluator& ev) {
  const StepData d = evo.evaluate(S);
  const double dt0 = evo.suggest_dt(S, d);
  const auto rule = make_line_rule(4);
  double e[3];
  for (int i = 0; i < 3; ++i) {
    const double dt = dt0 / (1 << i);
    std::vector<Vec3> g(d.velocity.velocity.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = dt * d.velocity.velocity[k];
    e[i] = std::fabs(energy_line(pushforward(S, g), ev, rule).total - d.energy + dt * d.f_dot_v);
  }
  return std::min(std::log2(e[0] / e[1]), std::log2(e[1] / e[2]));
}

Outcome dissipation() {
  const KernelEvaluator ev(kIso, MollifierProfile{1.0});
  const Evolution evo(ev, MobilityModel{}, make_line_rule(4));
  EvolutionState st = evo.start(shrinking_loop());
  DislocationNetwork mid;
  evo.run(st, [&](const EvolutionState& s) {
    if (s.step == 100) mid = s.network;
  });
  const auto& rows = st.diagnostics;
  bool energy_ok = true, radius_ok = true;
  double worst_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    worst_increase = std::max(worst_increase, rows[i].energy - rows[i - 1].energy);
    energy_ok = energy_ok && rows[i].energy <= rows[i - 1].energy;
    radius_ok = radius_ok && rows[i].mass < rows[i - 1].mass;
  }
  const double o0 = dissipation_order(evo, shrinking_loop(), ev);
  const double o1 = mid.empty() ? 0.0 : dissipation_order(evo, mid, ev);
  const bool annihilated = st.termination == "annihilated";
  std::string d = "terminated '" + st.termination + "' at step " + std::to_string(st.step) +
                  fmt(" (t = %.1f); largest step-to-step energy change %.2e; ", st.time, worst_increase) +
                  (radius_ok ? "radius decreasing; " : "radius not monotone; ") +
                  fmt("dt-halving orders %.2f (t = 0), %.2f (step 100)", o0, o1);
  return {annihilated && energy_ok && radius_ok && std::min(o0, o1) >= 1.9, d};
}

Outcome mass_ratio_estimator() {
  const double th = mass_ratio(single(make_circle_loop({0, 0, 0}, {0, 0, 1}, 10.0, 256, burgers(1, 0, 0))));
  std::vector<DislocationNetwork> nets = {random_three_loops(23, 12), random_three_loops(31, 16), shrinking_loop(),
                                          held_out_ellipse(), held_out_square(), held_out_pair()};
  // Small and flat loops.
  nets.push_back(single(make_circle_loop({1, 2, 3}, {1, 1, 0}, 0.2, 5, burgers(0, 1, 0))));
  nets.push_back(single(make_ellipse_loop({0, 0, 0}, 6.0, 0.3, 40, burgers(1, 0, 0))));
  double lowest = 1e300;
  for (const auto& S : nets) lowest = std::min(lowest, mass_ratio(S));
  return {th >= 0.99 * M_PI && th <= M_PI && lowest >= 1.0 - 1e-6,
          fmt("256-gon %.6f in [%.6f, %.6f]; ", th, 0.99 * M_PI, M_PI) +
              fmt("lowest over %.0f test networks %.4f", static_cast<double>(nets.size()), lowest)};
}

Outcome monitored_bounds() {
  const KernelEvaluator ev(kIso, MollifierProfile{1.0});
  EvolutionOptions opt;
  opt.step.max_steps = 10;
  const Evolution evo(ev, MobilityModel{}, make_line_rule(4), opt);
  Outcome out;
  std::ostringstream d;
  for (const auto& [name, S] : {std::pair{"ellipse", held_out_ellipse()}, {"rounded square", held_out_square()},
                                {"loop pair", held_out_pair()}}) {
    EvolutionState st = evo.start(S);
    evo.run(st);
    const BoundRatios r = Evolution::bound_monitor(st.diagnostics);
    if (!(r.max() <= 1.0) || st.step != 10) out.passed = false;
    d << (d.tellp() > 0 ? "; " : "") << name << fmt(": pk %.3f/%.3f vel %.3f", r.pk_linf, r.pk_l2, r.ap_vel)
      << fmt(" length-rate %.3f mass %.3f", r.length_rate, r.mass) << fmt(" v %.3f dv %.3f", r.v_uniform, r.dv_uniform);
  }
  out.detail = d.str();
  return out;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("ddd_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  write_file((dir / "net.json").string(), dump_network(shrinking_loop()));
  write_file((dir / "cfg.json").string(), "{\"epsilon\": 1.0, \"step_policy\": {\"t_end\": 1e6}, \"output\": {\"every\": 50}}\n");
  std::string csv[2];
  int rc[2];
  const int threads[2] = {1, 8};
  for (int i = 0; i < 2; ++i) {
    const fs::path out = dir / ("out" + std::to_string(threads[i]));
    const std::string cmd = "DDD_THREADS=" + std::to_string(threads[i]) + " '" + std::string(DDD_CLI_PATH) +
                            "' simulate --input '" + (dir / "net.json").string() + "' --config '" +
                            (dir / "cfg.json").string() + "' --out-dir '" + out.string() + "' > /dev/null";
    rc[i] = std::system(cmd.c_str());
    csv[i] = rc[i] == 0 ? read_file((out / "diagnostics.csv").string()) : std::string();
  }
  std::size_t lines = static_cast<std::size_t>(std::count(csv[0].begin(), csv[0].end(), '\n'));
  const bool same = rc[0] == 0 && rc[1] == 0 && !csv[0].empty() && csv[0] == csv[1];
  fs::remove_all(dir);
  return {same, fmt("DDD_THREADS = 1 and 8: exit %.0f/%.0f, ", rc[0], rc[1]) +
                    std::to_string(csv[0].size()) + " bytes, " + std::to_string(lines) + " lines, " +
                    (same ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    double limit;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Item> items = {
      {1, "kernel symmetry", 5, kernel_symmetry},
      {2, "oracle equivalence", 60, oracle_equivalence},
      {3, "decay scaling", 30, decay_scaling},
      {4, "surface independence", 300, surface_independence},
      {5, "force is minus the energy gradient", 120, force_gradient},
      {6, "velocity solve", 10, velocity_solve},
      {7, "gradient-flow dissipation", 300, dissipation},
      {8, "mass-ratio estimator", 10, mass_ratio_estimator},
      {9, "monitored bounds", 600, monitored_bounds},
      {10, "determinism", 600, determinism},
  };
  int failed = 0;
  for (const Item& it : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = sec < it.limit;
    const bool pass = o.passed && in_time;
    if (!pass) ++failed;
    std::printf("[%s] %2d %s: %s (%.1f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", it.id, it.name, o.detail.c_str(), sec,
                it.limit, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu passed\n", static_cast<int>(items.size()) - failed, items.size());
  return failed == 0 ? 0 : 1;
}
