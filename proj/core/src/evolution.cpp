#include "ddd/evolution.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "ddd/error.hpp"
#include "ddd/parallel.hpp"
#include "json.hpp"

namespace ddd {

std::array<Vec3, 2> normal_basis(const Vec3& tau) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::fabs(tau[i]) < std::fabs(tau[k])) k = i;
  Vec3 a;
  a[k] = 1.0;
  const Vec3 e1 = normalized(cross(tau, a));
  return {e1, cross(tau, e1)};
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Solves one loop; writes velocities into v[off .. off+n).
double solve_loop(const Loop& l, std::size_t off, const ForceField& f, const MobilityModel& model,
                  std::vector<Vec3>& v) {
  const std::size_t n = l.size();
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = norm(l.segment(k));
  std::vector<std::array<Vec3, 2>> Q(n);
  for (std::size_t i = 0; i < n; ++i) Q[i] = normal_basis(f.tangent[off + i]);
  const Vec3& b = l.burgers.cartesian;
  const double alpha = model.alpha;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n * 12);
  Eigen::VectorXd F(2 * static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
    const double li = 0.5 * (h[im] + h[i]);
    const Mat3 Bp = drag_matrix(model, b, f.tangent[off + i]).pseudo_inverse;
    const int r0 = static_cast<int>(2 * i);
    for (int a = 0; a < 2; ++a) {
      F[r0 + a] = li * dot(Q[i][a], f.force[off + i]);
      for (int c = 0; c < 2; ++c) {
        double d = li * dot(Q[i][a], Bp * Q[i][c]);
        if (a == c) d += alpha * (1.0 / h[im] + 1.0 / h[i]);
        trip.emplace_back(r0 + a, r0 + c, d);
        const double o = -alpha / h[i] * dot(Q[i][a], Q[ip][c]);
        trip.emplace_back(r0 + a, static_cast<int>(2 * ip) + c, o);
        trip.emplace_back(static_cast<int>(2 * ip) + c, r0 + a, o);
      }
    }
  }
  SpMat K(2 * static_cast<Eigen::Index>(n), 2 * static_cast<Eigen::Index>(n));
  K.setFromTriplets(trip.begin(), trip.end());
  const double fn = F.norm();
  if (fn == 0.0) {
    for (std::size_t i = 0; i < n; ++i) v[off + i] = Vec3{};
    return 0.0;
  }
  Eigen::SimplicialLLT<SpMat> llt(K);
  if (llt.info() != Eigen::Success) throw NumericalError("velocity solve: factorization failed");
  Eigen::VectorXd y = llt.solve(F);
  double res = (K * y - F).norm() / fn;
  if (res > 1e-10) {
    // One step of iterative refinement before giving up.
    y += llt.solve(F - K * y);
    res = (K * y - F).norm() / fn;
  }
  if (!(res <= 1e-10)) throw NumericalError("velocity solve: residual " + std::to_string(res) + " above 1e-10");
  for (std::size_t i = 0; i < n; ++i) v[off + i] = y[2 * i] * Q[i][0] + y[2 * i + 1] * Q[i][1];
  return res;
}

}  // namespace

VelocityField solve_velocity(const DislocationNetwork& S, const ForceField& f, const MobilityModel& model) {
  model.validate();
  const std::size_t nn = S.total_nodes();
  if (f.force.size() != nn || f.tangent.size() != nn) throw InvalidArgument("solve_velocity: force field does not match network");
  std::vector<std::size_t> hairpins;
  node_tangents(S, &hairpins);
  if (!hairpins.empty()) throw NumericalError("solve_velocity: hairpin at node " + std::to_string(hairpins.front()) + "; remesh first");
  VelocityField out;
  out.velocity.assign(nn, Vec3{});
  out.tangent = f.tangent;
  const auto off = S.node_offsets();
  std::vector<double> res(S.loops.size(), 0.0);
  parallel_for(S.loops.size(), [&](std::size_t li) { res[li] = solve_loop(S.loops[li], off[li], f, model, out.velocity); });
  for (double r : res) out.residual = std::max(out.residual, r);
  return out;
}

double weak_form_bilinear(const DislocationNetwork& S, const std::vector<Vec3>& tangent, const MobilityModel& model,
                          const std::vector<Vec3>& v, const std::vector<Vec3>& w) {
  double s = 0.0;
  std::size_t g = 0;
  for (const auto& l : S.loops) {
    const std::size_t n = l.size();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = g + k, j = g + (k + 1) % n;
      const double h = norm(l.segment(k));
      s += model.alpha * dot(v[j] - v[i], w[j] - w[i]) / h;
      const double li = 0.5 * (norm(l.segment(k + n - 1)) + h);
      s += li * dot(v[i], drag_matrix(model, l.burgers.cartesian, tangent[i]).pseudo_inverse * w[i]);
    }
    g += n;
  }
  return s;
}

double weak_form_load(const DislocationNetwork& S, const ForceField& f, const std::vector<Vec3>& w) {
  const std::vector<double> ll = lumped_lengths(S);
  double s = 0.0;
  for (std::size_t i = 0; i < ll.size(); ++i) s += ll[i] * dot(f.force[i], w[i]);
  return s;
}

void EvolutionOptions::validate() const {
  auto need = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(std::string(key) + ": " + what);
  };
  need(step.c1 > 0.0, "step_policy.c1", "must be positive");
  need(step.c2 > 0.0, "step_policy.c2", "must be positive");
  need(step.dt_max > 0.0, "step_policy.dt_max", "must be positive");
  need(step.dt_min >= 0.0 && step.dt_min < step.dt_max, "step_policy.dt_min", "must be in [0, dt_max)");
  need(step.t_end > 0.0, "step_policy.t_end", "must be positive");
  need(step.max_steps > 0, "step_policy.max_steps", "must be positive");
  need(h_min > 0.0, "remesh.h_min", "must be positive");
  need(h_max > h_min, "remesh.h_max", "must exceed h_min");
  need(kappa > 0.0, "kappa", "must be positive");
  need(theta_max > 0.0, "theta_max", "must be positive");
}

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {
      "step",          "t",          "dt",           "loops",          "nodes",
      "mass",          "theta_hat",  "energy",       "v_inf",          "dv_inf",
      "f_inf",         "f_dot_v",    "energy_decrement", "remesh_perturbation",
      "ratio_pk_linf", "ratio_pk_l2", "ratio_ap_vel", "ratio_length_rate", "ratio_v_uniform",
      "ratio_dv_uniform", "ratio_mass"};
  return cols;
}

std::vector<double> diagnostics_values(const DiagnosticsRow& r) {
  return {static_cast<double>(r.step), r.t, r.dt, static_cast<double>(r.loops), static_cast<double>(r.nodes),
          r.mass, r.theta_hat, r.energy, r.v_inf, r.dv_inf, r.f_inf, r.f_dot_v, r.energy_decrement,
          r.remesh_perturbation, r.ratios.pk_linf, r.ratios.pk_l2, r.ratios.ap_vel, r.ratios.length_rate,
          r.ratios.v_uniform, r.ratios.dv_uniform, r.ratios.mass};
}

Evolution::Evolution(const KernelEvaluator& ev, MobilityModel model, LineQuadratureRule rule, EvolutionOptions opt)
    : ev_(ev), model_(model), rule_(std::move(rule)), opt_(opt) {
  model_.validate();
  opt_.validate();
}

EvolutionState Evolution::start(const DislocationNetwork& S0) const {
  validate(S0);
  EvolutionState st;
  st.network = S0;
  st.initial_mass = mass(S0);
  st.displacement.assign(S0.total_nodes(), Vec3{});
  return st;
}

StepData Evolution::evaluate(const DislocationNetwork& S) const {
  StepData d;
  if (opt_.force == ForceModel::Variational) {
    d.force = variational_force(S, ev_, rule_, &d.energy);
  } else {
    d.force = pk_force(S, ev_, rule_);
    d.energy = energy_line(S, ev_, rule_).total;
  }
  d.velocity = solve_velocity(S, d.force, model_);
  d.force_norms = field_norms(S, d.force.force);
  d.velocity_norms = field_norms(S, d.velocity.velocity);
  for (std::size_t i = 0; i < d.force.force.size(); ++i)
    d.f_dot_v += d.force.lumped_length[i] * dot(d.force.force[i], d.velocity.velocity[i]);
  return d;
}

double Evolution::suggest_dt(const DislocationNetwork& S, const StepData& d) const {
  double dt = opt_.step.dt_max;
  if (d.velocity_norms.linf > 0.0) dt = std::min(dt, opt_.step.c1 * S.epsilon / d.velocity_norms.linf);
  if (d.velocity_norms.grad_linf > 0.0) dt = std::min(dt, opt_.step.c2 / d.velocity_norms.grad_linf);
  return dt;
}

void Evolution::step(EvolutionState& st, double dt) const {
  if (st.network.empty()) throw InvalidArgument("step: empty network");
  step(st, dt, evaluate(st.network));
}

void Evolution::step(EvolutionState& st, double dt, const StepData& d) const {
  using nlohmann::json;
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw InvalidArgument("step: dt must be finite and nonnegative");
  const DislocationNetwork& S = st.network;
  if (S.empty()) throw InvalidArgument("step: empty network");

  DiagnosticsRow row;
  row.step = st.step;
  row.t = st.time;
  row.dt = dt;
  row.loops = S.loops.size();
  row.nodes = S.total_nodes();
  row.mass = mass(S);
  row.theta_hat = mass_ratio(S);
  row.energy = d.energy;
  row.v_inf = d.velocity_norms.linf;
  row.dv_inf = d.velocity_norms.grad_linf;
  row.f_inf = d.force_norms.linf;
  row.f_dot_v = d.f_dot_v;
  row.ratios = evaluate_bounds(bound_inputs(S, model_, row.theta_hat), d.force_norms, d.velocity_norms,
                               st.initial_mass, st.time, opt_.constants);

  if (row.theta_hat > opt_.theta_max) {
    row.dt = 0.0;
    st.diagnostics.push_back(row);
    st.events.push_back({st.step, st.time, "blowup",
                         json{{"theta_hat", row.theta_hat}, {"theta_max", opt_.theta_max}}.dump()});
    st.finished = true;
    st.termination = "blowup";
    return;
  }
  if (dt == 0.0) {
    st.diagnostics.push_back(row);
    ++st.step;
    return;
  }

  std::vector<Vec3> disp(d.velocity.velocity.size());
  for (std::size_t i = 0; i < disp.size(); ++i) disp[i] = dt * d.velocity.velocity[i];
  DislocationNetwork next = pushforward(S, disp);
  const double e_push = energy_line(next, ev_, rule_).total;
  row.energy_decrement = e_push - d.energy;
  const double t_next = st.time + dt;
  bool changed = false;

  // Annihilation.
  {
    std::vector<Loop> kept;
    for (std::size_t li = 0; li < next.loops.size(); ++li) {
      const double L = next.loops[li].length();
      if (L < opt_.kappa * next.epsilon) {
        st.events.push_back({st.step, t_next, "annihilation",
                             json{{"loop", li}, {"length", L}, {"nodes", next.loops[li].size()}}.dump()});
        changed = true;
      } else {
        kept.push_back(std::move(next.loops[li]));
      }
    }
    next.loops = std::move(kept);
  }

  // Remeshing.
  const double hmin = opt_.h_min * next.epsilon, hmax = opt_.h_max * next.epsilon;
  bool out_of_band = false;
  for (const auto& l : next.loops)
    for (std::size_t k = 0; k < l.size() && !out_of_band; ++k) {
      const double h = norm(l.segment(k));
      out_of_band = h < hmin || h > hmax;
    }
  if (out_of_band) {
    const double e_before = changed ? energy_line(next, ev_, rule_).total : e_push;
    const std::size_t n_before = next.total_nodes();
    RemeshInfo info;
    next = remesh(next, hmin, hmax, &info);
    const double e_after = energy_line(next, ev_, rule_).total;
    row.remesh_perturbation = e_after - e_before;
    st.events.push_back({st.step, t_next, "remesh",
                         json{{"loops_resampled", info.loops_resampled},
                              {"nodes_before", n_before},
                              {"nodes_after", next.total_nodes()},
                              {"mass_before", info.mass_before},
                              {"mass_after", info.mass_after},
                              {"energy_perturbation", row.remesh_perturbation}}
                             .dump()});
    changed = true;
  }

  if (st.displacement_valid && !changed) {
    for (std::size_t i = 0; i < disp.size(); ++i) st.displacement[i] += disp[i];
  } else {
    st.displacement_valid = false;
    st.displacement.clear();
  }
  st.network = std::move(next);
  st.time = t_next;
  st.diagnostics.push_back(row);
  ++st.step;
}

bool Evolution::terminate_if_needed(EvolutionState& st) const {
  using nlohmann::json;
  if (st.finished) return true;
  auto finish = [&](const std::string& kind, const std::string& why, json detail) {
    st.events.push_back({st.step, st.time, kind, detail.dump()});
    st.finished = true;
    st.termination = why;
  };
  if (st.network.empty()) {
    finish("empty", "annihilated", json::object());
  } else if (st.time >= opt_.step.t_end - opt_.step.dt_min) {
    finish("t_end", "t_end", json{{"t_end", opt_.step.t_end}});
  } else if (st.step >= opt_.step.max_steps) {
    finish("max_steps", "max_steps", json{{"max_steps", opt_.step.max_steps}});
  }
  return st.finished;
}

void Evolution::run(EvolutionState& st, const std::function<void(const EvolutionState&)>& on_step) const {
  using nlohmann::json;
  while (!terminate_if_needed(st)) {
    const StepData d = evaluate(st.network);
    double dt = suggest_dt(st.network, d);
    if (std::isfinite(opt_.step.t_end)) dt = std::min(dt, opt_.step.t_end - st.time);
    if (dt < opt_.step.dt_min) {
      st.events.push_back({st.step, st.time, "dt_floor", json{{"dt", dt}, {"dt_min", opt_.step.dt_min}}.dump()});
      st.finished = true;
      st.termination = "dt_floor";
      break;
    }
    step(st, dt, d);
    if (on_step) on_step(st);
  }
}

BoundRatios Evolution::bound_monitor(const std::vector<DiagnosticsRow>& rows) {
  BoundRatios r;
  for (const auto& row : rows) r.update_max(row.ratios);
  return r;
}

}  // namespace ddd
