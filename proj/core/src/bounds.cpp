#include "ddd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddd/error.hpp"

namespace ddd {

BoundConstants calibrated_constants() {
  // ddd-calibrate defaults: circles R/eps in {5, 10, 20, 40}, h = eps/2, glide
  // and prismatic Burgers vectors, 5 steps each, twice the observed maxima.
  BoundConstants c;
  c.pk_linf = 0.013046809829093883;
  c.pk_l2 = 0.013046809829093838;
  c.ap_vel = 0.012769042703580962;
  c.length_rate = 0.002620822842474119;
  c.v_uniform = 0.0016014547024006496;
  c.dv_uniform = 9.940321657784687e-06;
  c.continuity = 0.0005005304653334808;
  return c;
}

double BoundInputs::log_factor() const {
  if (!(theta > 0.0)) return 0.0;
  return std::log1p(2.0 * mass / (epsilon * theta));
}

double BoundInputs::min_alpha_beta() const { return std::min(alpha, beta); }

BoundInputs bound_inputs(const DislocationNetwork& S, const MobilityModel& model, double theta_hat) {
  BoundInputs in;
  in.mass = mass(S);
  in.theta = theta_hat;
  in.epsilon = S.epsilon;
  for (const auto& l : S.loops) in.b_max = std::max(in.b_max, l.burgers.norm());
  in.alpha = model.alpha;
  in.beta = model.beta();
  return in;
}

double BoundCheck::ratio() const {
  if (lhs == 0.0) return 0.0;
  if (!(rhs > 0.0)) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

double pk_linf_rhs(const BoundInputs& in) { return in.b_max * in.theta * in.log_factor() / in.epsilon; }

double pk_l2_rhs(const BoundInputs& in) { return std::sqrt(in.mass) * pk_linf_rhs(in); }

double ap_vel_rhs(const BoundInputs& in) { return pk_l2_rhs(in) / in.min_alpha_beta(); }

double length_rate_rhs(const BoundInputs& in) { return in.mass * pk_linf_rhs(in) / in.min_alpha_beta(); }

double v_uniform_rhs(const BoundInputs& in) {
  return std::sqrt(1.0 + 2.0 * in.mass) * pk_linf_rhs(in) / in.min_alpha_beta();
}

double dv_uniform_rhs(const BoundInputs& in) {
  return (1.0 + std::sqrt(1.0 + 2.0 * in.mass) / in.min_alpha_beta()) * in.mass * pk_linf_rhs(in) / in.alpha;
}

double mass_envelope(double M0, double t, const BoundInputs& in, double C) {
  // M0 / (1 - 2 C t |b| M0 / (eps^2 min(alpha, beta))), exact at t = 0.
  const double bracket = 1.0 - 2.0 * C * t * in.b_max * M0 / (in.epsilon * in.epsilon * in.min_alpha_beta());
  if (!(bracket > 0.0)) return std::numeric_limits<double>::infinity();
  return M0 / bracket;
}

double NetworkNorms::h1() const { return std::sqrt(l2 * l2 + grad_l2 * grad_l2); }

NetworkNorms field_norms(const DislocationNetwork& S, const std::vector<Vec3>& v) {
  if (v.size() != S.total_nodes()) throw InvalidArgument("field_norms: field size does not match node count");
  NetworkNorms n;
  double l2 = 0.0, gl2 = 0.0;
  std::size_t g = 0;
  for (const auto& l : S.loops) {
    const double bw = l.burgers.norm();
    const std::size_t m = l.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Vec3& a = v[g + k];
      const Vec3& b = v[g + (k + 1) % m];
      const double h = norm(l.segment(k));
      const double d = norm(b - a);
      n.linf = std::max(n.linf, norm(a));
      n.grad_linf = std::max(n.grad_linf, d / h);
      n.grad_l1 += bw * d;
      gl2 += bw * d * d / h;
      // Trapezoid on each segment (the lumped mass).
      l2 += bw * 0.5 * h * (dot(a, a) + dot(b, b));
    }
    g += m;
  }
  n.l2 = std::sqrt(l2);
  n.grad_l2 = std::sqrt(gl2);
  return n;
}

double BoundRatios::max() const {
  return std::max({pk_linf, pk_l2, ap_vel, length_rate, v_uniform, dv_uniform, mass});
}

void BoundRatios::update_max(const BoundRatios& o) {
  pk_linf = std::max(pk_linf, o.pk_linf);
  pk_l2 = std::max(pk_l2, o.pk_l2);
  ap_vel = std::max(ap_vel, o.ap_vel);
  length_rate = std::max(length_rate, o.length_rate);
  v_uniform = std::max(v_uniform, o.v_uniform);
  dv_uniform = std::max(dv_uniform, o.dv_uniform);
  mass = std::max(mass, o.mass);
}

BoundRatios evaluate_bounds(const BoundInputs& in, const NetworkNorms& force, const NetworkNorms& velocity, double M0,
                            double t, const BoundConstants& C) {
  BoundRatios r;
  r.pk_linf = BoundCheck{force.linf, C.pk_linf * pk_linf_rhs(in)}.ratio();
  r.pk_l2 = BoundCheck{force.l2, C.pk_l2 * pk_l2_rhs(in)}.ratio();
  r.ap_vel = BoundCheck{velocity.h1(), C.ap_vel * ap_vel_rhs(in)}.ratio();
  r.length_rate = BoundCheck{velocity.grad_l1, C.length_rate * length_rate_rhs(in)}.ratio();
  r.v_uniform = BoundCheck{velocity.linf, C.v_uniform * v_uniform_rhs(in)}.ratio();
  r.dv_uniform = BoundCheck{velocity.grad_linf, C.dv_uniform * dv_uniform_rhs(in)}.ratio();
  r.mass = BoundCheck{in.mass, mass_envelope(M0, t, in, C.length_rate)}.ratio();
  return r;
}

ForceBoundReport force_bound_report(const DislocationNetwork& S, const ForceField& f, double theta_hat,
                                    const BoundConstants& C) {
  const BoundInputs in = bound_inputs(S, MobilityModel{}, theta_hat);
  const NetworkNorms n = field_norms(S, f.force);
  ForceBoundReport r;
  r.linf = {n.linf, C.pk_linf * pk_linf_rhs(in)};
  r.l2 = {n.l2, C.pk_l2 * pk_l2_rhs(in)};
  return r;
}

ContinuityReport continuity_check(const DislocationNetwork& S, const std::vector<Vec3>& g, const KernelEvaluator& ev,
                                  const LineQuadratureRule& rule, const BoundConstants& C) {
  const DislocationNetwork moved = pushforward(S, g);
  const ForceField f0 = pk_force(S, ev, rule);
  const ForceField f1 = pk_force(moved, ev, rule);
  ContinuityReport r;
  r.mass = mass(S);
  const NetworkNorms gn = field_norms(S, g);
  r.g_linf = gn.linf;
  r.grad_g_linf = gn.grad_linf;
  double diff = 0.0;
  for (std::size_t i = 0; i < f0.force.size(); ++i) diff = std::max(diff, norm(f1.force[i] - f0.force[i]));
  r.check.lhs = diff;
  r.check.rhs = (1.0 + C.continuity * r.mass) * r.grad_g_linf + C.continuity * r.mass * r.g_linf;
  return r;
}

}  // namespace ddd
