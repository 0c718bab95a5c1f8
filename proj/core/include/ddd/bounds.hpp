// A priori estimates of the force and velocity in terms of the mass M, the mass
// ratio Theta, eps, max|b| and min(alpha, beta). Every right-hand side carries
// the factor L = log(1 + 2M/(eps Theta)) and an unknown constant C; the
// constants below were fitted on circular loops (tools/ddd-calibrate) and are
// twice the largest observed ratio.
//
// L^1 and L^2 norms along the network are weighted by |b|, so that the L^1 norm
// of the unit tangent is the mass.
#pragma once

#include <cstddef>
#include <vector>

#include "ddd/energy_force.hpp"
#include "ddd/geometry.hpp"
#include "ddd/mobility.hpp"

namespace ddd {

struct BoundConstants {
  double pk_linf = 1.0;
  double pk_l2 = 1.0;
  double ap_vel = 1.0;
  double length_rate = 1.0;
  double v_uniform = 1.0;
  double dv_uniform = 1.0;
  double continuity = 1.0;
};

// Constants fitted for isotropic(1,1) elasticity and unit drag and alpha.
BoundConstants calibrated_constants();

struct BoundInputs {
  double mass = 0.0;
  double theta = 0.0;
  double epsilon = 1.0;
  double b_max = 0.0;
  double alpha = 1.0;
  double beta = 1.0;

  double log_factor() const;
  double min_alpha_beta() const;
};

BoundInputs bound_inputs(const DislocationNetwork& S, const MobilityModel& model, double theta_hat);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  // lhs/rhs; 0 when both vanish.
  double ratio() const;
};

// Right-hand sides with the constant set to 1.
double pk_linf_rhs(const BoundInputs& in);
double pk_l2_rhs(const BoundInputs& in);
double ap_vel_rhs(const BoundInputs& in);
double length_rate_rhs(const BoundInputs& in);
double v_uniform_rhs(const BoundInputs& in);
double dv_uniform_rhs(const BoundInputs& in);

// Envelope of the separable mass ODE; +infinity once the bracket is <= 0.
double mass_envelope(double M0, double t, const BoundInputs& in, double C);

struct NetworkNorms {
  double linf = 0.0;
  double l2 = 0.0;
  double grad_linf = 0.0;
  double grad_l1 = 0.0;
  double grad_l2 = 0.0;
  double h1() const;
};

// Norms of a node field (piecewise linear along each loop).
NetworkNorms field_norms(const DislocationNetwork& S, const std::vector<Vec3>& v);

struct BoundRatios {
  double pk_linf = 0.0;
  double pk_l2 = 0.0;
  double ap_vel = 0.0;
  double length_rate = 0.0;
  double v_uniform = 0.0;
  double dv_uniform = 0.0;
  double mass = 0.0;

  double max() const;
  void update_max(const BoundRatios& o);
};

// All ratios for one state. `M0` and `t` feed the mass envelope.
BoundRatios evaluate_bounds(const BoundInputs& in, const NetworkNorms& force, const NetworkNorms& velocity, double M0,
                            double t, const BoundConstants& C);

struct ForceBoundReport {
  BoundCheck linf;
  BoundCheck l2;
};

ForceBoundReport force_bound_report(const DislocationNetwork& S, const ForceField& f, double theta_hat,
                                    const BoundConstants& C = calibrated_constants());

struct ContinuityReport {
  BoundCheck check;
  double mass = 0.0;
  double g_linf = 0.0;
  double grad_g_linf = 0.0;
};

// Compares f^PK of (id + g)_# S pulled back to S with f^PK of S.
ContinuityReport continuity_check(const DislocationNetwork& S, const std::vector<Vec3>& g, const KernelEvaluator& ev,
                                  const LineQuadratureRule& rule, const BoundConstants& C = calibrated_constants());

}  // namespace ddd
