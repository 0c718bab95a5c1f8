// Velocity solve and explicit time stepping.
//
// Each step minimizes  Psi(v) - <f, v>  over velocities with v.tau = 0, using
// periodic piecewise-linear elements on every loop and two unknowns per node
// (an orthonormal basis of the plane normal to the node tangent), then moves
// the nodes by dt v. Lumped mass: the drag term and the load are evaluated at
// the nodes with half the adjacent segment lengths.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ddd/bounds.hpp"
#include "ddd/energy_force.hpp"
#include "ddd/geometry.hpp"
#include "ddd/kernels.hpp"
#include "ddd/mobility.hpp"
#include "ddd/quadrature.hpp"

namespace ddd {

struct VelocityField {
  std::vector<Vec3> velocity;
  std::vector<Vec3> tangent;
  double residual = 0.0;  // relative residual of the linear solve
};

// Throws NumericalError on hairpin nodes or a failed solve.
VelocityField solve_velocity(const DislocationNetwork& S, const ForceField& f, const MobilityModel& model);

// Orthonormal pair spanning the plane normal to a unit vector.
std::array<Vec3, 2> normal_basis(const Vec3& tau);

// Discrete bilinear form a(v, w) = sum alpha dv.dw / h + l v.B^+ w and load
// (f, w) = sum l f.w, for checking solutions.
double weak_form_bilinear(const DislocationNetwork& S, const std::vector<Vec3>& tangent, const MobilityModel& model,
                          const std::vector<Vec3>& v, const std::vector<Vec3>& w);
double weak_form_load(const DislocationNetwork& S, const ForceField& f, const std::vector<Vec3>& w);

enum class ForceModel {
  Variational,  // -dPhi/dx per unit length (consistent with the discrete energy)
  LineFormula,  // tau x G evaluated at the nodes
};

struct StepPolicy {
  double c1 = 0.1;  // dt <= c1 eps / |v|_inf
  double c2 = 0.1;  // dt <= c2 / |grad v|_inf
  double dt_max = 1.0;
  double dt_min = 1e-10;
  double t_end = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 100000;
};

struct EvolutionOptions {
  StepPolicy step;
  double h_min = 0.3;  // remesh band, multiples of eps
  double h_max = 1.0;
  double kappa = 3.0;  // loops shorter than kappa eps are removed
  double theta_max = 50.0;
  ForceModel force = ForceModel::Variational;
  BoundConstants constants = calibrated_constants();

  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct DiagnosticsRow {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  std::size_t loops = 0;
  std::size_t nodes = 0;
  double mass = 0.0;
  double theta_hat = 0.0;
  double energy = 0.0;
  double v_inf = 0.0;
  double dv_inf = 0.0;
  double f_inf = 0.0;
  double f_dot_v = 0.0;           // sum_i l_i f_i.v_i
  double energy_decrement = 0.0;  // Phi(S + dt v) - Phi(S), before remeshing
  double remesh_perturbation = 0.0;
  BoundRatios ratios;
};

// Column names for DiagnosticsRow, in CSV order.
const std::vector<std::string>& diagnostics_columns();
std::vector<double> diagnostics_values(const DiagnosticsRow& row);

struct Event {
  std::size_t step = 0;
  double t = 0.0;
  std::string kind;    // remesh, annihilation, blowup, dt_floor, t_end, empty, max_steps
  std::string detail;  // JSON object text
};

struct EvolutionState {
  double time = 0.0;
  std::size_t step = 0;
  DislocationNetwork network;
  double initial_mass = 0.0;
  // Node displacement from S0; valid until the node set first changes.
  std::vector<Vec3> displacement;
  bool displacement_valid = true;
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<Event> events;
  bool finished = false;
  std::string termination;
};

// Force, velocity and energy at one state.
struct StepData {
  ForceField force;
  VelocityField velocity;
  double energy = 0.0;
  NetworkNorms force_norms;
  NetworkNorms velocity_norms;
  double f_dot_v = 0.0;
};

class Evolution {
 public:
  Evolution(const KernelEvaluator& ev, MobilityModel model, LineQuadratureRule rule, EvolutionOptions opt = {});

  const EvolutionOptions& options() const { return opt_; }
  const MobilityModel& model() const { return model_; }

  EvolutionState start(const DislocationNetwork& S0) const;
  StepData evaluate(const DislocationNetwork& S) const;
  // Stable step size for the given data (before clipping to t_end).
  double suggest_dt(const DislocationNetwork& S, const StepData& d) const;

  // One explicit step of size dt >= 0 (dt = 0 only appends diagnostics).
  void step(EvolutionState& st, double dt) const;
  void step(EvolutionState& st, double dt, const StepData& d) const;

  // Steps with the policy dt until termination. `on_step` runs after each step.
  void run(EvolutionState& st, const std::function<void(const EvolutionState&)>& on_step = {}) const;

  // Largest ratio of every monitored bound over the recorded steps.
  static BoundRatios bound_monitor(const std::vector<DiagnosticsRow>& rows);

 private:
  bool terminate_if_needed(EvolutionState& st) const;

  const KernelEvaluator& ev_;
  MobilityModel model_;
  LineQuadratureRule rule_;
  EvolutionOptions opt_;
};

}  // namespace ddd
