// Self-energy of a loop network and the Peach-Koehler force.
//
// Line form:    Phi = 1/2 sum_{p,q} \int\int K_abcd(x - y) b_a dx_b b'_c dy_d
// Surface form: E   = 1/2 \int\int J_abcd(s - t) b_a nu_b b'_c nu'_d dA dA
// Force:        G_k(s) = sum_q \int A_klm K_alcd,m(s - t) b_a(s) b_c(t) dt_d,
//               f(s) = tau(s) x G(s)   (= -dPhi/ds per unit length)
#pragma once

#include <cstddef>
#include <vector>

#include "ddd/geometry.hpp"
#include "ddd/kernels.hpp"
#include "ddd/quadrature.hpp"

namespace ddd {

struct EnergyBreakdown {
  double total = 0.0;
  std::size_t loops = 0;
  std::vector<double> pair;  // loops x loops, row-major; self-energies on the diagonal

  double at(std::size_t i, std::size_t j) const { return pair[i * loops + j]; }
};

EnergyBreakdown energy_line(const DislocationNetwork& S, const KernelEvaluator& ev, const LineQuadratureRule& rule);

struct EnergyGradient {
  double energy = 0.0;
  std::vector<Vec3> gradient;  // dPhi/dx for every node, global order
};

// Energy of the discrete network and its exact derivative with respect to the
// node positions.
EnergyGradient discrete_energy_gradient(const DislocationNetwork& S, const KernelEvaluator& ev,
                                        const LineQuadratureRule& rule);

struct SurfaceQuadratureOptions {
  // A triangle pair is integrated with the 3x3-point product rule once both
  // diameters are below tau * max(eps, distance); otherwise the larger one is
  // split into four.
  double tau = 1.0;
  int max_depth = 16;
};

double energy_surface(const std::vector<SpanningSurface>& T, const KernelEvaluator& ev,
                      const SurfaceQuadratureOptions& opt = {});

struct ForceField {
  std::vector<Vec3> force;           // f^PK at each node
  std::vector<Vec3> G;               // auxiliary field G(s, S)
  std::vector<Vec3> tangent;         // node tangents used for f = tau x G
  std::vector<double> lumped_length; // half the adjacent segment lengths
};

ForceField pk_force(const DislocationNetwork& S, const KernelEvaluator& ev, const LineQuadratureRule& rule);

// Nodal force density of the discrete energy, f_i = -P(tau_i) dPhi/dx_i / l_i.
// Tends to pk_force under refinement; the time stepper uses it because it pairs
// exactly with node displacements. G is left empty. Writes Phi to `energy` if given.
ForceField variational_force(const DislocationNetwork& S, const KernelEvaluator& ev, const LineQuadratureRule& rule,
                             double* energy = nullptr);

// G at an arbitrary point s carrying Burgers vector b_s, from the line form.
Vec3 pk_G_line(const Vec3& s, const Vec3& b_s, const DislocationNetwork& S, const KernelEvaluator& ev,
               const LineQuadratureRule& rule);

// G from the slip-surface form (cross-check only; needs second derivatives).
Vec3 pk_G_surface(const Vec3& s, const Vec3& b_s, const std::vector<SpanningSurface>& T, const KernelEvaluator& ev,
                  const SurfaceQuadratureOptions& opt = {});

}  // namespace ddd
