// Dissipation model: Psi(v) = \int 1/2 alpha |grad_tau v|^2 + psi(b, tau, v),
// psi = 1/2 v.B^+ v on the plane normal to tau and +inf off it.
//
// B maps force to velocity (v = B f), so its entries are mobilities. For the
// BCC model the eigenvalues are c1 along P(tau) b and c2/|b|^2 along b ^ tau with
//   c1 = (|b^tau|^2/B_eg^2 + (b.tau)^2/B_s^2)^(-1/2),
//   c2 = sqrt(B_ec^2 |b^tau|^2 + B_s^2 (b.tau)^2).
// Both terms are 0/0 at screw orientation, where the eigenvalues meet at B_s/|b|;
// below screw_tolerance*|b| the matrix is replaced by the mean of the two
// eigenvalues times P(tau), blended linearly up to twice the tolerance.
#pragma once

#include <variant>

#include "ddd/linalg.hpp"

namespace ddd {

struct IsotropicDrag {
  double m = 1.0;  // drag: B = P(tau)/m
};

struct BccDrag {
  double B_eg = 1.0;
  double B_ec = 1.0;
  double B_s = 1.0;
};

struct MobilityModel {
  double alpha = 1.0;
  std::variant<IsotropicDrag, BccDrag> kind = IsotropicDrag{};
  double screw_tolerance = 1e-6;

  // Throws InvalidArgument on non-positive parameters.
  void validate() const;
  // psi(v) >= beta/2 |v|^2: m for isotropic drag, 1/max(B_eg, B_ec, B_s) for
  // BCC (valid for |b| >= 1, the lattice normalization).
  double beta() const;
};

struct DragMatrix {
  Mat3 matrix;          // B
  Mat3 pseudo_inverse;  // B^+
  Vec3 tangent;
};

DragMatrix drag_matrix(const MobilityModel& model, const Vec3& b, const Vec3& tau);

// Gradient-penalty matrix A(b, tau) = alpha I.
Mat3 gradient_penalty(const MobilityModel& model, const Vec3& b, const Vec3& tau);

// +infinity when |v.tau| > 1e-10 |v|.
double psi(const MobilityModel& model, const Vec3& b, const Vec3& tau, const Vec3& v);
double psi_star(const MobilityModel& model, const Vec3& b, const Vec3& tau, const Vec3& f);
// P(tau) B^+ v; requires |v.tau| <= 1e-10 max(|v|, 1).
Vec3 dpsi_perp(const MobilityModel& model, const Vec3& b, const Vec3& tau, const Vec3& v);

}  // namespace ddd
