#include "ddd/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddd/elasticity.hpp"
#include "ddd/error.hpp"

namespace ddd {

void MobilityModel::validate() const {
  if (!(alpha > 0.0)) throw InvalidArgument("mobility: alpha must be positive");
  if (!(screw_tolerance >= 0.0 && screw_tolerance < 0.5)) throw InvalidArgument("mobility: screw_tolerance must be in [0, 0.5)");
  if (const auto* iso = std::get_if<IsotropicDrag>(&kind)) {
    if (!(iso->m > 0.0)) throw InvalidArgument("mobility: m must be positive");
  } else {
    const auto& bcc = std::get<BccDrag>(kind);
    if (!(bcc.B_eg > 0.0 && bcc.B_ec > 0.0 && bcc.B_s > 0.0)) throw InvalidArgument("mobility: B_eg, B_ec and B_s must be positive");
  }
}

double MobilityModel::beta() const {
  if (const auto* iso = std::get_if<IsotropicDrag>(&kind)) return iso->m;
  const auto& bcc = std::get<BccDrag>(kind);
  return 1.0 / std::max({bcc.B_eg, bcc.B_ec, bcc.B_s});
}

namespace {

void check_tau(const Vec3& tau) {
  if (std::fabs(norm(tau) - 1.0) > 1e-10) throw InvalidArgument("mobility: tangent must be a unit vector");
}

// Pseudo-inverse of a symmetric PSD matrix whose kernel is exactly span(tau).
Mat3 normal_plane_pinv(const Mat3& B, const Vec3& tau) {
  const Mat3 tt = Mat3::outer(tau, tau);
  return inverse_symmetric(B + tt) - tt;
}

}  // namespace

DragMatrix drag_matrix(const MobilityModel& model, const Vec3& b, const Vec3& tau) {
  check_tau(tau);
  const double bn = norm(b);
  if (!(bn > 0.0)) throw InvalidArgument("mobility: zero Burgers vector");
  DragMatrix D;
  D.tangent = tau;
  const Mat3 P = normal_projector(tau);
  if (const auto* iso = std::get_if<IsotropicDrag>(&model.kind)) {
    D.matrix = (1.0 / iso->m) * P;
    D.pseudo_inverse = iso->m * P;
    return D;
  }
  const auto& bcc = std::get<BccDrag>(model.kind);
  const Vec3 bxt = cross(b, tau);
  const double w = norm(bxt);
  const double bt = dot(b, tau);
  const double tol = model.screw_tolerance * bn;
  const double c1_screw = bcc.B_s / bn;
  const Mat3 B_screw = c1_screw * P;
  if (w <= tol) {
    D.matrix = B_screw;
    D.pseudo_inverse = (1.0 / c1_screw) * P;
    return D;
  }
  const double c1 = 1.0 / std::sqrt(w * w / (bcc.B_eg * bcc.B_eg) + bt * bt / (bcc.B_s * bcc.B_s));
  const double c2 = std::sqrt(bcc.B_ec * bcc.B_ec * w * w + bcc.B_s * bcc.B_s * bt * bt) / (bn * bn);
  const Vec3 e1 = (P * b) / w;  // |P(tau) b| = |b ^ tau|
  const Vec3 e2 = bxt / w;
  Mat3 B = c1 * Mat3::outer(e1, e1) + c2 * Mat3::outer(e2, e2);
  if (w < 2.0 * tol) {
    const double s = (2.0 * tol - w) / tol;  // 1 at tol, 0 at 2 tol
    const Mat3 Bs = 0.5 * (c1 + c2) * P;
    B = (1.0 - s) * B + s * Bs;
    D.matrix = B;
    D.pseudo_inverse = normal_plane_pinv(B, tau);
    return D;
  }
  D.matrix = B;
  D.pseudo_inverse = (1.0 / c1) * Mat3::outer(e1, e1) + (1.0 / c2) * Mat3::outer(e2, e2);
  return D;
}

Mat3 gradient_penalty(const MobilityModel& model, const Vec3&, const Vec3&) { return model.alpha * Mat3::identity(); }

double psi(const MobilityModel& model, const Vec3& b, const Vec3& tau, const Vec3& v) {
  if (std::fabs(dot(v, tau)) > 1e-10 * norm(v)) return std::numeric_limits<double>::infinity();
  const DragMatrix D = drag_matrix(model, b, tau);
  return 0.5 * dot(v, D.pseudo_inverse * v);
}

double psi_star(const MobilityModel& model, const Vec3& b, const Vec3& tau, const Vec3& f) {
  const DragMatrix D = drag_matrix(model, b, tau);
  return 0.5 * dot(f, D.matrix * f);
}

Vec3 dpsi_perp(const MobilityModel& model, const Vec3& b, const Vec3& tau, const Vec3& v) {
  if (std::fabs(dot(v, tau)) > 1e-10 * std::max(norm(v), 1.0))
    throw InvalidArgument("dpsi_perp: velocity is not normal to the tangent");
  const DragMatrix D = drag_matrix(model, b, tau);
  return normal_projector(tau) * (D.pseudo_inverse * v);
}

}  // namespace ddd
