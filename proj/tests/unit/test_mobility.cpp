#include "ddd/mobility.hpp"

#include <cmath>
#include <limits>

#include "ddd/error.hpp"
#include "doctest.h"

using namespace ddd;

TEST_CASE("isotropic drag") {
  MobilityModel m;
  m.kind = IsotropicDrag{2.0};
  const Vec3 tau = normalized(Vec3(1, 1, 0));
  const DragMatrix D = drag_matrix(m, {1, 0, 0}, tau);
  CHECK(max_abs(D.matrix - 0.5 * normal_projector(tau)) < 1e-15);
  CHECK(max_abs(D.pseudo_inverse - 2.0 * normal_projector(tau)) < 1e-15);
  CHECK(m.beta() == 2.0);
  const Vec3 v(0, 0, 3);
  CHECK(psi(m, {1, 0, 0}, tau, v) == doctest::Approx(0.5 * 2.0 * 9.0));
  CHECK(psi(m, {1, 0, 0}, tau, Vec3(1, 0, 0)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("BCC drag eigenvalues for an edge segment") {
  MobilityModel m;
  m.kind = BccDrag{2.0, 0.5, 1.0};
  const Vec3 b(1, 0, 0), tau(0, 1, 0);
  const DragMatrix D = drag_matrix(m, b, tau);
  // Glide along b with mobility B_eg, climb along b ^ tau with B_ec.
  CHECK(D.matrix(0, 0) == doctest::Approx(2.0));
  CHECK(D.matrix(2, 2) == doctest::Approx(0.5));
  CHECK(std::fabs(D.matrix(1, 1)) < 1e-15);
}

TEST_CASE("BCC drag is continuous through screw orientation") {
  MobilityModel m;
  m.kind = BccDrag{2.0, 0.5, 1.0};
  const Vec3 b(1, 1, 1);
  const Vec3 screw = normalized(b);
  const Vec3 off = normalized(cross(b, Vec3(1, 0, 0)));
  const DragMatrix D0 = drag_matrix(m, b, screw);
  CHECK(max_abs(D0.matrix - (1.0 / std::sqrt(3.0)) * normal_projector(screw)) < 1e-12);
  const DragMatrix D1 = drag_matrix(m, b, normalized(screw + 1e-7 * off));
  CHECK(max_abs(D1.matrix - D0.matrix) < 1e-5);
}

TEST_CASE("Fenchel-Young equality at v = B f") {
  MobilityModel m;
  m.kind = BccDrag{1.5, 0.3, 0.8};
  const Vec3 b(1, 0, 1), tau = normalized(Vec3(0.2, 1.0, -0.4)), f(0.3, -1.2, 0.7);
  const DragMatrix D = drag_matrix(m, b, tau);
  const Vec3 v = D.matrix * f;
  CHECK(dot(f, v) == doctest::Approx(psi(m, b, tau, v) + psi_star(m, b, tau, f)));
  CHECK(norm(dpsi_perp(m, b, tau, v) - normal_projector(tau) * f) < 1e-12);
  CHECK_THROWS_AS(dpsi_perp(m, b, tau, tau), InvalidArgument);
}

TEST_CASE("invalid parameters are rejected") {
  MobilityModel m;
  m.alpha = 0.0;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m.alpha = 1.0;
  m.kind = BccDrag{1.0, -1.0, 1.0};
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m.kind = BccDrag{4.0, 1.0, 2.0};
  CHECK(m.beta() == doctest::Approx(0.25));
}

TEST_CASE("gradient penalty is alpha times the identity") {
  MobilityModel m;
  m.alpha = 0.3;
  CHECK(max_abs(gradient_penalty(m, {1, 0, 0}, {0, 1, 0}) - 0.3 * Mat3::identity()) == 0.0);
}
