#include "ddd/quadrature.hpp"

#include <cmath>

#include "doctest.h"

using namespace ddd;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
  for (int n : {1, 3, 8, 16}) {
    const GaussRule g = gauss_legendre(n);
    REQUIRE(g.x.size() == static_cast<std::size_t>(n));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.w[i] * std::pow(g.x[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("line rule on [0,1]") {
  const LineQuadratureRule r = make_line_rule(4);
  double s = 0.0, m = 0.0;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    s += r.weights[i];
    m += r.weights[i] * std::pow(r.points[i], 7);
  }
  CHECK(s == doctest::Approx(1.0));
  CHECK(m == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("spherical rule: area, monomials and antipodal closure") {
  const SphericalQuadrature q = make_spherical_quadrature(12);
  double area = 0.0, z2 = 0.0, xyz2 = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const Vec3& z = q.nodes[i];
    area += q.weights[i];
    z2 += q.weights[i] * z[2] * z[2];
    xyz2 += q.weights[i] * z[0] * z[0] * z[1] * z[1] * z[2] * z[2];
  }
  CHECK(area == doctest::Approx(4.0 * M_PI));
  CHECK(z2 == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(xyz2 == doctest::Approx(4.0 * M_PI / 105.0));
  CHECK(q.hemi_nodes.size() * 2 == q.nodes.size());
  double hemi = 0.0;
  for (double w : q.hemi_weights) hemi += w;
  CHECK(hemi == doctest::Approx(4.0 * M_PI));
}
