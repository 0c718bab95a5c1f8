#pragma once

#include <vector>

#include "ddd/linalg.hpp"

namespace ddd {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
GaussRule gauss_legendre(int n);

// Gauss-Legendre on [0,1]; weights sum to 1, exact to degree 2*order-1.
struct LineQuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
  int order = 0;
};
LineQuadratureRule make_line_rule(int order = 4);

// Product rule on the unit sphere: Gauss-Legendre in cos(theta) (n nodes) times
// the trapezoid rule in phi (2n nodes). Exact for spherical polynomials of degree
// up to 2n-1. The node set is closed under z -> -z.
struct SphericalQuadrature {
  int order = 0;
  std::vector<Vec3> nodes;
  std::vector<double> weights;  // sum to 4*pi

  // Representatives of the antipodal pairs with doubled weights; integrates even
  // functions exactly as the full rule does.
  std::vector<Vec3> hemi_nodes;
  std::vector<double> hemi_weights;
};
SphericalQuadrature make_spherical_quadrature(int order = 24);

}  // namespace ddd
