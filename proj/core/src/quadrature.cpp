#include "ddd/quadrature.hpp"

#include <cmath>

#include "ddd/error.hpp"

namespace ddd {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: order must be >= 1");
  GaussRule r;
  r.x.assign(static_cast<std::size_t>(n), 0.0);
  r.w.assign(static_cast<std::size_t>(n), 0.0);
  int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    {
      // Recompute the derivative at the converged root.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    auto lo = static_cast<std::size_t>(i);
    auto hi = static_cast<std::size_t>(n - 1 - i);
    r.x[lo] = -x;
    r.x[hi] = x;
    r.w[lo] = w;
    r.w[hi] = w;
  }
  if (n % 2 == 1) r.x[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

LineQuadratureRule make_line_rule(int order) {
  GaussRule g = gauss_legendre(order);
  LineQuadratureRule r;
  r.order = order;
  for (int i = 0; i < order; ++i) {
    r.points.push_back(0.5 * (g.x[static_cast<std::size_t>(i)] + 1.0));
    r.weights.push_back(0.5 * g.w[static_cast<std::size_t>(i)]);
  }
  return r;
}

SphericalQuadrature make_spherical_quadrature(int order) {
  if (order < 2) throw InvalidArgument("spherical quadrature order must be >= 2");
  SphericalQuadrature q;
  q.order = order;
  GaussRule g = gauss_legendre(order);
  const int nphi = 2 * order;
  const double dphi = 2.0 * M_PI / nphi;
  for (int i = 0; i < order; ++i) {
    double ct = g.x[static_cast<std::size_t>(i)];
    double st = std::sqrt(std::fmax(0.0, 1.0 - ct * ct));
    for (int j = 0; j < nphi; ++j) {
      double ph = j * dphi;
      Vec3 z{st * std::cos(ph), st * std::sin(ph), ct};
      double w = g.w[static_cast<std::size_t>(i)] * dphi;
      q.nodes.push_back(z);
      q.weights.push_back(w);
      // Upper hemisphere, plus half of the equatorial ring when order is odd.
      bool keep = ct > 0.0 || (ct == 0.0 && j < order);
      if (keep) {
        q.hemi_nodes.push_back(z);
        q.hemi_weights.push_back(2.0 * w);
      }
    }
  }
  return q;
}

}  // namespace ddd
