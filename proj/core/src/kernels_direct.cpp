// Real-space evaluation of K^eps for isotropic media, used only as a check on
// the sphere-integral evaluator. Everything is done at eps = 1 and rescaled.
//
// With the Gaussian-mollified Kelvin solution G_ij = (delta_ij Lap R - kappa R,ij)/(8 pi mu),
// R = r * phi (phi the unit Gaussian) has the closed form
//   R(r) = (r + 1/r) erf(r/sqrt2) + sqrt(2/pi) exp(-r^2/2).
#include <cmath>
#include <vector>

#include "ddd/error.hpp"
#include "ddd/kernels.hpp"
#include "ddd/quadrature.hpp"

namespace ddd {

namespace {

struct RadialDerivs {
  double h1, g2, g3;
};

// h1 = (Lap R)'/r, g2 = (R'/r)'/r, g3 = g2'/r.
RadialDerivs radial_derivs(double r) {
  RadialDerivs d{};
  if (r < 2.5) {
    const double r2 = r * r;
    double cn = std::sqrt(2.0 / M_PI) * 2.0;  // c_n without sign and 1/(2^n n! (4n^2-1))
    // c_n = sqrt(2/pi) (-1)^(n+1) 2 / (2^n n! (4n^2 - 1))
    double fac = 1.0;  // 2^n n!
    for (int n = 1; n < 48; ++n) {
      fac *= 2.0 * n;
      double c = cn * ((n % 2 == 1) ? 1.0 : -1.0) / (fac * (4.0 * n * n - 1.0));
      double two_n = 2.0 * n;
      if (n >= 2) {
        double p = std::pow(r2, n - 2);
        d.g2 += two_n * (two_n - 2.0) * c * p;
        d.h1 += two_n * (two_n + 1.0) * (two_n - 2.0) * c * p;
      }
      if (n >= 3) d.g3 += two_n * (two_n - 2.0) * (two_n - 4.0) * c * std::pow(r2, n - 3);
    }
    return d;
  }
  const double E = std::erf(r / std::sqrt(2.0));
  const double e = std::sqrt(2.0 / M_PI) * std::exp(-0.5 * r * r);  // sqrt2 e^{-r^2/2} / sqrt(pi)
  const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2, r5 = r4 * r, r6 = r4 * r2, r7 = r6 * r;
  d.h1 = 2.0 * e / r2 - 2.0 * E / r3;
  d.g2 = -E / r3 - 3.0 * e / r4 + 3.0 * E / r5;
  d.g3 = 2.0 * e / r4 + 3.0 * E / r5 + 15.0 * e / r6 - 15.0 * E / r7;
  return d;
}

// W[(ab)][(kp)] = A_bpl C_ijkl G_ai,j(y) for isotropic C.
void w_tensor(double lambda, double mu, const Vec3& y, double W[9][9]) {
  const double r = norm(y);
  const RadialDerivs d = radial_derivs(r);
  const double kappa = (lambda + mu) / (lambda + 2.0 * mu);
  const double pre = 1.0 / (8.0 * M_PI * mu);
  double G[3][3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double v = -kappa * d.g3 * y[i] * y[j] * y[k];
        double sym = (i == j ? y[k] : 0.0) + (i == k ? y[j] : 0.0) + (j == k ? y[i] : 0.0);
        v -= kappa * d.g2 * sym;
        if (i == j) v += d.h1 * y[k];
        G[i][j][k] = pre * v;
      }
  double div[3];
  for (int a = 0; a < 3; ++a) div[a] = G[a][0][0] + G[a][1][1] + G[a][2][2];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k)
        for (int p = 0; p < 3; ++p) {
          double v = lambda * levi_civita(b, p, k) * div[a];
          for (int l = 0; l < 3; ++l) {
            double A = levi_civita(b, p, l);
            if (A != 0.0) v += mu * A * (G[a][k][l] + G[a][l][k]);
          }
          W[3 * a + b][3 * k + p] = v;
        }
}

struct Panel1D {
  std::vector<double> x, w;
};

void add_panels(Panel1D& out, double a, double b, int panels, const GaussRule& g) {
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      out.x.push_back(lo + 0.5 * h * (g.x[i] + 1.0));
      out.w.push_back(0.5 * h * g.w[i]);
    }
  }
}

}  // namespace

Tensor4 eval_K_direct(const ElasticityTensor& C, const MollifierProfile& profile, const Vec3& s_in, int refine) {
  if (!C.is_isotropic()) throw InvalidArgument("eval_K_direct: only isotropic elasticity is supported");
  if (refine < 0) throw InvalidArgument("eval_K_direct: refine must be >= 0");
  const double lambda = C.lambda(), mu = C.mu();
  const double eps = profile.epsilon;
  const Vec3 s = s_in / eps;
  const double ds = norm(s);
  const int mult = 1 << refine;
  const GaussRule g = gauss_legendre(10);

  Vec3 ez = ds > 0.0 ? s / ds : Vec3(0, 0, 1);
  Vec3 ex = std::fabs(ez[0]) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  ex = normalized(ex - dot(ex, ez) * ez);
  Vec3 ey = cross(ez, ex);

  // Radial nodes: panels of width ~0.5 out to |s| + 8, then r = 1/u on the tail.
  const double rmax = ds + 8.0;
  Panel1D rq;
  add_panels(rq, 0.0, rmax, mult * static_cast<int>(std::ceil(rmax / 0.5)), g);
  {
    Panel1D uq;
    add_panels(uq, 0.0, 1.0 / rmax, 4 * mult, g);
    for (std::size_t i = 0; i < uq.x.size(); ++i) {
      double r = 1.0 / uq.x[i];
      rq.x.push_back(r);
      rq.w.push_back(uq.w[i] * r * r);
    }
  }
  // Polar nodes, graded towards the axis where the shifted factor peaks.
  Panel1D tq;
  double t0 = 0.0;
  if (ds > 2.0) {
    for (double b : {1.0, 2.0, 4.0, 8.0}) {
      double t1 = b / ds;
      if (t1 >= 1.0) break;
      add_panels(tq, t0, t1, mult, g);
      t0 = t1;
    }
  }
  add_panels(tq, t0, M_PI, mult * static_cast<int>(std::ceil((M_PI - t0) / 0.25)), g);
  const int nphi = 16;

  double acc[9][9] = {};
  double W1[9][9], W2[9][9];
  for (std::size_t it = 0; it < tq.x.size(); ++it) {
    const double ct = std::cos(tq.x[it]), st = std::sin(tq.x[it]);
    for (std::size_t ir = 0; ir < rq.x.size(); ++ir) {
      const double r = rq.x[ir];
      const double wrt = rq.w[ir] * tq.w[it] * r * r * st * (2.0 * M_PI / nphi);
      if (wrt == 0.0) continue;
      for (int ip = 0; ip < nphi; ++ip) {
        const double ph = 2.0 * M_PI * ip / nphi;
        const Vec3 x = r * (st * std::cos(ph) * ex + st * std::sin(ph) * ey + ct * ez);
        w_tensor(lambda, mu, x - s, W1);
        w_tensor(lambda, mu, x, W2);
        // C_abcd W1_ab;kp W2_cd;gq = lambda tr W1 tr W2 + mu W1_ab (W2_ab + W2_ba)
        double tr1[9], tr2[9];
        for (int q = 0; q < 9; ++q) {
          tr1[q] = W1[0][q] + W1[4][q] + W1[8][q];
          tr2[q] = W2[0][q] + W2[4][q] + W2[8][q];
        }
        double S2[9][9];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            for (int q = 0; q < 9; ++q) S2[3 * a + b][q] = W2[3 * a + b][q] + W2[3 * b + a][q];
        for (int p = 0; p < 9; ++p)
          for (int q = 0; q < 9; ++q) {
            double v = lambda * tr1[p] * tr2[q];
            for (int ab = 0; ab < 9; ++ab) v += mu * W1[ab][p] * S2[ab][q];
            acc[p][q] += wrt * v;
          }
      }
    }
  }
  Tensor4 K;
  for (int p = 0; p < 9; ++p)
    for (int q = 0; q < 9; ++q) K.c[static_cast<std::size_t>(9 * p + q)] = acc[p][q] / eps;
  return K;
}

}  // namespace ddd
