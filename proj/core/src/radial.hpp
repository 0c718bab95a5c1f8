// Radial factors for evaluating sphere integrals of the form
//   I(s) = \int_{S^2} Y(z) w((z.s)^2/4) dz
// for a degree-l spherical harmonic Y. By the Funk-Hecke formula
//   I(s) = Lambda_l(u) * Y_solid(s),   u = |s|^2/4,
//   Lambda_l(u) = 2 pi \int_{-1}^{1} P_l(t) w(u t^2) dt / (2 sqrt(u))^l,
// which is analytic in u for even l. Two weights are supported:
//   Gaussian:        w(x) = exp(-x)            (profile of K)
//   GaussianSecond:  w(x) = (x - 1/2) exp(-x)  (second derivative, profile of J)
#pragma once

#include <vector>

namespace ddd::detail {

enum class RadialWeight { Gaussian, GaussianSecond };

class RadialTable {
 public:
  RadialTable(RadialWeight weight, int lmax);

  int lmax() const { return lmax_; }
  // Lambda_l(u) and its u-derivatives up to `nderiv` (<= 2). l must be even.
  void eval(int l, double u, double out[3], int nderiv = 2) const;

  // Reference value by series (small u) or adaptive quadrature; slow.
  double reference(int l, double u) const;

 private:
  static constexpr int kDegree = 24;
  static constexpr double kPanel = 2.0;
  static constexpr double kTableEnd = 64.0;
  static constexpr int kPanels = 32;

  double series(int l, double u) const;
  double quadrature(int l, double u) const;
  void asymptotic(int l, double u, double out[3], int nderiv) const;

  RadialWeight weight_;
  int lmax_;
  // coef_[l/2][panel][deriv][k]
  std::vector<std::vector<std::vector<std::vector<double>>>> coef_;
  std::vector<std::vector<double>> series_coef_;   // [l/2][i]
  std::vector<std::vector<double>> legendre_even_; // [l/2][k]: coefficient of t^(2k) in P_l
  std::vector<std::vector<double>> asym_coef_;     // [l/2][k]: scaled large-u coefficients
};

// Shared, lazily built tables; safe to call concurrently.
const RadialTable& radial_table(RadialWeight weight, int lmax);

}  // namespace ddd::detail
