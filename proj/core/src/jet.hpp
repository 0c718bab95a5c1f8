// Truncated Taylor jets in three variables: value, gradient and (for order 2)
// the six independent Hessian entries xx, xy, xz, yy, yz, zz.
#pragma once

#include <array>

namespace ddd::detail {

template <int O>
struct Jet {
  static constexpr int N = O == 0 ? 1 : (O == 1 ? 4 : 10);
  std::array<double, N> d{};

  static Jet constant(double v) {
    Jet j;
    j.d[0] = v;
    return j;
  }
  // Coordinate function x_i.
  static Jet coordinate(int i, double v) {
    Jet j;
    j.d[0] = v;
    if constexpr (O >= 1) j.d[1 + i] = 1.0;
    return j;
  }
  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < N; ++k) d[k] += o.d[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < N; ++k) d[k] -= o.d[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (int k = 0; k < N; ++k) d[k] *= s;
    return *this;
  }
  void axpy(double s, const Jet& o) {
    for (int k = 0; k < N; ++k) d[k] += s * o.d[k];
  }
};

template <int O>
Jet<O> operator+(Jet<O> a, const Jet<O>& b) { return a += b; }
template <int O>
Jet<O> operator-(Jet<O> a, const Jet<O>& b) { return a -= b; }
template <int O>
Jet<O> operator*(double s, Jet<O> a) { return a *= s; }

// Hessian slot for the pair (i, j).
constexpr int hslot(int i, int j) {
  constexpr int t[3][3] = {{4, 5, 6}, {5, 7, 8}, {6, 8, 9}};
  return t[i][j];
}

template <int O>
Jet<O> operator*(const Jet<O>& a, const Jet<O>& b) {
  Jet<O> r;
  r.d[0] = a.d[0] * b.d[0];
  if constexpr (O >= 1) {
    for (int i = 0; i < 3; ++i) r.d[1 + i] = a.d[0] * b.d[1 + i] + b.d[0] * a.d[1 + i];
  }
  if constexpr (O >= 2) {
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        int h = hslot(i, j);
        r.d[h] = a.d[0] * b.d[h] + b.d[0] * a.d[h] + a.d[1 + i] * b.d[1 + j] + a.d[1 + j] * b.d[1 + i];
      }
  }
  return r;
}

// f(rho) composed with rho = |x|^2, given f, f', f'' at rho.
template <int O>
Jet<O> radial_compose(const double x[3], double f0, double f1, double f2) {
  Jet<O> r;
  r.d[0] = f0;
  if constexpr (O >= 1) {
    for (int i = 0; i < 3; ++i) r.d[1 + i] = 2.0 * f1 * x[i];
  }
  if constexpr (O >= 2) {
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) r.d[hslot(i, j)] = 4.0 * f2 * x[i] * x[j] + (i == j ? 2.0 * f1 : 0.0);
  }
  return r;
}

}  // namespace ddd::detail
