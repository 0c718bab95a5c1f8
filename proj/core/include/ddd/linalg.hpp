// Small fixed-size vector and tensor types used throughout the library.
// Rank-4 tensors are stored densely (81 entries, index 27a+9b+3c+d) so that
// contractions can be written with plain index arithmetic.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ddd {

struct Vec3 {
  std::array<double, 3> e{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : e{x, y, z} {}

  constexpr double& operator[](int i) { return e[static_cast<std::size_t>(i)]; }
  constexpr double operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

  Vec3& operator+=(const Vec3& o) { e[0] += o.e[0]; e[1] += o.e[1]; e[2] += o.e[2]; return *this; }
  Vec3& operator-=(const Vec3& o) { e[0] -= o.e[0]; e[1] -= o.e[1]; e[2] -= o.e[2]; return *this; }
  Vec3& operator*=(double s) { e[0] *= s; e[1] *= s; e[2] *= s; return *this; }
  bool operator==(const Vec3&) const = default;
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double norm_inf(const Vec3& a) {
  return std::fmax(std::fabs(a[0]), std::fmax(std::fabs(a[1]), std::fabs(a[2])));
}
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{};

  constexpr double& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }
  constexpr double operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }

  static Mat3 identity() {
    Mat3 r;
    r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
    return r;
  }
  static Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
    return r;
  }
  Mat3& operator+=(const Mat3& o) { for (std::size_t i = 0; i < 9; ++i) m[i] += o.m[i]; return *this; }
  Mat3& operator-=(const Mat3& o) { for (std::size_t i = 0; i < 9; ++i) m[i] -= o.m[i]; return *this; }
  Mat3& operator*=(double s) { for (auto& x : m) x *= s; return *this; }
  bool operator==(const Mat3&) const = default;
};

inline Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
inline Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
inline Mat3 operator*(double s, Mat3 a) { return a *= s; }
inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}
inline Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
          a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
          a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
}
inline Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
  return r;
}
inline double max_abs(const Mat3& a) {
  double r = 0.0;
  for (double x : a.m) r = std::fmax(r, std::fabs(x));
  return r;
}
inline double det(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}
// Projection onto the plane normal to a unit vector.
inline Mat3 normal_projector(const Vec3& t) { return Mat3::identity() - Mat3::outer(t, t); }

// Levi-Civita symbol.
constexpr double levi_civita(int i, int j, int k) {
  return static_cast<double>((i - j) * (j - k) * (k - i)) / 2.0;
}

constexpr std::size_t idx4(int a, int b, int c, int d) {
  return static_cast<std::size_t>(27 * a + 9 * b + 3 * c + d);
}
constexpr std::size_t idx5(int a, int b, int c, int d, int e) { return 3 * idx4(a, b, c, d) + static_cast<std::size_t>(e); }
constexpr std::size_t idx6(int a, int b, int c, int d, int e, int f) {
  return 3 * idx5(a, b, c, d, e) + static_cast<std::size_t>(f);
}

struct Tensor4 {
  std::array<double, 81> c{};
  constexpr double& operator()(int a, int b, int cc, int d) { return c[idx4(a, b, cc, d)]; }
  constexpr double operator()(int a, int b, int cc, int d) const { return c[idx4(a, b, cc, d)]; }
  bool operator==(const Tensor4&) const = default;
};

// K_abcd,e: the derivative index is last.
struct Tensor5 {
  std::array<double, 243> c{};
  constexpr double& operator()(int a, int b, int cc, int d, int e) { return c[idx5(a, b, cc, d, e)]; }
  constexpr double operator()(int a, int b, int cc, int d, int e) const { return c[idx5(a, b, cc, d, e)]; }
};

// K_abcd,ef: symmetric in the last two indices.
struct Tensor6 {
  std::array<double, 729> c{};
  constexpr double& operator()(int a, int b, int cc, int d, int e, int f) { return c[idx6(a, b, cc, d, e, f)]; }
  constexpr double operator()(int a, int b, int cc, int d, int e, int f) const { return c[idx6(a, b, cc, d, e, f)]; }
};

template <std::size_t N>
double max_abs(const std::array<double, N>& a) {
  double r = 0.0;
  for (double x : a) r = std::fmax(r, std::fabs(x));
  return r;
}

}  // namespace ddd
