#include "ddd/elasticity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "ddd/error.hpp"

namespace ddd {

namespace {

bool matches_isotropic(const Tensor4& c, double lambda, double mu) {
  double scale = std::fmax(std::fabs(lambda), std::fabs(mu));
  if (scale == 0.0) return false;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int cc = 0; cc < 3; ++cc)
        for (int d = 0; d < 3; ++d) {
          double ref = lambda * (a == b) * (cc == d) + mu * ((a == cc) * (b == d) + (a == d) * (b == cc));
          if (std::fabs(c(a, b, cc, d) - ref) > 1e-12 * scale) return false;
        }
  return true;
}

// Unit vector from two numbers in [0,1), area-uniform on the sphere.
Vec3 sphere_point(double u, double w) {
  double ct = 2.0 * u - 1.0;
  double st = std::sqrt(std::fmax(0.0, 1.0 - ct * ct));
  double ph = 2.0 * M_PI * w;
  return {st * std::cos(ph), st * std::sin(ph), ct};
}

double lh_form(const Tensor4& c, const Vec3& v, const Vec3& k) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int cc = 0; cc < 3; ++cc)
        for (int d = 0; d < 3; ++d) s += c(a, b, cc, d) * v[a] * k[b] * v[cc] * k[d];
  return s;
}

}  // namespace

ElasticityTensor ElasticityTensor::from_components(const std::array<double, 81>& values) {
  Tensor4 t;
  t.c = values;
  ElasticityTensor C(t);
  double lambda = t(0, 0, 1, 1);
  double mu = t(0, 1, 0, 1);
  if (matches_isotropic(t, lambda, mu)) {
    C.isotropic_ = true;
    C.lambda_ = lambda;
    C.mu_ = mu;
  }
  return C;
}

double ElasticityTensor::max_entry() const { return max_abs(c_.c); }

ElasticityTensor make_isotropic(double lambda, double mu) {
  if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu))
    throw InvalidArgument("isotropic elasticity requires mu > 0 and lambda + 2 mu > 0 (got lambda=" +
                          std::to_string(lambda) + ", mu=" + std::to_string(mu) + ")");
  Tensor4 t;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d)
          t(a, b, c, d) = lambda * (a == b) * (c == d) + mu * ((a == c) * (b == d) + (a == d) * (b == c));
  ElasticityTensor C(t);
  C.isotropic_ = true;
  C.lambda_ = lambda;
  C.mu_ = mu;
  return C;
}

ElasticityTensor make_cubic(double c11, double c12, double c44) {
  Tensor4 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) {
        c(i, i, i, i) = c11;
      } else {
        c(i, i, j, j) = c12;
        c(i, j, i, j) = c(i, j, j, i) = c44;
      }
    }
  return ElasticityTensor(c);
}

bool validate_symmetries(const ElasticityTensor& C) {
  const Tensor4& t = C.tensor();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          double x = t(a, b, c, d);
          if (x != t(c, d, a, b) || x != t(b, a, c, d) || x != t(a, b, d, c)) return false;
        }
  return true;
}

double estimate_lh_constant(const ElasticityTensor& C, int n_samples) {
  if (n_samples < 1) throw InvalidArgument("estimate_lh_constant: n_samples must be >= 1");
  // Additive recurrence with the 4D generalized golden ratio (root of x^5 = x + 1).
  double g = 1.0;
  for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 0.2);
  const double alpha[4] = {1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g), 1.0 / (g * g * g * g)};
  const Tensor4& t = C.tensor();
  double best = INFINITY;
  for (int i = 0; i < n_samples; ++i) {
    double u[4];
    for (int j = 0; j < 4; ++j) u[j] = std::fmod(0.5 + alpha[j] * (i + 1), 1.0);
    Vec3 k = sphere_point(u[0], u[1]);
    Vec3 v = sphere_point(u[2], u[3]);
    // Two directions orthogonal to k, plus k itself: the extremes for isotropic C.
    Vec3 axis = std::fabs(k[0]) < 0.6 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 p1 = normalized(cross(k, axis));
    Vec3 p2 = cross(k, p1);
    for (const Vec3& w : {v, k, p1, p2}) best = std::fmin(best, lh_form(t, w, k));
  }
  return best;
}

AcousticTensor acoustic_tensor(const ElasticityTensor& C, const Vec3& k) {
  double kk = dot(k, k);
  if (!(kk > 0.0)) throw InvalidArgument("acoustic_tensor: k must be nonzero");
  AcousticTensor D;
  const Tensor4& t = C.tensor();
  for (int a = 0; a < 3; ++a)
    for (int c = a; c < 3; ++c) {
      double s = 0.0;
      for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d) s += t(a, b, c, d) * k[b] * k[d];
      D.matrix(a, c) = s;
      D.matrix(c, a) = s;
    }
  D.direction = k / std::sqrt(kk);
  D.scale = C.max_entry() * kk;
  return D;
}

std::array<double, 3> symmetric_eigenvalues(const Mat3& A) {
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = A(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M, Eigen::EigenvaluesOnly);
  auto ev = es.eigenvalues();
  return {ev(0), ev(1), ev(2)};
}

Mat3 inverse_symmetric(const Mat3& D) {
  double dt = det(D);
  Mat3 X;
  X(0, 0) = D(1, 1) * D(2, 2) - D(1, 2) * D(2, 1);
  X(0, 1) = D(0, 2) * D(2, 1) - D(0, 1) * D(2, 2);
  X(0, 2) = D(0, 1) * D(1, 2) - D(0, 2) * D(1, 1);
  X(1, 1) = D(0, 0) * D(2, 2) - D(0, 2) * D(2, 0);
  X(1, 2) = D(0, 2) * D(1, 0) - D(0, 0) * D(1, 2);
  X(2, 2) = D(0, 0) * D(1, 1) - D(0, 1) * D(1, 0);
  X(1, 0) = X(0, 1);
  X(2, 0) = X(0, 2);
  X(2, 1) = X(1, 2);
  X *= 1.0 / dt;
  // One Newton-Schulz step, then symmetrize.
  Mat3 R = Mat3::identity() - D * X;
  X += X * R;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double s = 0.5 * (X(i, j) + X(j, i));
      X(i, j) = X(j, i) = s;
    }
  return X;
}

Mat3 acoustic_inverse(const AcousticTensor& D) {
  double lmin = symmetric_eigenvalues(D.matrix)[0];
  double floor = 1e-8 * D.scale;
  if (!(lmin > floor))
    throw NumericalError("acoustic tensor near-singular (smallest eigenvalue " + std::to_string(lmin) +
                         "); the stiffness tensor likely violates Legendre-Hadamard");
  return inverse_symmetric(D.matrix);
}

}  // namespace ddd
