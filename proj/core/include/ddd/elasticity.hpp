#pragma once

#include <array>

#include "ddd/linalg.hpp"

namespace ddd {

// Rank-4 stiffness tensor. Components are stored as given; symmetry is checked,
// not enforced.
class ElasticityTensor {
 public:
  ElasticityTensor() = default;
  explicit ElasticityTensor(const Tensor4& c) : c_(c) {}
  // 81 row-major values, index 27a+9b+3c+d.
  static ElasticityTensor from_components(const std::array<double, 81>& values);

  const Tensor4& tensor() const { return c_; }
  double operator()(int a, int b, int c, int d) const { return c_(a, b, c, d); }
  double& at(int a, int b, int c, int d) { return c_(a, b, c, d); }

  // Largest |C_abcd|; the scale for the near-singularity floor.
  double max_entry() const;

  // Set when built by make_isotropic; the real-space oracle needs it.
  bool is_isotropic() const { return isotropic_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

 private:
  friend ElasticityTensor make_isotropic(double lambda, double mu);

  Tensor4 c_{};
  bool isotropic_ = false;
  double lambda_ = 0.0;
  double mu_ = 0.0;
};

ElasticityTensor make_isotropic(double lambda, double mu);

// Cubic symmetry in the coordinate axes (Voigt constants c11, c12, c44).
ElasticityTensor make_cubic(double c11, double c12, double c44);

// True iff C_abcd = C_cdab = C_bacd = C_abdc hold with exact equality.
bool validate_symmetries(const ElasticityTensor& C);

// Minimum of C_abcd v_a k_b v_c k_d over a deterministic sample of unit pairs.
// Sample i is a prefix of sample i+1, so the result is nonincreasing in n.
double estimate_lh_constant(const ElasticityTensor& C, int n_samples);

struct AcousticTensor {
  Mat3 matrix;
  Vec3 direction;  // unit vector along k
  double scale = 1.0;  // floor reference: largest stiffness entry times |k|^2
};

// D(k)_ac = C_abcd k_b k_d.
AcousticTensor acoustic_tensor(const ElasticityTensor& C, const Vec3& k);

// Inverse of D. Throws NumericalError when the smallest eigenvalue falls below
// 1e-8 times the largest stiffness entry (scaled by |k|^2).
Mat3 acoustic_inverse(const AcousticTensor& D);

// Plain inverse of a symmetric 3x3 matrix with one refinement step.
Mat3 inverse_symmetric(const Mat3& D);

// Eigenvalues of a symmetric 3x3 matrix, ascending.
std::array<double, 3> symmetric_eigenvalues(const Mat3& A);

}  // namespace ddd
