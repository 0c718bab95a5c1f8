// Regularized interaction kernels K^eps (line-line) and J^eps (surface-surface).
//
// Both kernels are sphere integrals over the acoustic-tensor factors,
//   K(s) =  N/eps   \int_{S^2} F_K(z) exp(-(z.s)^2 / 4eps^2) dz
//   J(s) = -N/eps^3 \int_{S^2} F_J(z) h((z.s)^2 / 4eps^2) dz,   h(x) = (x - 1/2) e^{-x}
// with F_K = 1/2 C_efgh X_ef,ab X_gh,cd,  X_ef,ab = C_aijk A_fib z_k Dinv_ej,
// and  F_J = 1/2 [C_kmgr - C_abgr Dinv_ai C_ijkm z_b z_j].
//
// The factors are cached on the quadrature nodes and projected once onto
// spherical harmonics; evaluation then uses the Funk-Hecke radial functions,
// which stay accurate at any |s|/eps (a direct node sum needs O(|s|/eps) nodes
// to resolve the Gaussian ridge). The literal node sums are kept for checking.
#pragma once

#include <memory>
#include <vector>

#include "ddd/elasticity.hpp"
#include "ddd/linalg.hpp"
#include "ddd/quadrature.hpp"

namespace ddd {

// Normalization of the Gaussian profile, fixed by least-squares matching of K
// against the real-space convolution (tools/ddd-calibrate).
// Equals 1/(8 pi^(5/2)) to the printed digits.
inline constexpr double kGaussianNormalization = 0.0071455445504670359;

// Sign in front of the J sphere integral (see header comment).
inline constexpr double kJSign = -1.0;

struct MollifierProfile {
  double epsilon = 1.0;
  double normalization = kGaussianNormalization;
};

// eta^eps(t) = (N/eps) exp(-t^2/(4 eps^2)) and its derivatives (order 0, 1, 2).
double eta(const MollifierProfile& p, double t, int derivative_order = 0);

namespace detail {
class HarmonicKernel;
}

// A kernel with its free indices contracted against fixed vectors; output has
// `components()` entries. Derivative layouts: grad[c*3+e], hess[c*9+3e+f].
class ContractedKernel {
 public:
  ContractedKernel();
  ~ContractedKernel();
  ContractedKernel(const ContractedKernel&);
  ContractedKernel& operator=(const ContractedKernel&);
  ContractedKernel(ContractedKernel&&) noexcept;
  ContractedKernel& operator=(ContractedKernel&&) noexcept;

  int components() const;
  void eval(const Vec3& s, double* value) const;
  void eval_grad(const Vec3& s, double* value, double* grad) const;
  void eval_hess(const Vec3& s, double* value, double* grad, double* hess) const;

 private:
  friend class KernelEvaluator;
  explicit ContractedKernel(std::shared_ptr<const detail::HarmonicKernel> k);
  std::shared_ptr<const detail::HarmonicKernel> k_;
};

class KernelEvaluator {
 public:
  struct Options {
    int sphere_order = 24;
    // Highest harmonic degree kept; -1 picks the largest even degree below the
    // sphere order. Degrees whose coefficients are below 1e-13 of the largest
    // are dropped (isotropic tensors need degree 4 for both).
    int max_degree = -1;
  };

  KernelEvaluator(const ElasticityTensor& C, const MollifierProfile& profile);
  KernelEvaluator(const ElasticityTensor& C, const MollifierProfile& profile, Options opt);

  const ElasticityTensor& elasticity() const { return C_; }
  const MollifierProfile& profile() const { return profile_; }
  const SphericalQuadrature& quadrature() const { return quad_; }
  double epsilon() const { return profile_.epsilon; }
  int degree_K() const;
  int degree_J() const;

  // Cached factors on the hemisphere nodes of quadrature().
  const std::vector<Tensor4>& factors_K() const { return FK_; }
  const std::vector<Tensor4>& factors_J() const { return FJ_; }

  Tensor4 K(const Vec3& s) const;
  Tensor5 gradK(const Vec3& s) const;
  Tensor6 hessK(const Vec3& s) const;
  Tensor4 J(const Vec3& s) const;

  // Direct node sums of the sphere integrals (accurate for |s| up to a few eps
  // at the default order).
  Tensor4 K_nodesum(const Vec3& s) const;
  Tensor5 gradK_nodesum(const Vec3& s) const;
  Tensor4 J_nodesum(const Vec3& s) const;

  // M_bd(s) = K_abcd(s) b1_a b2_c (9 components, row-major in b,d).
  ContractedKernel contract_K(const Vec3& b1, const Vec3& b2) const;
  // Scalar J_abcd(s) b1_a n1_b b2_c n2_d.
  ContractedKernel contract_J(const Vec3& b1, const Vec3& n1, const Vec3& b2, const Vec3& n2) const;
  // N_bd(s) = J_abcd(s) b1_a b2_c (9 components, row-major in b,d).
  ContractedKernel contract_J(const Vec3& b1, const Vec3& b2) const;

 private:
  ElasticityTensor C_;
  MollifierProfile profile_;
  SphericalQuadrature quad_;
  std::vector<Tensor4> FK_, FJ_;
  std::shared_ptr<const detail::HarmonicKernel> hk_, hj_;
};

// Per-node factors computed from scratch with the full index contractions
// (used to check the cached ones).
Tensor4 factor_K_reference(const ElasticityTensor& C, const Vec3& z);
Tensor4 factor_J_reference(const ElasticityTensor& C, const Vec3& z);

// Real-space oracle: K^eps(s) = \int C_abcd W_ab;kp(x-s) W_cd;gq(x) dx with
// W_ab;kp = A_bpl C_ijkl G^eps_ai,j and the Gaussian-mollified Kelvin solution.
// Isotropic C only. `refine` doubles the quadrature resolution per step.
Tensor4 eval_K_direct(const ElasticityTensor& C, const MollifierProfile& profile, const Vec3& s, int refine = 0);

struct DecayCheckReport {
  int m = 0;
  int j = 0;
  double constant = 0.0;        // sup of the bound ratio over the scan
  Vec3 worst;                   // location of the sup
  double slope = 0.0;           // largest fitted log-log slope on [10 eps, 1e3 eps]
  double slope_limit = 0.0;     // -(m - j + 1) + 0.1
  bool finite = true;
};

// Scan |s| in [1e-2 eps, 1e3 eps] (log-spaced) x 26 directions x tangential
// vectors; m <= 2, j <= m.
DecayCheckReport decay_bound_scan(const KernelEvaluator& ev, int m, int j, unsigned seed = 7);

// Frobenius norm helpers.
double frob(const Tensor4& t);

}  // namespace ddd
