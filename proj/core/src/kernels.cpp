#include "ddd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ddd/error.hpp"
#include "jet.hpp"
#include "radial.hpp"

namespace ddd {

using detail::Jet;

double eta(const MollifierProfile& p, double t, int derivative_order) {
  const double e = p.epsilon;
  double g = (p.normalization / e) * std::exp(-t * t / (4.0 * e * e));
  switch (derivative_order) {
    case 0: return g;
    case 1: return -t / (2.0 * e * e) * g;
    case 2: return (t * t / (4.0 * e * e * e * e) - 1.0 / (2.0 * e * e)) * g;
    default: throw InvalidArgument("eta: derivative order must be 0, 1 or 2");
  }
}

double frob(const Tensor4& t) {
  double s = 0.0;
  for (double x : t.c) s += x * x;
  return std::sqrt(s);
}

namespace detail {

struct BasisFn {
  int l;
  int m;
  bool sine;
};

// Real solid harmonics r^l Y_lm (Racah normalization) of even degree up to L,
// ordered by l, then m = 0 (cos), 1 (cos, sin), 2 (cos, sin), ...
std::vector<BasisFn> make_basis(int L) {
  std::vector<BasisFn> b;
  for (int l = 0; l <= L; l += 2) {
    b.push_back({l, 0, false});
    for (int m = 1; m <= l; ++m) {
      b.push_back({l, m, false});
      b.push_back({l, m, true});
    }
  }
  return b;
}

template <int O>
void solid_harmonics(int L, const double x[3], std::vector<Jet<O>>& re, std::vector<Jet<O>>& im, Jet<O>* out) {
  const std::size_t n = static_cast<std::size_t>((L + 1) * (L + 1));
  re.assign(n, Jet<O>{});
  im.assign(n, Jet<O>{});
  auto at = [L](int l, int m) { return static_cast<std::size_t>(l * (L + 1) + m); };
  const Jet<O> X = Jet<O>::coordinate(0, x[0]);
  const Jet<O> Y = Jet<O>::coordinate(1, x[1]);
  const Jet<O> Z = Jet<O>::coordinate(2, x[2]);
  const Jet<O> R2 = detail::radial_compose<O>(x, x[0] * x[0] + x[1] * x[1] + x[2] * x[2], 1.0, 0.0);
  for (int m = 0; m <= L; ++m) {
    if (m == 0) {
      re[at(0, 0)] = Jet<O>::constant(1.0);
    } else {
      const double f = std::sqrt((2.0 * m - 1.0) / (2.0 * m));
      const Jet<O>& pr = re[at(m - 1, m - 1)];
      const Jet<O>& pi = im[at(m - 1, m - 1)];
      re[at(m, m)] = f * (pr * X - pi * Y);
      im[at(m, m)] = f * (pr * Y + pi * X);
    }
    for (int l = m; l < L; ++l) {
      const double a = (2.0 * l + 1.0);
      const double bb = std::sqrt(static_cast<double>((l + m) * (l - m)));
      const double c = 1.0 / std::sqrt(static_cast<double>((l + m + 1) * (l - m + 1)));
      Jet<O> nr = a * (Z * re[at(l, m)]);
      Jet<O> ni = a * (Z * im[at(l, m)]);
      if (l > m) {
        nr -= bb * (R2 * re[at(l - 1, m)]);
        ni -= bb * (R2 * im[at(l - 1, m)]);
      }
      re[at(l + 1, m)] = c * nr;
      im[at(l + 1, m)] = c * ni;
    }
  }
  int k = 0;
  for (int l = 0; l <= L; l += 2) {
    out[k++] = re[at(l, 0)];
    for (int m = 1; m <= l; ++m) {
      out[k++] = re[at(l, m)];
      out[k++] = im[at(l, m)];
    }
  }
}

class HarmonicKernel {
 public:
  int L = 0;
  int ncomp = 0;
  std::vector<BasisFn> basis;
  std::vector<double> coef;  // [basis][comp]
  const RadialTable* radial = nullptr;
  double epsilon = 1.0;
  double prefactor = 1.0;
  int eps_power = 1;

  template <int O>
  void eval(const Vec3& s, Jet<O>* out) const {
    thread_local std::vector<Jet<O>> re, im, Yb, P;
    const double inv = 1.0 / epsilon;
    const double x[3] = {s[0] * inv, s[1] * inv, s[2] * inv};
    const double rho = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    Yb.resize(basis.size());
    solid_harmonics<O>(L, x, re, im, Yb.data());
    P.assign(static_cast<std::size_t>(ncomp), Jet<O>{});
    for (int c = 0; c < ncomp; ++c) out[c] = Jet<O>{};
    std::size_t b = 0;
    for (int l = 0; l <= L; l += 2) {
      double rv[3] = {0.0, 0.0, 0.0};
      radial->eval(l, 0.25 * rho, rv, O);
      const Jet<O> R = detail::radial_compose<O>(x, rv[0], 0.25 * rv[1], 0.0625 * rv[2]);
      for (auto& p : P) p = Jet<O>{};
      const std::size_t bend = b + static_cast<std::size_t>(2 * l + 1);
      for (; b < bend; ++b) {
        const double* cb = &coef[b * static_cast<std::size_t>(ncomp)];
        const Jet<O>& y = Yb[b];
        for (int c = 0; c < ncomp; ++c) P[static_cast<std::size_t>(c)].axpy(cb[c], y);
      }
      for (int c = 0; c < ncomp; ++c) out[c] += R * P[static_cast<std::size_t>(c)];
    }
    // Undo the 1/eps scaling of the argument.
    const double s0 = prefactor * std::pow(inv, eps_power);
    for (int c = 0; c < ncomp; ++c) {
      out[c].d[0] *= s0;
      if constexpr (O >= 1)
        for (int k = 1; k < 4; ++k) out[c].d[k] *= s0 * inv;
      if constexpr (O >= 2)
        for (int k = 4; k < 10; ++k) out[c].d[k] *= s0 * inv * inv;
    }
  }

  // New kernel with components given by linear combinations of this one's.
  // weights is [ncomp_new][ncomp].
  std::shared_ptr<HarmonicKernel> combine(const std::vector<double>& weights, int ncomp_new) const {
    auto k = std::make_shared<HarmonicKernel>(*this);
    k->ncomp = ncomp_new;
    k->coef.assign(basis.size() * static_cast<std::size_t>(ncomp_new), 0.0);
    for (std::size_t b = 0; b < basis.size(); ++b)
      for (int cn = 0; cn < ncomp_new; ++cn) {
        double s = 0.0;
        for (int c = 0; c < ncomp; ++c)
          s += weights[static_cast<std::size_t>(cn * ncomp + c)] * coef[b * static_cast<std::size_t>(ncomp) + static_cast<std::size_t>(c)];
        k->coef[b * static_cast<std::size_t>(ncomp_new) + static_cast<std::size_t>(cn)] = s;
      }
    return k;
  }
};

namespace {

// Project per-node tensors onto even harmonics up to lmax, then drop the
// negligible top degrees.
std::shared_ptr<HarmonicKernel> project(const std::vector<Vec3>& nodes, const std::vector<double>& weights,
                                        const std::vector<Tensor4>& F, int lmax, RadialWeight rw,
                                        const MollifierProfile& prof, double sign, int eps_power) {
  auto basis = make_basis(lmax);
  const std::size_t nb = basis.size();
  std::vector<double> coef(nb * 81, 0.0), norm2(nb, 0.0);
  std::vector<Jet<0>> re, im, Y(nb);
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const double x[3] = {nodes[q][0], nodes[q][1], nodes[q][2]};
    solid_harmonics<0>(lmax, x, re, im, Y.data());
    for (std::size_t b = 0; b < nb; ++b) {
      const double wy = weights[q] * Y[b].d[0];
      norm2[b] += wy * Y[b].d[0];
      double* cb = &coef[b * 81];
      for (std::size_t c = 0; c < 81; ++c) cb[c] += wy * F[q].c[c];
    }
  }
  double cmax = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t c = 0; c < 81; ++c) {
      coef[b * 81 + c] /= norm2[b];
      cmax = std::fmax(cmax, std::fabs(coef[b * 81 + c]));
    }
  }
  int L = 0;
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t c = 0; c < 81; ++c)
      if (std::fabs(coef[b * 81 + c]) > 1e-13 * cmax) L = std::max(L, basis[b].l);
  auto k = std::make_shared<HarmonicKernel>();
  k->L = L;
  k->ncomp = 81;
  k->basis = make_basis(L);
  k->coef.assign(coef.begin(), coef.begin() + static_cast<std::ptrdiff_t>(k->basis.size() * 81));
  k->radial = &radial_table(rw, L);
  k->epsilon = prof.epsilon;
  k->prefactor = sign * prof.normalization;
  k->eps_power = eps_power;
  return k;
}

struct NodeFactors {
  Tensor4 K, J;
};

NodeFactors node_factors(const ElasticityTensor& Cet, const Vec3& z) {
  const Tensor4& C = Cet.tensor();
  Mat3 Di = acoustic_inverse(acoustic_tensor(Cet, z));
  // Xz[a][gr] = C_abgr z_b
  double Xz[3][9];
  for (int a = 0; a < 3; ++a)
    for (int g = 0; g < 3; ++g)
      for (int r = 0; r < 3; ++r) {
        double s = 0.0;
        for (int b = 0; b < 3; ++b) s += C(a, b, g, r) * z[b];
        Xz[a][3 * g + r] = s;
      }
  // Cz[a][ij] = C_aijk z_k
  double Cz[3][9];
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += C(a, i, j, k) * z[k];
        Cz[a][3 * i + j] = s;
      }
  // X[ef][ab] = sum_{i,j} Cz[a][ij] A_fib Dinv_ej
  double X[9][9];
  for (int e = 0; e < 3; ++e)
    for (int f = 0; f < 3; ++f)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double s = 0.0;
          for (int i = 0; i < 3; ++i) {
            double eps = levi_civita(f, i, b);
            if (eps == 0.0) continue;
            for (int j = 0; j < 3; ++j) s += eps * Cz[a][3 * i + j] * Di(e, j);
          }
          X[3 * e + f][3 * a + b] = s;
        }
  double Y[9][9];
  for (int p = 0; p < 9; ++p)
    for (int q = 0; q < 9; ++q) {
      double s = 0.0;
      for (int r = 0; r < 9; ++r) s += C.c[static_cast<std::size_t>(9 * p + r)] * X[r][q];
      Y[p][q] = s;
    }
  NodeFactors out;
  for (int p = 0; p < 9; ++p)
    for (int q = p; q < 9; ++q) {
      double s = 0.0;
      for (int r = 0; r < 9; ++r) s += X[r][p] * Y[r][q];
      out.K.c[static_cast<std::size_t>(9 * p + q)] = 0.5 * s;
      out.K.c[static_cast<std::size_t>(9 * q + p)] = 0.5 * s;
    }
  // F_J[km][gr] = 1/2 (C_kmgr - sum_{a,i} Xz[a][gr] Dinv_ai Xz[i][km])
  double DX[3][9];
  for (int a = 0; a < 3; ++a)
    for (int q = 0; q < 9; ++q) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += Di(a, i) * Xz[i][q];
      DX[a][q] = s;
    }
  for (int p = 0; p < 9; ++p)
    for (int q = p; q < 9; ++q) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) s += Xz[a][q] * DX[a][p];
      double v = 0.5 * (C.c[static_cast<std::size_t>(9 * p + q)] - s);
      out.J.c[static_cast<std::size_t>(9 * p + q)] = v;
      out.J.c[static_cast<std::size_t>(9 * q + p)] = v;
    }
  return out;
}

}  // namespace
}  // namespace detail

Tensor4 factor_K_reference(const ElasticityTensor& Cet, const Vec3& z) {
  const Tensor4& C = Cet.tensor();
  Mat3 Di = inverse_symmetric(acoustic_tensor(Cet, z).matrix);
  Tensor4 F;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          double s = 0.0;
          for (int e = 0; e < 3; ++e)
            for (int f = 0; f < 3; ++f)
              for (int g = 0; g < 3; ++g)
                for (int h = 0; h < 3; ++h)
                  for (int i = 0; i < 3; ++i) {
                    double A1 = levi_civita(f, i, b);
                    if (A1 == 0.0) continue;
                    for (int l = 0; l < 3; ++l) {
                      double A2 = levi_civita(h, l, d);
                      if (A2 == 0.0) continue;
                      for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 3; ++k)
                          for (int m = 0; m < 3; ++m)
                            for (int n = 0; n < 3; ++n)
                              s += C(e, f, g, h) * C(a, i, j, k) * C(c, l, m, n) * A1 * A2 * z[k] * z[n] *
                                   Di(e, j) * Di(g, m);
                    }
                  }
          F(a, b, c, d) = 0.5 * s;
        }
  return F;
}

Tensor4 factor_J_reference(const ElasticityTensor& Cet, const Vec3& z) {
  const Tensor4& C = Cet.tensor();
  Mat3 Di = inverse_symmetric(acoustic_tensor(Cet, z).matrix);
  Tensor4 F;
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 3; ++m)
      for (int g = 0; g < 3; ++g)
        for (int r = 0; r < 3; ++r) {
          double s = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) s += C(a, b, g, r) * Di(a, i) * C(i, j, k, m) * z[b] * z[j];
          F(k, m, g, r) = 0.5 * (C(k, m, g, r) - s);
        }
  return F;
}

// ContractedKernel

ContractedKernel::ContractedKernel() = default;
ContractedKernel::~ContractedKernel() = default;
ContractedKernel::ContractedKernel(const ContractedKernel&) = default;
ContractedKernel& ContractedKernel::operator=(const ContractedKernel&) = default;
ContractedKernel::ContractedKernel(ContractedKernel&&) noexcept = default;
ContractedKernel& ContractedKernel::operator=(ContractedKernel&&) noexcept = default;
ContractedKernel::ContractedKernel(std::shared_ptr<const detail::HarmonicKernel> k) : k_(std::move(k)) {}

int ContractedKernel::components() const { return k_ ? k_->ncomp : 0; }

void ContractedKernel::eval(const Vec3& s, double* value) const {
  thread_local std::vector<Jet<0>> out;
  out.resize(static_cast<std::size_t>(k_->ncomp));
  k_->eval<0>(s, out.data());
  for (int c = 0; c < k_->ncomp; ++c) value[c] = out[static_cast<std::size_t>(c)].d[0];
}

void ContractedKernel::eval_grad(const Vec3& s, double* value, double* grad) const {
  thread_local std::vector<Jet<1>> out;
  out.resize(static_cast<std::size_t>(k_->ncomp));
  k_->eval<1>(s, out.data());
  for (int c = 0; c < k_->ncomp; ++c) {
    const auto& j = out[static_cast<std::size_t>(c)];
    value[c] = j.d[0];
    for (int e = 0; e < 3; ++e) grad[3 * c + e] = j.d[1 + e];
  }
}

void ContractedKernel::eval_hess(const Vec3& s, double* value, double* grad, double* hess) const {
  thread_local std::vector<Jet<2>> out;
  out.resize(static_cast<std::size_t>(k_->ncomp));
  k_->eval<2>(s, out.data());
  for (int c = 0; c < k_->ncomp; ++c) {
    const auto& j = out[static_cast<std::size_t>(c)];
    value[c] = j.d[0];
    for (int e = 0; e < 3; ++e) {
      grad[3 * c + e] = j.d[1 + e];
      for (int f = 0; f < 3; ++f) hess[9 * c + 3 * e + f] = j.d[detail::hslot(e, f)];
    }
  }
}

// KernelEvaluator

KernelEvaluator::KernelEvaluator(const ElasticityTensor& C, const MollifierProfile& profile)
    : KernelEvaluator(C, profile, Options{}) {}

KernelEvaluator::KernelEvaluator(const ElasticityTensor& C, const MollifierProfile& profile, Options opt)
    : C_(C), profile_(profile), quad_(make_spherical_quadrature(opt.sphere_order)) {
  if (!(profile.epsilon > 0.0)) throw InvalidArgument("kernel evaluator: epsilon must be positive");
  if (!validate_symmetries(C)) throw InvalidArgument("kernel evaluator: elasticity tensor lacks major/minor symmetry");
  int lmax = opt.max_degree;
  if (lmax < 0) lmax = opt.sphere_order - 1;
  lmax = std::max(0, std::min(lmax, opt.sphere_order - 1));
  lmax -= lmax % 2;
  const std::size_t nq = quad_.hemi_nodes.size();
  FK_.resize(nq);
  FJ_.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    auto nf = detail::node_factors(C, quad_.hemi_nodes[q]);
    FK_[q] = nf.K;
    FJ_[q] = nf.J;
  }
  hk_ = detail::project(quad_.hemi_nodes, quad_.hemi_weights, FK_, lmax, detail::RadialWeight::Gaussian, profile,
                        1.0, 1);
  hj_ = detail::project(quad_.hemi_nodes, quad_.hemi_weights, FJ_, lmax, detail::RadialWeight::GaussianSecond,
                        profile, kJSign, 3);
}

int KernelEvaluator::degree_K() const { return hk_->L; }
int KernelEvaluator::degree_J() const { return hj_->L; }

Tensor4 KernelEvaluator::K(const Vec3& s) const {
  std::array<Jet<0>, 81> out;
  hk_->eval<0>(s, out.data());
  Tensor4 t;
  for (std::size_t c = 0; c < 81; ++c) t.c[c] = out[c].d[0];
  return t;
}

Tensor5 KernelEvaluator::gradK(const Vec3& s) const {
  std::array<Jet<1>, 81> out;
  hk_->eval<1>(s, out.data());
  Tensor5 t;
  for (std::size_t c = 0; c < 81; ++c)
    for (std::size_t e = 0; e < 3; ++e) t.c[3 * c + e] = out[c].d[1 + e];
  return t;
}

Tensor6 KernelEvaluator::hessK(const Vec3& s) const {
  std::array<Jet<2>, 81> out;
  hk_->eval<2>(s, out.data());
  Tensor6 t;
  for (std::size_t c = 0; c < 81; ++c)
    for (int e = 0; e < 3; ++e)
      for (int f = 0; f < 3; ++f) t.c[9 * c + static_cast<std::size_t>(3 * e + f)] = out[c].d[detail::hslot(e, f)];
  return t;
}

Tensor4 KernelEvaluator::J(const Vec3& s) const {
  std::array<Jet<0>, 81> out;
  hj_->eval<0>(s, out.data());
  Tensor4 t;
  for (std::size_t c = 0; c < 81; ++c) t.c[c] = out[c].d[0];
  return t;
}

Tensor4 KernelEvaluator::K_nodesum(const Vec3& s) const {
  Tensor4 t;
  for (std::size_t q = 0; q < FK_.size(); ++q) {
    double w = quad_.hemi_weights[q] * eta(profile_, dot(quad_.hemi_nodes[q], s), 0);
    for (std::size_t c = 0; c < 81; ++c) t.c[c] += w * FK_[q].c[c];
  }
  return t;
}

Tensor5 KernelEvaluator::gradK_nodesum(const Vec3& s) const {
  Tensor5 t;
  for (std::size_t q = 0; q < FK_.size(); ++q) {
    const Vec3& z = quad_.hemi_nodes[q];
    double w = quad_.hemi_weights[q] * eta(profile_, dot(z, s), 1);
    for (std::size_t c = 0; c < 81; ++c)
      for (int e = 0; e < 3; ++e) t.c[3 * c + static_cast<std::size_t>(e)] += w * z[e] * FK_[q].c[c];
  }
  return t;
}

Tensor4 KernelEvaluator::J_nodesum(const Vec3& s) const {
  Tensor4 t;
  for (std::size_t q = 0; q < FJ_.size(); ++q) {
    double w = kJSign * quad_.hemi_weights[q] * eta(profile_, dot(quad_.hemi_nodes[q], s), 2);
    for (std::size_t c = 0; c < 81; ++c) t.c[c] += w * FJ_[q].c[c];
  }
  return t;
}

ContractedKernel KernelEvaluator::contract_K(const Vec3& b1, const Vec3& b2) const {
  std::vector<double> w(9 * 81, 0.0);
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) w[static_cast<std::size_t>(3 * j + l) * 81 + idx4(i, j, k, l)] = b1[i] * b2[k];
  return ContractedKernel(hk_->combine(w, 9));
}

ContractedKernel KernelEvaluator::contract_J(const Vec3& b1, const Vec3& n1, const Vec3& b2, const Vec3& n2) const {
  std::vector<double> w(81, 0.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) w[idx4(a, b, c, d)] = b1[a] * n1[b] * b2[c] * n2[d];
  return ContractedKernel(hj_->combine(w, 1));
}

ContractedKernel KernelEvaluator::contract_J(const Vec3& b1, const Vec3& b2) const {
  std::vector<double> w(9 * 81, 0.0);
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) w[static_cast<std::size_t>(3 * j + l) * 81 + idx4(i, j, k, l)] = b1[i] * b2[k];
  return ContractedKernel(hj_->combine(w, 9));
}

// Decay scan

DecayCheckReport decay_bound_scan(const KernelEvaluator& ev, int m, int j, unsigned seed) {
  if (m < 0 || m > 2 || j < 0 || j > m) throw InvalidArgument("decay_bound_scan: need 0 <= j <= m <= 2");
  const double eps = ev.epsilon();
  DecayCheckReport rep;
  rep.m = m;
  rep.j = j;
  rep.slope_limit = -(m - j + 1) + 0.1;
  rep.slope = -INFINITY;
  std::vector<Vec3> dirs;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c)
        if (a || b || c) dirs.push_back(normalized(Vec3(a, b, c)));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const int per_decade = 8;
  std::vector<double> radii;
  for (int k = -2 * per_decade; k <= 3 * per_decade; ++k) radii.push_back(eps * std::pow(10.0, static_cast<double>(k) / per_decade));
  const int nv = 2;
  for (const Vec3& d : dirs) {
    for (int iv = 0; iv < nv; ++iv) {
      Vec3 v{nd(rng), nd(rng), nd(rng)};
      v = normalized(v - dot(v, d) * d);
      // Direction slots: j copies of v, then m - j copies of the radial direction.
      Vec3 slot[2] = {j >= 1 ? v : d, j >= 2 ? v : d};
      std::vector<double> lx, ly;
      for (double r : radii) {
        Vec3 s = r * d;
        double q = 0.0;
        if (m == 0) {
          q = frob(ev.K(s));
        } else if (m == 1) {
          Tensor5 g = ev.gradK(s);
          double acc = 0.0;
          for (std::size_t c = 0; c < 81; ++c) {
            double x = 0.0;
            for (int e = 0; e < 3; ++e) x += g.c[3 * c + static_cast<std::size_t>(e)] * slot[0][e];
            acc += x * x;
          }
          q = std::sqrt(acc);
        } else {
          Tensor6 h = ev.hessK(s);
          double acc = 0.0;
          for (std::size_t c = 0; c < 81; ++c) {
            double x = 0.0;
            for (int e = 0; e < 3; ++e)
              for (int f = 0; f < 3; ++f) x += h.c[9 * c + static_cast<std::size_t>(3 * e + f)] * slot[0][e] * slot[1][f];
            acc += x * x;
          }
          q = std::sqrt(acc);
        }
        double ratio = q * std::sqrt(std::pow(eps, 2 * m + 2) + std::pow(eps, 2 * j) * std::pow(r, 2 * m + 2 - 2 * j));
        if (!std::isfinite(ratio)) rep.finite = false;
        if (ratio > rep.constant) {
          rep.constant = ratio;
          rep.worst = s;
        }
        if (r >= 10.0 * eps * (1 - 1e-12) && r <= 1e3 * eps * (1 + 1e-12) && q > 0.0) {
          lx.push_back(std::log(r));
          ly.push_back(std::log(q));
        }
      }
      double n = static_cast<double>(lx.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
      }
      double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      rep.slope = std::max(rep.slope, slope);
    }
  }
  if (!std::isfinite(rep.constant)) rep.finite = false;
  return rep;
}

}  // namespace ddd
