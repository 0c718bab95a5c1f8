#include "ddd/kernels.hpp"

#include <cmath>

#include "doctest.h"

using namespace ddd;

namespace {

const KernelEvaluator& iso() {
  static const KernelEvaluator ev(make_isotropic(1.0, 1.0), MollifierProfile{1.0});
  return ev;
}

double rel(const Tensor4& a, const Tensor4& b) {
  Tensor4 d;
  for (std::size_t i = 0; i < 81; ++i) d.c[i] = a.c[i] - b.c[i];
  return frob(d) / frob(b);
}

}  // namespace

TEST_CASE("normalization equals 1/(8 pi^(5/2))") {
  CHECK(kGaussianNormalization == doctest::Approx(1.0 / (8.0 * std::pow(M_PI, 2.5))).epsilon(1e-15));
}

TEST_CASE("eta derivatives match finite differences") {
  const MollifierProfile p{0.7};
  const double h = 1e-5;
  for (double t : {0.0, 0.3, 1.1, 2.5}) {
    CHECK(eta(p, t, 1) == doctest::Approx((eta(p, t + h) - eta(p, t - h)) / (2 * h)).epsilon(1e-8));
    CHECK(eta(p, t, 2) == doctest::Approx((eta(p, t + h, 1) - eta(p, t - h, 1)) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("K and J are even with the major symmetry") {
  for (const Vec3& s : {Vec3(0.1, 0.2, -0.3), Vec3(5, -2, 1), Vec3(40, 3, -70)}) {
    const Tensor4 K = iso().K(s), Km = iso().K(-s), J = iso().J(s);
    CHECK(K == Km);
    CHECK(J == iso().J(-s));
    CHECK(K(0, 1, 2, 0) == doctest::Approx(K(2, 0, 0, 1)));
  }
}

TEST_CASE("K is finite at the origin") {
  const Tensor4 K0 = iso().K({0, 0, 0});
  CHECK(std::isfinite(frob(K0)));
  CHECK(frob(K0) > 0.0);
}

TEST_CASE("harmonic evaluation agrees with the node sum near the core") {
  for (const Vec3& s : {Vec3(0.2, 0.1, 0.0), Vec3(1.0, -1.0, 0.5), Vec3(0.0, 2.0, 1.5)}) {
    CHECK(rel(iso().K(s), iso().K_nodesum(s)) < 1e-12);
    CHECK(rel(iso().J(s), iso().J_nodesum(s)) < 1e-12);
  }
}

TEST_CASE("K agrees with the real-space oracle") {
  const Vec3 s(0.8, -0.3, 0.5);
  CHECK(rel(iso().K(s), eval_K_direct(make_isotropic(1.0, 1.0), MollifierProfile{1.0}, s)) < 1e-8);
}

TEST_CASE("far field decays like 1/|s|") {
  const Vec3 d = normalized(Vec3(1, 2, 2));
  const double r1 = frob(iso().K(100.0 * d)), r2 = frob(iso().K(200.0 * d));
  CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("gradient of K matches finite differences") {
  const Vec3 s(0.9, 0.4, -0.6);
  const Tensor5 G = iso().gradK(s);
  const double h = 1e-5;
  for (int e = 0; e < 3; ++e) {
    Vec3 dp = s, dm = s;
    dp[e] += h;
    dm[e] -= h;
    const Tensor4 Kp = iso().K(dp), Km = iso().K(dm);
    for (std::size_t q = 0; q < 81; q += 7)
      CHECK(G.c[3 * q + static_cast<std::size_t>(e)] == doctest::Approx((Kp.c[q] - Km.c[q]) / (2 * h)).epsilon(1e-6).scale(1e-3));
  }
}

TEST_CASE("contracted kernels equal the contracted tensors") {
  const Vec3 b1(1, 0, 0), b2(0, 1, 1), s(1.5, -0.5, 0.7);
  const ContractedKernel M = iso().contract_K(b1, b2);
  REQUIRE(M.components() == 9);
  double v[9];
  M.eval(s, v);
  const Tensor4 K = iso().K(s);
  for (int b = 0; b < 3; ++b)
    for (int d = 0; d < 3; ++d) {
      double ref = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) ref += K(a, b, c, d) * b1[a] * b2[c];
      CHECK(v[3 * b + d] == doctest::Approx(ref).scale(1e-3));
    }
}

TEST_CASE("anisotropic kernels are symmetric and converge in the sphere order") {
  const ElasticityTensor C = make_cubic(3.0, 1.5, 1.0);
  const KernelEvaluator a(C, MollifierProfile{1.0}, {32, -1}), b(C, MollifierProfile{1.0}, {64, -1});
  const Vec3 s(2.0, -1.0, 0.5);
  CHECK(rel(a.K(s), b.K(s)) < 1e-9);
  CHECK(a.K(s) == a.K(-s));
  CHECK(a.degree_K() > 4);
}

TEST_CASE("decay scan reports finite bounds and the expected slopes") {
  for (auto [m, j] : {std::pair{0, 0}, {1, 1}, {2, 0}}) {
    const DecayCheckReport r = decay_bound_scan(iso(), m, j);
    CHECK(r.finite);
    CHECK(r.slope <= r.slope_limit);
  }
}
