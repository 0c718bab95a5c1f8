#include "ddd/elasticity.hpp"

#include "ddd/error.hpp"
#include "doctest.h"

using namespace ddd;

TEST_CASE("isotropic tensor has the minor and major symmetries") {
  const ElasticityTensor C = make_isotropic(2.0, 1.5);
  CHECK(validate_symmetries(C));
  CHECK(C(0, 0, 0, 0) == doctest::Approx(2.0 + 2 * 1.5));
  CHECK(C(0, 0, 1, 1) == doctest::Approx(2.0));
  CHECK(C(0, 1, 0, 1) == doctest::Approx(1.5));
  CHECK(C.is_isotropic());
}

TEST_CASE("cubic tensor Voigt entries") {
  const ElasticityTensor C = make_cubic(3.0, 1.5, 1.0);
  CHECK(validate_symmetries(C));
  CHECK(C(1, 1, 1, 1) == 3.0);
  CHECK(C(0, 0, 2, 2) == 1.5);
  CHECK(C(1, 2, 2, 1) == 1.0);
  CHECK_FALSE(C.is_isotropic());
}

TEST_CASE("broken symmetry is detected") {
  ElasticityTensor C = make_isotropic(1.0, 1.0);
  C.at(0, 1, 0, 1) += 1e-3;
  CHECK_FALSE(validate_symmetries(C));
}

TEST_CASE("Legendre-Hadamard constant of an isotropic tensor is mu") {
  // min over unit v, k of mu + (lambda + mu) (v.k)^2 is mu.
  const double lh = estimate_lh_constant(make_isotropic(1.0, 0.7), 2000);
  CHECK(lh == doctest::Approx(0.7).epsilon(1e-2));
  CHECK(lh >= 0.7 - 1e-12);
}

TEST_CASE("acoustic tensor of isotropic elasticity and its inverse") {
  const ElasticityTensor C = make_isotropic(1.0, 1.0);
  const Vec3 k(0.0, 0.0, 2.0);
  const AcousticTensor D = acoustic_tensor(C, k);
  // D = mu |k|^2 I + (lambda + mu) k k^T.
  CHECK(D.matrix(0, 0) == doctest::Approx(4.0));
  CHECK(D.matrix(2, 2) == doctest::Approx(12.0));
  const Mat3 P = D.matrix * acoustic_inverse(D);
  CHECK(max_abs(P - Mat3::identity()) < 1e-14);
}

TEST_CASE("singular acoustic tensor is rejected") {
  ElasticityTensor C = make_isotropic(0.0, 1.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) C.at(a, b, c, d) = 0.0;
  C.at(0, 0, 0, 0) = 1.0;
  CHECK_THROWS_AS(acoustic_inverse(acoustic_tensor(C, {0, 0, 1})), NumericalError);
}

TEST_CASE("symmetric eigenvalues are ascending") {
  Mat3 A = Mat3::identity();
  A(0, 0) = 3.0;
  A(1, 2) = A(2, 1) = 0.5;
  const auto e = symmetric_eigenvalues(A);
  CHECK(e[0] == doctest::Approx(0.5));
  CHECK(e[1] == doctest::Approx(1.5));
  CHECK(e[2] == doctest::Approx(3.0));
}
