#include "ddd/bounds.hpp"

#include <cmath>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"

using namespace ddd;

TEST_CASE("ratio conventions") {
  CHECK(BoundCheck{0.0, 0.0}.ratio() == 0.0);
  CHECK(BoundCheck{1.0, 0.0}.ratio() == std::numeric_limits<double>::infinity());
  CHECK(BoundCheck{1.0, 4.0}.ratio() == 0.25);
}

TEST_CASE("right-hand sides") {
  BoundInputs in;
  in.mass = 10.0;
  in.theta = 2.0;
  in.epsilon = 0.5;
  in.b_max = 1.0;
  in.alpha = 2.0;
  in.beta = 0.5;
  const double L = std::log(1.0 + 2.0 * 10.0 / (0.5 * 2.0));
  CHECK(in.log_factor() == doctest::Approx(L));
  CHECK(pk_linf_rhs(in) == doctest::Approx(2.0 * L / 0.5));
  CHECK(pk_l2_rhs(in) == doctest::Approx(std::sqrt(10.0) * 2.0 * L / 0.5));
  CHECK(length_rate_rhs(in) == doctest::Approx(10.0 * 2.0 * L / 0.5 / 0.5));
  CHECK(mass_envelope(10.0, 0.0, in, 1.0) == 10.0);
  CHECK(mass_envelope(10.0, 1e-3, in, 1.0) > 10.0);
  CHECK(mass_envelope(10.0, 1e6, in, 1.0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("field norms of a constant field") {
  const DislocationNetwork S = testing::circle(2.0, 50, testing::bv(1, 1, 0));
  const std::vector<Vec3> v(S.total_nodes(), Vec3(0, 0, 3));
  const NetworkNorms n = field_norms(S, v);
  CHECK(n.linf == 3.0);
  CHECK(n.grad_linf == 0.0);
  CHECK(n.grad_l1 == 0.0);
  // |b|-weighted L2: 3 sqrt(M).
  CHECK(n.l2 == doctest::Approx(3.0 * std::sqrt(mass(S))));
  CHECK(n.h1() == doctest::Approx(n.l2));
}

TEST_CASE("calibrated constants are positive and the circle force is within bound") {
  const BoundConstants c = calibrated_constants();
  for (double x : {c.pk_linf, c.pk_l2, c.ap_vel, c.length_rate, c.v_uniform, c.dv_uniform, c.continuity}) CHECK(x > 0.0);
  const KernelEvaluator ev(make_isotropic(1.0, 1.0), MollifierProfile{1.0});
  const DislocationNetwork S = testing::circle(8.0, 100);
  const ForceField f = pk_force(S, ev, make_line_rule(4));
  const ForceBoundReport r = force_bound_report(S, f, mass_ratio(S));
  CHECK(r.linf.ratio() <= 1.0);
  CHECK(r.l2.ratio() <= 1.0);
}

TEST_CASE("bound ratios are scale covariant") {
  // f scales like 1/eps at fixed shape; so does the right-hand side.
  const KernelEvaluator ev1(make_isotropic(1.0, 1.0), MollifierProfile{1.0});
  const KernelEvaluator ev2(make_isotropic(1.0, 1.0), MollifierProfile{2.0});
  DislocationNetwork S1 = testing::circle(6.0, 60), S2 = S1;
  S2.epsilon = 2.0;
  for (auto& x : S2.loops[0].nodes) x = 2.0 * x;
  const auto r1 = force_bound_report(S1, pk_force(S1, ev1, make_line_rule(4)), mass_ratio(S1));
  const auto r2 = force_bound_report(S2, pk_force(S2, ev2, make_line_rule(4)), mass_ratio(S2));
  CHECK(r1.linf.ratio() == doctest::Approx(r2.linf.ratio()).epsilon(1e-6));
}

TEST_CASE("force continuity under a small displacement") {
  const KernelEvaluator ev(make_isotropic(1.0, 1.0), MollifierProfile{1.0});
  const DislocationNetwork S = testing::circle(6.0, 60);
  std::vector<Vec3> g;
  for (const Vec3& x : S.loops[0].nodes) g.push_back(0.05 * Vec3(std::sin(x[1]), 0.0, 0.0));
  const ContinuityReport r = continuity_check(S, g, ev, make_line_rule(4));
  CHECK(r.check.ratio() <= 1.0);
  CHECK(r.g_linf <= 0.05);
  CHECK(r.g_linf > 0.049);
}
