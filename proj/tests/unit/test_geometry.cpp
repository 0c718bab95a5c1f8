#include "ddd/geometry.hpp"

#include <cmath>

#include "ddd/error.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ddd;
using testing::bv;

TEST_CASE("lattice is rescaled to a unit shortest vector") {
  Mat3 B = Mat3::identity();
  B(0, 0) = B(1, 1) = B(2, 2) = 2.5;
  const Lattice L = Lattice::make(B);
  CHECK(shortest_lattice_vector(L.basis) == doctest::Approx(1.0));
  CHECK(L.cartesian({1, 1, 0})[0] == doctest::Approx(1.0));
}

TEST_CASE("circle mass approaches 2 pi R |b|") {
  const DislocationNetwork S = testing::circle(3.0, 400, bv(1, 1, 0));
  CHECK(mass(S) == doctest::Approx(2.0 * M_PI * 3.0 * std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("validation rejects degenerate loops") {
  DislocationNetwork S = testing::circle(1.0, 8);
  CHECK_NOTHROW(validate(S));
  S.loops[0].nodes.resize(2);
  CHECK_THROWS_AS(validate(S), InvalidArgument);
  S = testing::circle(1.0, 8);
  S.loops[0].nodes[1] = S.loops[0].nodes[0];
  CHECK_THROWS_AS(validate(S), InvalidArgument);
  CHECK_THROWS_AS(bv(0, 0, 0), InvalidArgument);
}

TEST_CASE("segment-ball clipping") {
  CHECK(segment_ball_length({-2, 0, 0}, {2, 0, 0}, {0, 0, 0}, 1.0) == doctest::Approx(2.0));
  CHECK(segment_ball_length({-2, 0.6, 0}, {2, 0.6, 0}, {0, 0, 0}, 1.0) == doctest::Approx(1.6));
  CHECK(segment_ball_length({0, 0, 0}, {0.5, 0, 0}, {0, 0, 0}, 1.0) == doctest::Approx(0.5));
  CHECK(segment_ball_length({2, 2, 0}, {3, 2, 0}, {0, 0, 0}, 1.0) == 0.0);
}

TEST_CASE("mass ratio of circles") {
  const double th = mass_ratio(testing::circle(10.0, 256, bv(1, 0, 0)));
  CHECK(th >= 0.99 * M_PI);
  CHECK(th <= M_PI);
  // Two nearly coincident circles double the density.
  DislocationNetwork S = testing::circle(10.0, 256, bv(1, 0, 0));
  S.loops.push_back(make_circle_loop({0, 0, 0}, {0, 0, 1}, 10.001, 256, bv(1, 0, 0)));
  CHECK(mass_ratio(S) == doctest::Approx(2.0 * M_PI).epsilon(1e-2));
}

TEST_CASE("mass ratio is invariant under rigid motions") {
  DislocationNetwork S = testing::wobbly_pair(3);
  const double th = mass_ratio(S);
  const double c = std::cos(0.7), s = std::sin(0.7);
  for (auto& l : S.loops)
    for (auto& x : l.nodes) x = Vec3(c * x[0] - s * x[1] + 5.0, s * x[0] + c * x[1] - 2.0, x[2] + 1.0);
  CHECK(mass_ratio(S) == doctest::Approx(th).epsilon(1e-10));
}

TEST_CASE("remesh leaves conforming loops alone and fixes the others") {
  const DislocationNetwork S = testing::circle(5.0, 63);  // h ~ 0.5
  RemeshInfo info;
  const DislocationNetwork same = remesh(S, 0.3, 1.0, &info);
  CHECK(info.loops_resampled == 0);
  CHECK(same.loops[0].nodes == S.loops[0].nodes);

  const DislocationNetwork coarse = testing::circle(5.0, 12);  // h ~ 2.6
  const DislocationNetwork fine = remesh(coarse, 0.3, 1.0, &info);
  CHECK(info.loops_resampled == 1);
  for (std::size_t k = 0; k < fine.loops[0].size(); ++k) {
    const double h = norm(fine.loops[0].segment(k));
    CHECK(h >= 0.3);
    CHECK(h <= 1.0);
  }
  // Resampled nodes lie on the old polygon, so the length cannot grow.
  CHECK(info.mass_after <= info.mass_before + 1e-12);
}

TEST_CASE("pushforward moves every node") {
  const DislocationNetwork S = testing::wobbly_pair(1);
  std::vector<Vec3> g(S.total_nodes(), Vec3(0.1, 0.0, -0.2));
  const DislocationNetwork T = pushforward(S, g);
  CHECK(norm(T.loops[1].nodes[3] - S.loops[1].nodes[3] - Vec3(0.1, 0.0, -0.2)) < 1e-15);
  g.pop_back();
  CHECK_THROWS_AS(pushforward(S, g), InvalidArgument);
}

TEST_CASE("node offsets and tangents") {
  const DislocationNetwork S = testing::wobbly_pair(2);
  const auto off = S.node_offsets();
  CHECK(off.back() == S.total_nodes());
  CHECK(off[1] == S.loops[0].size());
  const auto t = node_tangents(S);
  for (const Vec3& x : t) CHECK(norm(x) == doctest::Approx(1.0));
  const auto l = lumped_lengths(S);
  double total = 0.0;
  for (double x : l) total += x;
  CHECK(total == doctest::Approx(S.loops[0].length() + S.loops[1].length()));
}

TEST_CASE("spanning surfaces have the loop as boundary") {
  const Loop l = make_circle_loop({0, 0, 0}, {0, 0, 1}, 2.0, 10, bv(1, 0, 0));
  for (const SpanningSurface& T : {make_planar_surface(l), make_cone_surface(l, {0.3, 0, 1.5})}) {
    const auto edges = boundary_edges(T);
    CHECK(edges.size() == l.size());
  }
  double area = 0.0;
  for (const auto& t : make_planar_surface(l).triangles) area += t.area;
  CHECK(area == doctest::Approx(0.5 * 10 * 4.0 * std::sin(2 * M_PI / 10)));
}

TEST_CASE("ellipse and rounded square builders") {
  const Loop e = make_ellipse_loop({0, 0, 1}, 4.0, 2.0, 200, bv(1, 0, 0));
  double xmax = 0, ymax = 0;
  for (const Vec3& x : e.nodes) {
    xmax = std::max(xmax, x[0]);
    ymax = std::max(ymax, x[1]);
    CHECK(x[2] == 1.0);
  }
  CHECK(xmax == doctest::Approx(4.0));
  CHECK(ymax == doctest::Approx(2.0).epsilon(1e-3));
  const Loop q = make_rounded_square_loop({0, 0, 0}, 10.0, 2.0, 300, bv(0, 0, 1));
  CHECK(q.length() == doctest::Approx(4 * 6.0 + 2 * M_PI * 2.0).epsilon(1e-3));
}

TEST_CASE("resolution advisory lists long segments") {
  CHECK(resolution_advisory(testing::circle(5.0, 64)).empty());
  CHECK(resolution_advisory(testing::circle(5.0, 8)).size() == 8);
}
