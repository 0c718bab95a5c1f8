// Closed polyline dislocation loops with lattice Burgers vectors.
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ddd/linalg.hpp"

namespace ddd {

// Columns of `basis` are the primitive vectors. make() rescales so that the
// shortest nonzero lattice vector has length 1.
struct Lattice {
  Mat3 basis = Mat3::identity();

  static Lattice make(const Mat3& basis);
  Vec3 cartesian(const std::array<int, 3>& n) const;
};

// Length of the shortest nonzero vector of the lattice spanned by the columns.
double shortest_lattice_vector(const Mat3& basis);

struct BurgersVector {
  std::array<int, 3> lattice_coords{};
  Vec3 cartesian;

  static BurgersVector make(const Lattice& L, const std::array<int, 3>& n);
  double norm() const { return ddd::norm(cartesian); }
};

// Segment k runs nodes[k] -> nodes[(k+1) % N].
struct Loop {
  std::vector<Vec3> nodes;
  BurgersVector burgers;

  std::size_t size() const { return nodes.size(); }
  const Vec3& node(std::size_t k) const { return nodes[k % nodes.size()]; }
  Vec3 segment(std::size_t k) const { return node(k + 1) - node(k); }
  double length() const;
};

struct DislocationNetwork {
  Lattice lattice;
  std::vector<Loop> loops;
  double epsilon = 1.0;

  std::size_t total_nodes() const;
  // offsets[i] is the global index of loops[i].nodes[0]; offsets.back() == total_nodes().
  std::vector<std::size_t> node_offsets() const;
  bool empty() const { return loops.empty(); }
};

// Throws InvalidArgument for loops with fewer than 3 nodes, segments of length
// <= 1e-12, zero Burgers vectors or a non-positive epsilon.
void validate(const DislocationNetwork& S);

// Indices (global) of segments longer than epsilon.
std::vector<std::size_t> resolution_advisory(const DislocationNetwork& S);

// Regular N-gon of radius R in the plane through `center` with unit normal
// `normal`, oriented counterclockwise about the normal.
Loop make_circle_loop(const Vec3& center, const Vec3& normal, double R, int N, const BurgersVector& b);
// Ellipse with semi-axes a (along x) and b (along y) in the plane z = center.z,
// nodes at equal parameter steps.
Loop make_ellipse_loop(const Vec3& center, double a, double b, int N, const BurgersVector& bv);
// Square of the given side in the plane z = center.z with corners rounded to
// `radius`, nodes at equal arc-length steps.
Loop make_rounded_square_loop(const Vec3& center, double side, double radius, int N, const BurgersVector& bv);

double mass(const DislocationNetwork& S);

// Lower-bound estimate of the mass ratio sup M(S in B_r(x))/r over candidate
// centers (the nodes) and radii (distances to nodes, plus eps/2). Midpoint
// centers are left out: on an inscribed regular N-gon they see the polygon's
// own ratio pi (1 + 5 pi^2 / 24 N^2), which overshoots the circle's pi.
double mass_ratio(const DislocationNetwork& S);

// Length of the part of segment [p, q] inside the closed ball B_r(c).
double segment_ball_length(const Vec3& p, const Vec3& q, const Vec3& c, double r);

// Moves every node by its displacement (global node order).
DislocationNetwork pushforward(const DislocationNetwork& S, const std::vector<Vec3>& displacement);

struct RemeshInfo {
  double mass_before = 0.0;
  double mass_after = 0.0;
  int loops_resampled = 0;
};

// Arc-length resampling of every loop that has a segment outside [h_min, h_max].
// Conforming loops are left untouched.
DislocationNetwork remesh(const DislocationNetwork& S, double h_min, double h_max, RemeshInfo* info = nullptr);

// Unit tangent at each node: normalized sum of the adjacent unit segment
// tangents. At a hairpin the first segment's tangent is used and the node is
// reported in `hairpins` (global indices) if given.
std::vector<Vec3> node_tangents(const DislocationNetwork& S, std::vector<std::size_t>* hairpins = nullptr);

// Half the sum of the two adjacent segment lengths.
std::vector<double> lumped_lengths(const DislocationNetwork& S);

struct Triangle {
  std::array<Vec3, 3> v;
  Vec3 normal;
  double area = 0.0;
};

Triangle make_triangle(const Vec3& a, const Vec3& b, const Vec3& c);

struct SpanningSurface {
  std::vector<Triangle> triangles;
  BurgersVector slip;
  int boundary_loop_index = 0;
};

// Fan about the centroid; the loop must be planar and star-shaped about it.
SpanningSurface make_planar_surface(const Loop& loop, int loop_index = 0);
// Fan from an arbitrary apex.
SpanningSurface make_cone_surface(const Loop& loop, const Vec3& apex, int loop_index = 0);

// Directed edges of the triangulation that are not cancelled by an opposite edge.
std::vector<std::array<Vec3, 2>> boundary_edges(const SpanningSurface& T);

}  // namespace ddd
