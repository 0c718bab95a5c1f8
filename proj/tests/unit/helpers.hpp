#pragma once

#include <random>

#include "ddd/geometry.hpp"

namespace testing {

inline ddd::BurgersVector bv(int a, int b, int c) { return ddd::BurgersVector::make(ddd::Lattice{}, {a, b, c}); }

inline ddd::DislocationNetwork one_loop(const ddd::Loop& l, double eps = 1.0) {
  ddd::DislocationNetwork S;
  S.epsilon = eps;
  S.loops.push_back(l);
  return S;
}

inline ddd::DislocationNetwork circle(double R, int N, ddd::BurgersVector b = bv(0, 0, 1)) {
  return one_loop(ddd::make_circle_loop({0, 0, 0}, {0, 0, 1}, R, N, b));
}

inline ddd::DislocationNetwork wobbly_pair(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ddd::DislocationNetwork S;
  S.loops.push_back(ddd::make_circle_loop({0, 0, 0}, ddd::normalized({0.2, 0.1, 1.0}), 2.0, 14, bv(1, 0, 0)));
  S.loops.push_back(ddd::make_circle_loop({1, 0, 3}, ddd::normalized({1.0, 0.3, 0.2}), 1.5, 12, bv(0, 1, 1)));
  for (auto& l : S.loops)
    for (auto& x : l.nodes) x += 0.05 * ddd::Vec3(nd(rng), nd(rng), nd(rng));
  return S;
}

}  // namespace testing
