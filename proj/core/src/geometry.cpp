#include "ddd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ddd/error.hpp"

namespace ddd {

namespace {

Mat3 inverse(const Mat3& a) {
  const double d = det(a);
  if (d == 0.0) throw InvalidArgument("lattice basis is singular");
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
      r(i, j) = (a(i1, j1) * a(i2, j2) - a(i1, j2) * a(i2, j1)) / d;
    }
  return r;
}

std::string loop_tag(std::size_t i) { return "loop " + std::to_string(i); }

}  // namespace

double shortest_lattice_vector(const Mat3& B) {
  if (std::fabs(det(B)) == 0.0) throw InvalidArgument("lattice basis is singular");
  const Mat3 Bi = inverse(B);
  double best = INFINITY;
  for (int j = 0; j < 3; ++j) best = std::fmin(best, norm(Vec3(B(0, j), B(1, j), B(2, j))));
  // Any vector v = B n with |v| <= best has |n_i| <= best * |row i of B^-1|.
  int lim[3];
  for (int i = 0; i < 3; ++i) lim[i] = static_cast<int>(std::floor(best * norm(Vec3(Bi(i, 0), Bi(i, 1), Bi(i, 2))) + 1e-9));
  for (int a = -lim[0]; a <= lim[0]; ++a)
    for (int b = -lim[1]; b <= lim[1]; ++b)
      for (int c = -lim[2]; c <= lim[2]; ++c) {
        if (!a && !b && !c) continue;
        best = std::fmin(best, norm(B * Vec3(a, b, c)));
      }
  return best;
}

Lattice Lattice::make(const Mat3& basis) {
  Lattice L;
  const double s = shortest_lattice_vector(basis);
  // Already normalized bases are kept bit for bit.
  L.basis = std::fabs(s - 1.0) <= 1e-14 ? basis : (1.0 / s) * basis;
  return L;
}

Vec3 Lattice::cartesian(const std::array<int, 3>& n) const { return basis * Vec3(n[0], n[1], n[2]); }

BurgersVector BurgersVector::make(const Lattice& L, const std::array<int, 3>& n) {
  if (n[0] == 0 && n[1] == 0 && n[2] == 0) throw InvalidArgument("Burgers vector must be nonzero");
  return {n, L.cartesian(n)};
}

double Loop::length() const {
  double s = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) s += norm(segment(k));
  return s;
}

std::size_t DislocationNetwork::total_nodes() const {
  std::size_t n = 0;
  for (const auto& l : loops) n += l.size();
  return n;
}

std::vector<std::size_t> DislocationNetwork::node_offsets() const {
  std::vector<std::size_t> off{0};
  for (const auto& l : loops) off.push_back(off.back() + l.size());
  return off;
}

void validate(const DislocationNetwork& S) {
  if (!(S.epsilon > 0.0) || !std::isfinite(S.epsilon)) throw InvalidArgument("network epsilon must be positive");
  for (std::size_t i = 0; i < S.loops.size(); ++i) {
    const Loop& l = S.loops[i];
    if (l.size() < 3) throw InvalidArgument(loop_tag(i) + ": needs at least 3 nodes");
    if (l.burgers.norm() == 0.0) throw InvalidArgument(loop_tag(i) + ": zero Burgers vector");
    for (std::size_t k = 0; k < l.size(); ++k) {
      for (int c = 0; c < 3; ++c)
        if (!std::isfinite(l.nodes[k][c])) throw InvalidArgument(loop_tag(i) + ": non-finite node coordinate");
      if (!(norm(l.segment(k)) > 1e-12))
        throw InvalidArgument(loop_tag(i) + ": zero-length segment at node " + std::to_string(k));
    }
  }
}

std::vector<std::size_t> resolution_advisory(const DislocationNetwork& S) {
  std::vector<std::size_t> out;
  std::size_t g = 0;
  for (const auto& l : S.loops)
    for (std::size_t k = 0; k < l.size(); ++k, ++g)
      if (norm(l.segment(k)) > S.epsilon) out.push_back(g);
  return out;
}

Loop make_circle_loop(const Vec3& center, const Vec3& normal, double R, int N, const BurgersVector& b) {
  if (N < 3 || !(R > 0.0)) throw InvalidArgument("circle loop needs N >= 3 and R > 0");
  const Vec3 n = normalized(normal);
  Vec3 e1 = std::fabs(n[0]) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  e1 = normalized(e1 - dot(e1, n) * n);
  const Vec3 e2 = cross(n, e1);
  Loop l;
  l.burgers = b;
  for (int k = 0; k < N; ++k) {
    const double t = 2.0 * M_PI * k / N;
    l.nodes.push_back(center + R * std::cos(t) * e1 + R * std::sin(t) * e2);
  }
  return l;
}

Loop make_ellipse_loop(const Vec3& center, double a, double b, int N, const BurgersVector& bv) {
  if (N < 3 || !(a > 0.0) || !(b > 0.0)) throw InvalidArgument("ellipse loop needs N >= 3 and positive semi-axes");
  Loop l;
  l.burgers = bv;
  for (int k = 0; k < N; ++k) {
    const double t = 2.0 * M_PI * k / N;
    l.nodes.push_back(center + Vec3(a * std::cos(t), b * std::sin(t), 0.0));
  }
  return l;
}

Loop make_rounded_square_loop(const Vec3& center, double side, double radius, int N, const BurgersVector& bv) {
  if (N < 3 || !(radius > 0.0) || !(side > 2.0 * radius)) throw InvalidArgument("rounded square needs N >= 3 and side > 2 radius > 0");
  const double straight = side - 2.0 * radius;
  const double arc = 0.5 * M_PI * radius;
  const double quarter = straight + arc;
  const double h = 0.5 * side - radius;
  Loop l;
  l.burgers = bv;
  for (int k = 0; k < N; ++k) {
    const double s = 4.0 * quarter * k / N;
    const int q = std::min(3, static_cast<int>(s / quarter));
    const double u = s - q * quarter;
    // Side q starts at the middle of the right edge (rotated by q quarter turns).
    Vec3 p;
    if (u < 0.5 * straight) {
      p = Vec3(0.5 * side, u, 0.0);
    } else if (u < 0.5 * straight + arc) {
      const double t = (u - 0.5 * straight) / radius;
      p = Vec3(h + radius * std::cos(t), h + radius * std::sin(t), 0.0);
    } else {
      p = Vec3(h - (u - 0.5 * straight - arc), 0.5 * side, 0.0);
    }
    const double c = std::cos(0.5 * M_PI * q), sn = std::sin(0.5 * M_PI * q);
    l.nodes.push_back(center + Vec3(c * p[0] - sn * p[1], sn * p[0] + c * p[1], 0.0));
  }
  return l;
}

double mass(const DislocationNetwork& S) {
  double m = 0.0;
  for (const auto& l : S.loops) m += l.burgers.norm() * l.length();
  return m;
}

double segment_ball_length(const Vec3& p, const Vec3& q, const Vec3& c, double r) {
  const Vec3 d = q - p, w = p - c;
  const double a = dot(d, d);
  const double b = dot(w, d);
  const double cc = dot(w, w) - r * r;
  const double disc = b * b - a * cc;
  if (disc <= 0.0 || a == 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double t0 = std::max(0.0, (-b - sq) / a);
  const double t1 = std::min(1.0, (-b + sq) / a);
  return t1 > t0 ? (t1 - t0) * std::sqrt(a) : 0.0;
}

double mass_ratio(const DislocationNetwork& S) {
  if (S.empty()) throw InvalidArgument("mass_ratio: empty network");
  struct Seg {
    Vec3 p, q;
    double w;
  };
  std::vector<Seg> segs;
  std::vector<Vec3> nodes;
  for (const auto& l : S.loops) {
    const double bn = l.burgers.norm();
    for (std::size_t k = 0; k < l.size(); ++k) {
      segs.push_back({l.node(k), l.node(k + 1), bn});
      nodes.push_back(l.node(k));
    }
  }
  const std::vector<Vec3>& centers = nodes;
  double best = 0.0;
  std::vector<double> radii;
  for (const Vec3& c : centers) {
    radii.clear();
    for (const Vec3& x : nodes) {
      const double r = norm(x - c);
      if (r > 0.0) radii.push_back(r);
    }
    radii.push_back(0.5 * S.epsilon);
    for (double r : radii) {
      double m = 0.0;
      for (const Seg& s : segs) m += s.w * segment_ball_length(s.p, s.q, c, r);
      best = std::max(best, m / r);
    }
  }
  return best;
}

DislocationNetwork pushforward(const DislocationNetwork& S, const std::vector<Vec3>& g) {
  if (g.size() != S.total_nodes()) throw InvalidArgument("pushforward: displacement count does not match node count");
  DislocationNetwork out = S;
  std::size_t i = 0;
  for (auto& l : out.loops)
    for (auto& x : l.nodes) x += g[i++];
  for (std::size_t li = 0; li < out.loops.size(); ++li) {
    const Loop& l = out.loops[li];
    for (std::size_t k = 0; k < l.size(); ++k)
      if (!(norm(l.segment(k)) > 1e-12))
        throw InvalidArgument("pushforward: " + loop_tag(li) + " has a degenerate segment at node " + std::to_string(k));
  }
  return out;
}

DislocationNetwork remesh(const DislocationNetwork& S, double h_min, double h_max, RemeshInfo* info) {
  if (!(h_min > 0.0 && h_min < h_max)) throw InvalidArgument("remesh: need 0 < h_min < h_max");
  DislocationNetwork out = S;
  int resampled = 0;
  for (std::size_t li = 0; li < out.loops.size(); ++li) {
    Loop& l = out.loops[li];
    const std::size_t n = l.size();
    std::vector<double> len(n);
    bool ok = true;
    double L = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      len[k] = norm(l.segment(k));
      L += len[k];
      if (len[k] < h_min || len[k] > h_max) ok = false;
    }
    if (L < 3.0 * h_min) throw InvalidArgument("remesh: " + loop_tag(li) + " is shorter than 3 h_min");
    if (ok) continue;
    const double h_mid = 0.5 * (h_min + h_max);
    const std::size_t N = std::max<std::size_t>(3, static_cast<std::size_t>(std::llround(L / h_mid)));
    const double h = L / static_cast<double>(N);
    std::vector<Vec3> nodes;
    nodes.reserve(N);
    std::size_t k = 0;
    double acc = 0.0;  // arc length at the start of segment k
    for (std::size_t j = 0; j < N; ++j) {
      const double t = h * static_cast<double>(j);
      while (k + 1 < n && acc + len[k] < t) {
        acc += len[k];
        ++k;
      }
      const double f = std::clamp((t - acc) / len[k], 0.0, 1.0);
      nodes.push_back(l.node(k) + f * l.segment(k));
    }
    l.nodes = std::move(nodes);
    ++resampled;
  }
  if (info) {
    info->mass_before = mass(S);
    info->mass_after = mass(out);
    info->loops_resampled = resampled;
  }
  return out;
}

std::vector<Vec3> node_tangents(const DislocationNetwork& S, std::vector<std::size_t>* hairpins) {
  std::vector<Vec3> t;
  t.reserve(S.total_nodes());
  std::size_t g = 0;
  for (const auto& l : S.loops) {
    const std::size_t n = l.size();
    for (std::size_t k = 0; k < n; ++k, ++g) {
      const Vec3 a = normalized(l.segment(k + n - 1));
      const Vec3 b = normalized(l.segment(k));
      const Vec3 s = a + b;
      const double ns = norm(s);
      if (ns < 1e-8) {
        t.push_back(a);
        if (hairpins) hairpins->push_back(g);
      } else {
        t.push_back(s / ns);
      }
    }
  }
  return t;
}

std::vector<double> lumped_lengths(const DislocationNetwork& S) {
  std::vector<double> out;
  out.reserve(S.total_nodes());
  for (const auto& l : S.loops) {
    const std::size_t n = l.size();
    for (std::size_t k = 0; k < n; ++k) out.push_back(0.5 * (norm(l.segment(k + n - 1)) + norm(l.segment(k))));
  }
  return out;
}

Triangle make_triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
  Triangle t;
  t.v = {a, b, c};
  const Vec3 n = cross(b - a, c - a);
  t.area = 0.5 * norm(n);
  if (!(t.area > 0.0)) throw InvalidArgument("degenerate triangle");
  t.normal = n / (2.0 * t.area);
  return t;
}

SpanningSurface make_planar_surface(const Loop& loop, int loop_index) {
  const std::size_t n = loop.size();
  if (n < 3) throw InvalidArgument("planar surface: loop needs at least 3 nodes");
  Vec3 c;
  for (const auto& x : loop.nodes) c += x;
  c = c / static_cast<double>(n);
  // Newell normal.
  Vec3 nrm;
  double diam = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    nrm += cross(loop.node(k) - c, loop.node(k + 1) - c);
    diam = std::max(diam, norm(loop.node(k) - c));
  }
  if (norm(nrm) == 0.0) throw InvalidArgument("planar surface: loop encloses no area");
  nrm = normalized(nrm);
  for (const auto& x : loop.nodes)
    if (std::fabs(dot(x - c, nrm)) > 1e-8 * std::max(1.0, diam)) throw InvalidArgument("planar surface: loop is not planar");
  SpanningSurface T;
  T.slip = loop.burgers;
  T.boundary_loop_index = loop_index;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 cr = cross(loop.node(k) - c, loop.node(k + 1) - c);
    if (!(dot(cr, nrm) > 1e-14 * diam * diam)) throw InvalidArgument("planar surface: loop is not star-shaped about its centroid");
    T.triangles.push_back(make_triangle(c, loop.node(k), loop.node(k + 1)));
  }
  return T;
}

SpanningSurface make_cone_surface(const Loop& loop, const Vec3& apex, int loop_index) {
  const std::size_t n = loop.size();
  if (n < 3) throw InvalidArgument("cone surface: loop needs at least 3 nodes");
  for (const auto& x : loop.nodes)
    if (norm(x - apex) <= 1e-12 * std::max(1.0, norm(x))) throw InvalidArgument("cone surface: apex coincides with a node");
  SpanningSurface T;
  T.slip = loop.burgers;
  T.boundary_loop_index = loop_index;
  for (std::size_t k = 0; k < n; ++k) {
    try {
      T.triangles.push_back(make_triangle(apex, loop.node(k), loop.node(k + 1)));
    } catch (const InvalidArgument&) {
      throw InvalidArgument("cone surface: apex lies on the loop");
    }
  }
  return T;
}

std::vector<std::array<Vec3, 2>> boundary_edges(const SpanningSurface& T) {
  auto key = [](const Vec3& a) { return a.e; };
  std::map<std::pair<std::array<double, 3>, std::array<double, 3>>, int> count;
  for (const auto& t : T.triangles)
    for (int i = 0; i < 3; ++i) {
      const Vec3& a = t.v[static_cast<std::size_t>(i)];
      const Vec3& b = t.v[static_cast<std::size_t>((i + 1) % 3)];
      auto rev = count.find({key(b), key(a)});
      if (rev != count.end() && rev->second > 0) {
        if (--rev->second == 0) count.erase(rev);
      } else {
        ++count[{key(a), key(b)}];
      }
    }
  std::vector<std::array<Vec3, 2>> out;
  for (const auto& [e, c] : count)
    for (int i = 0; i < c; ++i) {
      Vec3 a, b;
      a.e = e.first;
      b.e = e.second;
      out.push_back({a, b});
    }
  return out;
}

}  // namespace ddd
