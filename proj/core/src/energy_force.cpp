#include "ddd/energy_force.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "ddd/error.hpp"
#include "ddd/parallel.hpp"

namespace ddd {

namespace {

// Fixed block count for reductions; independent of the number of workers.
constexpr std::size_t kBlocks = 64;

struct Segment {
  Vec3 p0;
  Vec3 dx;
  std::size_t loop;
  std::size_t burgers;  // index into the distinct Burgers vectors
  std::size_t n0, n1;   // global node indices of the end points
};

struct SegmentSet {
  std::vector<Segment> segs;
  std::vector<Vec3> burgers;
};

SegmentSet collect_segments(const DislocationNetwork& S) {
  SegmentSet out;
  std::map<std::array<double, 3>, std::size_t> ids;
  std::size_t g = 0;
  for (std::size_t li = 0; li < S.loops.size(); ++li) {
    const Loop& l = S.loops[li];
    auto it = ids.find(l.burgers.cartesian.e);
    if (it == ids.end()) {
      it = ids.emplace(l.burgers.cartesian.e, out.burgers.size()).first;
      out.burgers.push_back(l.burgers.cartesian);
    }
    const std::size_t n = l.size();
    for (std::size_t k = 0; k < n; ++k)
      out.segs.push_back({l.node(k), l.segment(k), li, it->second, g + k, g + (k + 1) % n});
    g += n;
  }
  return out;
}

// Contracted kernels M_bd = K_abcd b1_a b2_c for every ordered pair of distinct
// Burgers vectors.
std::vector<ContractedKernel> burgers_pair_kernels(const KernelEvaluator& ev, const std::vector<Vec3>& b) {
  std::vector<ContractedKernel> out;
  out.reserve(b.size() * b.size());
  for (const Vec3& b1 : b)
    for (const Vec3& b2 : b) out.push_back(ev.contract_K(b1, b2));
  return out;
}

inline double bilinear(const double* M, const Vec3& u, const Vec3& v) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += u[i] * M[3 * i + j] * v[j];
  return s;
}

}  // namespace

EnergyBreakdown energy_line(const DislocationNetwork& S, const KernelEvaluator& ev, const LineQuadratureRule& rule) {
  EnergyBreakdown out;
  out.loops = S.loops.size();
  out.pair.assign(out.loops * out.loops, 0.0);
  if (S.empty()) return out;
  const SegmentSet set = collect_segments(S);
  const auto& segs = set.segs;
  const auto kern = burgers_pair_kernels(ev, set.burgers);
  const std::size_t nb = set.burgers.size();
  const std::size_t ns = segs.size(), nl = out.loops;
  const std::size_t ng = rule.points.size();
  std::vector<Vec3> gp(ns * ng);
  for (std::size_t p = 0; p < ns; ++p)
    for (std::size_t a = 0; a < ng; ++a) gp[p * ng + a] = segs[p].p0 + rule.points[a] * segs[p].dx;

  const std::size_t nblk = std::min(kBlocks, ns);
  std::vector<std::vector<double>> buf(nblk, std::vector<double>(nl * nl, 0.0));
  parallel_for(nblk, [&](std::size_t blk) {
    auto& acc = buf[blk];
    double M[9];
    for (std::size_t p = blk; p < ns; p += nblk) {
      const Segment& sp = segs[p];
      for (std::size_t q = p; q < ns; ++q) {
        const Segment& sq = segs[q];
        const ContractedKernel& K = kern[sp.burgers * nb + sq.burgers];
        double e = 0.0;
        for (std::size_t a = 0; a < ng; ++a)
          for (std::size_t b = 0; b < ng; ++b) {
            K.eval(gp[p * ng + a] - gp[q * ng + b], M);
            e += rule.weights[a] * rule.weights[b] * bilinear(M, sp.dx, sq.dx);
          }
        e *= 0.5;
        // Ordered pairs (p,q) and (q,p) are equal; split between (i,j) and (j,i).
        if (q == p) {
          acc[sp.loop * nl + sq.loop] += e;
        } else {
          acc[sp.loop * nl + sq.loop] += e;
          acc[sq.loop * nl + sp.loop] += e;
        }
      }
    }
  });
  for (const auto& b : buf)
    for (std::size_t i = 0; i < nl * nl; ++i) out.pair[i] += b[i];
  for (std::size_t i = 0; i < nl; ++i)
    for (std::size_t j = i + 1; j < nl; ++j) {
      // Exact symmetry regardless of summation order.
      const double m = 0.5 * (out.pair[i * nl + j] + out.pair[j * nl + i]);
      out.pair[i * nl + j] = out.pair[j * nl + i] = m;
    }
  for (double v : out.pair) out.total += v;
  return out;
}

EnergyGradient discrete_energy_gradient(const DislocationNetwork& S, const KernelEvaluator& ev,
                                        const LineQuadratureRule& rule) {
  EnergyGradient out;
  const std::size_t nn = S.total_nodes();
  out.gradient.assign(nn, Vec3{});
  if (S.empty()) return out;
  const SegmentSet set = collect_segments(S);
  const auto& segs = set.segs;
  const auto kern = burgers_pair_kernels(ev, set.burgers);
  const std::size_t nb = set.burgers.size();
  const std::size_t ns = segs.size(), ng = rule.points.size();
  std::vector<Vec3> gp(ns * ng);
  for (std::size_t p = 0; p < ns; ++p)
    for (std::size_t a = 0; a < ng; ++a) gp[p * ng + a] = segs[p].p0 + rule.points[a] * segs[p].dx;

  const std::size_t nblk = std::min(kBlocks, ns);
  std::vector<std::vector<Vec3>> gbuf(nblk, std::vector<Vec3>(nn));
  std::vector<double> ebuf(nblk, 0.0);
  parallel_for(nblk, [&](std::size_t blk) {
    auto& g = gbuf[blk];
    double M[9], dM[27];
    for (std::size_t p = blk; p < ns; p += nblk) {
      const Segment& sp = segs[p];
      for (std::size_t q = p; q < ns; ++q) {
        const Segment& sq = segs[q];
        const ContractedKernel& K = kern[sp.burgers * nb + sq.burgers];
        const double c = (q == p) ? 0.5 : 1.0;  // ordered-pair multiplicity times 1/2
        Vec3 gp0, gp1, gq0, gq1;
        double e = 0.0;
        for (std::size_t a = 0; a < ng; ++a) {
          const double xa = rule.points[a];
          for (std::size_t b = 0; b < ng; ++b) {
            const double xb = rule.points[b];
            const double w = c * rule.weights[a] * rule.weights[b];
            K.eval_grad(gp[p * ng + a] - gp[q * ng + b], M, dM);
            e += w * bilinear(M, sp.dx, sq.dx);
            Vec3 Mq, Mtp, ds;  // M dx_q, M^T dx_p, grad_s (dx_p . M dx_q)
            for (int i = 0; i < 3; ++i)
              for (int j = 0; j < 3; ++j) {
                Mq[i] += M[3 * i + j] * sq.dx[j];
                Mtp[j] += M[3 * i + j] * sp.dx[i];
                const double pq = sp.dx[i] * sq.dx[j];
                for (int m = 0; m < 3; ++m) ds[m] += pq * dM[(3 * i + j) * 3 + m];
              }
            gp1 += w * (Mq + xa * ds);
            gp0 += w * ((1.0 - xa) * ds - Mq);
            gq1 += w * (Mtp - xb * ds);
            gq0 += w * (-Mtp - (1.0 - xb) * ds);
          }
        }
        ebuf[blk] += e;
        g[sp.n0] += gp0;
        g[sp.n1] += gp1;
        g[sq.n0] += gq0;
        g[sq.n1] += gq1;
      }
    }
  });
  for (std::size_t b = 0; b < nblk; ++b) {
    out.energy += ebuf[b];
    for (std::size_t i = 0; i < nn; ++i) out.gradient[i] += gbuf[b][i];
  }
  return out;
}

namespace {

Vec3 G_from_line(const Vec3& s, std::size_t bs, const SegmentSet& set, const std::vector<ContractedKernel>& kern,
                 const LineQuadratureRule& rule) {
  const std::size_t nb = set.burgers.size();
  const std::size_t ng = rule.points.size();
  double M[9], dM[27];
  // H[l][m] = sum_d dM_ld/ds_m dx_d, then G_k = A_klm H[l][m].
  double H[3][3] = {};
  for (const Segment& sq : set.segs) {
    const ContractedKernel& K = kern[bs * nb + sq.burgers];
    for (std::size_t b = 0; b < ng; ++b) {
      K.eval_grad(s - (sq.p0 + rule.points[b] * sq.dx), M, dM);
      const double w = rule.weights[b];
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m) {
          double v = 0.0;
          for (int d = 0; d < 3; ++d) v += dM[(3 * l + d) * 3 + m] * sq.dx[d];
          H[l][m] += w * v;
        }
    }
  }
  return {H[1][2] - H[2][1], H[2][0] - H[0][2], H[0][1] - H[1][0]};
}

}  // namespace

ForceField pk_force(const DislocationNetwork& S, const KernelEvaluator& ev, const LineQuadratureRule& rule) {
  ForceField out;
  const std::size_t nn = S.total_nodes();
  out.tangent = node_tangents(S);
  out.lumped_length = lumped_lengths(S);
  out.G.assign(nn, Vec3{});
  out.force.assign(nn, Vec3{});
  if (S.empty()) return out;
  const SegmentSet set = collect_segments(S);
  const auto kern = burgers_pair_kernels(ev, set.burgers);
  std::vector<Vec3> nodes;
  std::vector<std::size_t> node_b;
  for (const Segment& sg : set.segs) {
    nodes.push_back(sg.p0);
    node_b.push_back(sg.burgers);
  }
  parallel_for(nn, [&](std::size_t i) {
    out.G[i] = G_from_line(nodes[i], node_b[i], set, kern, rule);
    out.force[i] = cross(out.tangent[i], out.G[i]);
  });
  return out;
}

ForceField variational_force(const DislocationNetwork& S, const KernelEvaluator& ev, const LineQuadratureRule& rule,
                             double* energy) {
  ForceField out;
  out.tangent = node_tangents(S);
  out.lumped_length = lumped_lengths(S);
  const EnergyGradient eg = discrete_energy_gradient(S, ev, rule);
  if (energy) *energy = eg.energy;
  out.force.resize(eg.gradient.size());
  for (std::size_t i = 0; i < eg.gradient.size(); ++i) {
    const Vec3& t = out.tangent[i];
    const Vec3 g = eg.gradient[i] - dot(eg.gradient[i], t) * t;
    out.force[i] = (-1.0 / out.lumped_length[i]) * g;
  }
  return out;
}

Vec3 pk_G_line(const Vec3& s, const Vec3& b_s, const DislocationNetwork& S, const KernelEvaluator& ev,
               const LineQuadratureRule& rule) {
  SegmentSet set = collect_segments(S);
  std::size_t bs = set.burgers.size();
  for (std::size_t i = 0; i < set.burgers.size(); ++i)
    if (set.burgers[i] == b_s) bs = i;
  if (bs == set.burgers.size()) set.burgers.push_back(b_s);
  const auto kern = burgers_pair_kernels(ev, set.burgers);
  return G_from_line(s, bs, set, kern, rule);
}

// Surface quadrature

namespace {

// Symmetric 3-point rule (degree 2) in barycentric coordinates.
constexpr double kTriBary[3][3] = {{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};

struct Tri {
  std::array<Vec3, 3> v;
  Vec3 c;       // centroid
  double rad;   // max distance from the centroid to a vertex
  double diam;  // longest edge
  double area;
};

Tri make_tri(const Vec3& a, const Vec3& b, const Vec3& c) {
  Tri t;
  t.v = {a, b, c};
  t.c = (a + b + c) / 3.0;
  t.rad = std::max({norm(a - t.c), norm(b - t.c), norm(c - t.c)});
  t.diam = std::max({norm(b - a), norm(c - b), norm(a - c)});
  t.area = 0.5 * norm(cross(b - a, c - a));
  return t;
}

std::array<Tri, 4> split(const Tri& t) {
  const Vec3 m01 = 0.5 * (t.v[0] + t.v[1]), m12 = 0.5 * (t.v[1] + t.v[2]), m20 = 0.5 * (t.v[2] + t.v[0]);
  return {make_tri(t.v[0], m01, m20), make_tri(m01, t.v[1], m12), make_tri(m20, m12, t.v[2]), make_tri(m01, m12, m20)};
}

std::array<Vec3, 3> tri_points(const Tri& t) {
  std::array<Vec3, 3> p;
  for (int i = 0; i < 3; ++i)
    p[static_cast<std::size_t>(i)] = kTriBary[i][0] * t.v[0] + kTriBary[i][1] * t.v[1] + kTriBary[i][2] * t.v[2];
  return p;
}

double gap(const Tri& a, const Tri& b) { return std::max(0.0, norm(a.c - b.c) - a.rad - b.rad); }

// \int_A \int_B k(x - y) dA dA for a scalar kernel.
double pair_integral(const Tri& A, const Tri& B, bool same, const ContractedKernel& k, double eps,
                     const SurfaceQuadratureOptions& opt, int depth) {
  const double scale = opt.tau * std::max(eps, same ? 0.0 : gap(A, B));
  if (same) {
    if (A.diam <= opt.tau * eps || depth >= opt.max_depth) {
      auto pa = tri_points(A);
      double s = 0.0, v;
      for (const auto& x : pa)
        for (const auto& y : pa) {
          k.eval(x - y, &v);
          s += v;
        }
      return s * A.area * A.area / 9.0;
    }
    auto c = split(A);
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      s += pair_integral(c[i], c[i], true, k, eps, opt, depth + 1);
      for (std::size_t j = i + 1; j < 4; ++j) s += 2.0 * pair_integral(c[i], c[j], false, k, eps, opt, depth + 1);
    }
    return s;
  }
  if ((A.diam <= scale && B.diam <= scale) || depth >= opt.max_depth) {
    auto pa = tri_points(A), pb = tri_points(B);
    double s = 0.0, v;
    for (const auto& x : pa)
      for (const auto& y : pb) {
        k.eval(x - y, &v);
        s += v;
      }
    return s * A.area * B.area / 9.0;
  }
  double s = 0.0;
  if (A.diam >= B.diam) {
    for (const Tri& c : split(A)) s += pair_integral(c, B, false, k, eps, opt, depth + 1);
  } else {
    for (const Tri& c : split(B)) s += pair_integral(A, c, false, k, eps, opt, depth + 1);
  }
  return s;
}

}  // namespace

double energy_surface(const std::vector<SpanningSurface>& T, const KernelEvaluator& ev,
                      const SurfaceQuadratureOptions& opt) {
  if (!(opt.tau > 0.0)) throw InvalidArgument("surface quadrature: tau must be positive");
  struct Item {
    Tri t;
    Vec3 nu;
    Vec3 b;
  };
  std::vector<Item> items;
  for (const auto& surf : T)
    for (const auto& tr : surf.triangles) items.push_back({make_tri(tr.v[0], tr.v[1], tr.v[2]), tr.normal, surf.slip.cartesian});
  const std::size_t n = items.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
  const std::size_t nblk = std::min(kBlocks, pairs.size());
  std::vector<double> buf(nblk, 0.0);
  const double eps = ev.epsilon();
  parallel_for(nblk, [&](std::size_t blk) {
    for (std::size_t k = blk; k < pairs.size(); k += nblk) {
      const auto [i, j] = pairs[k];
      const Item& A = items[i];
      const Item& B = items[j];
      const ContractedKernel kj = ev.contract_J(A.b, A.nu, B.b, B.nu);
      const double v = pair_integral(A.t, B.t, i == j, kj, eps, opt, 0);
      buf[blk] += (i == j ? 0.5 : 1.0) * v;
    }
  });
  double e = 0.0;
  for (double v : buf) e += v;
  return e;
}

namespace {

// \int_T H(s - t) dA for the 9x9 second-derivative block used by the surface force.
void point_integral(const Vec3& s, const Tri& A, const ContractedKernel& k, double eps,
                    const SurfaceQuadratureOptions& opt, int depth, double acc[81]) {
  const double d = std::max(0.0, norm(s - A.c) - A.rad);
  if (A.diam <= opt.tau * std::max(eps, d) || depth >= opt.max_depth) {
    double v[9], g[27], h[81];
    for (const auto& x : tri_points(A)) {
      k.eval_hess(s - x, v, g, h);
      for (int i = 0; i < 81; ++i) acc[i] += h[i] * A.area / 3.0;
    }
    return;
  }
  for (const Tri& c : split(A)) point_integral(s, c, k, eps, opt, depth + 1, acc);
}

}  // namespace

Vec3 pk_G_surface(const Vec3& s, const Vec3& b_s, const std::vector<SpanningSurface>& T, const KernelEvaluator& ev,
                  const SurfaceQuadratureOptions& opt) {
  // G_k = -\int A_fbd A_klm M_ld,mb(s - t) nu_f dA,  M_ld = K_alcd b_a(s) b_c(t).
  Vec3 G;
  for (const auto& surf : T) {
    const ContractedKernel k = ev.contract_K(b_s, surf.slip.cartesian);
    for (const auto& tr : surf.triangles) {
      double H[81] = {};  // H[(3l+d)*9 + 3m + b]
      point_integral(s, make_tri(tr.v[0], tr.v[1], tr.v[2]), k, ev.epsilon(), opt, 0, H);
      for (int kk = 0; kk < 3; ++kk)
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m) {
            const double A2 = levi_civita(kk, l, m);
            if (A2 == 0.0) continue;
            for (int f = 0; f < 3; ++f)
              for (int b = 0; b < 3; ++b)
                for (int d = 0; d < 3; ++d) {
                  const double A1 = levi_civita(f, b, d);
                  if (A1 == 0.0) continue;
                  G[kk] -= A1 * A2 * H[(3 * l + d) * 9 + 3 * m + b] * tr.normal[f];
                }
          }
    }
  }
  return G;
}

}  // namespace ddd
