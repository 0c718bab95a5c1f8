#include "radial.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "ddd/quadrature.hpp"

namespace ddd::detail {

namespace {

double weight_coef(RadialWeight w, int k) {
  double inv_fact = std::exp(-std::lgamma(k + 1.0));
  double sign = (k % 2 == 0) ? 1.0 : -1.0;
  if (w == RadialWeight::Gaussian) return sign * inv_fact;
  return sign * (-0.5 - k) * inv_fact;
}

double weight_fn(RadialWeight w, double x) {
  double e = std::exp(-x);
  return w == RadialWeight::Gaussian ? e : (x - 0.5) * e;
}

// \int_{-1}^{1} P_l(t) t^n dt for n >= l, n - l even.
double legendre_moment(int l, int n) {
  double lg = (l + 1) * std::log(2.0) + std::lgamma(n + 1.0) + std::lgamma((n + l) / 2 + 1.0) -
              std::lgamma((n - l) / 2 + 1.0) - std::lgamma(n + l + 2.0);
  return std::exp(lg);
}

double legendre_p(int l, double t) {
  if (l == 0) return 1.0;
  double p0 = 1.0, p1 = t;
  for (int k = 2; k <= l; ++k) {
    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double clenshaw(const std::vector<double>& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    double b0 = 2.0 * x * b1 - b2 + c[static_cast<std::size_t>(k)];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

std::vector<double> cheb_derivative(const std::vector<double>& a) {
  int n = static_cast<int>(a.size());
  std::vector<double> d(static_cast<std::size_t>(n), 0.0);
  // d_{k-1} = d_{k+1} + 2k a_k in the half-first-term convention.
  for (int k = n - 1; k >= 1; --k) {
    double next = (k + 1 < n) ? d[static_cast<std::size_t>(k + 1)] : 0.0;
    d[static_cast<std::size_t>(k - 1)] = next + 2.0 * k * a[static_cast<std::size_t>(k)];
  }
  d[0] *= 0.5;
  return d;
}

}  // namespace

RadialTable::RadialTable(RadialWeight weight, int lmax) : weight_(weight), lmax_(lmax) {
  const int nl = lmax / 2 + 1;
  series_coef_.resize(static_cast<std::size_t>(nl));
  legendre_even_.resize(static_cast<std::size_t>(nl));
  for (int h = 0; h < nl; ++h) {
    int l = 2 * h;
    auto& sc = series_coef_[static_cast<std::size_t>(h)];
    for (int i = 0; i < 90; ++i)
      sc.push_back(2.0 * M_PI * std::ldexp(1.0, -l) * weight_coef(weight, l / 2 + i) * legendre_moment(l, l + 2 * i));
    // P_l(t) = 2^-l sum_j (-1)^j C(l,j) C(2l-2j,l) t^(l-2j)
    auto& pe = legendre_even_[static_cast<std::size_t>(h)];
    pe.assign(static_cast<std::size_t>(l / 2 + 1), 0.0);
    for (int j = 0; j <= l / 2; ++j) {
      double lc = std::lgamma(l + 1.0) - std::lgamma(j + 1.0) - std::lgamma(l - j + 1.0) +
                  std::lgamma(2.0 * l - 2.0 * j + 1.0) - std::lgamma(l + 1.0) - std::lgamma(l - 2.0 * j + 1.0);
      double v = std::ldexp(std::exp(lc), -l) * ((j % 2 == 0) ? 1.0 : -1.0);
      pe[static_cast<std::size_t>((l - 2 * j) / 2)] = v;
    }
    auto& ac = asym_coef_.emplace_back();
    for (std::size_t k = 0; k < pe.size(); ++k) {
      double kk = static_cast<double>(k);
      double g = std::tgamma(kk + 0.5);
      if (weight == RadialWeight::GaussianSecond) g *= kk;
      ac.push_back(2.0 * M_PI * std::ldexp(1.0, -l) * pe[k] * g);
    }
  }

  const int D = kDegree;
  coef_.resize(static_cast<std::size_t>(nl));
  std::vector<double> xs(static_cast<std::size_t>(D + 1));
  for (int j = 0; j <= D; ++j) xs[static_cast<std::size_t>(j)] = std::cos(M_PI * (j + 0.5) / (D + 1));
  for (int h = 0; h < nl; ++h) {
    int l = 2 * h;
    auto& lc = coef_[static_cast<std::size_t>(h)];
    lc.resize(kPanels);
    for (int p = 0; p < kPanels; ++p) {
      std::vector<double> f(static_cast<std::size_t>(D + 1));
      for (int j = 0; j <= D; ++j) {
        double u = kPanel * p + 1.0 + xs[static_cast<std::size_t>(j)];
        f[static_cast<std::size_t>(j)] = reference(l, u);
      }
      std::vector<double> a(static_cast<std::size_t>(D + 1), 0.0);
      for (int k = 0; k <= D; ++k) {
        double s = 0.0;
        for (int j = 0; j <= D; ++j) s += f[static_cast<std::size_t>(j)] * std::cos(M_PI * k * (j + 0.5) / (D + 1));
        a[static_cast<std::size_t>(k)] = s * 2.0 / (D + 1) * (k == 0 ? 0.5 : 1.0);
      }
      auto d1 = cheb_derivative(a);
      auto d2 = cheb_derivative(d1);
      lc[static_cast<std::size_t>(p)] = {a, d1, d2};
    }
  }
}

double RadialTable::series(int l, double u) const {
  const auto& sc = series_coef_[static_cast<std::size_t>(l / 2)];
  double sum = 0.0, pw = 1.0;
  for (double c : sc) {
    sum += c * pw;
    pw *= u;
  }
  return sum;
}

double RadialTable::quadrature(int l, double u) const {
  static const GaussRule g = gauss_legendre(20);
  const int panels = 16;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = static_cast<double>(p) / panels, h = 1.0 / panels;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      double t = a + 0.5 * h * (g.x[i] + 1.0);
      s += 0.5 * h * g.w[i] * legendre_p(l, t) * weight_fn(weight_, u * t * t);
    }
  }
  // Even integrand over [-1, 1], then divide by (2 sqrt u)^l.
  return 2.0 * M_PI * 2.0 * s / std::pow(2.0 * std::sqrt(u), l);
}

double RadialTable::reference(int l, double u) const {
  if (u <= 2.0) return series(l, u);
  return quadrature(l, u);
}

// Beyond the table the Gaussian tail outside [-1, 1] is below e^-64, so the
// integral over the whole line gives the finite sum
//   Lambda_l(u) = 2 pi 2^-l sum_k p_k g_k u^-(k + (l+1)/2).
void RadialTable::asymptotic(int l, double u, double out[3], int nderiv) const {
  const auto& ac = asym_coef_[static_cast<std::size_t>(l / 2)];
  double v = 0.0, d1 = 0.0, d2 = 0.0;
  const double inv = 1.0 / u;
  double pw = std::pow(u, -0.5 * (l + 1));
  for (std::size_t k = 0; k < ac.size(); ++k, pw *= inv) {
    const double a = static_cast<double>(k) + 0.5 * (l + 1);
    const double term = ac[k] * pw;
    v += term;
    d1 += -a * term * inv;
    d2 += a * (a + 1.0) * term * inv * inv;
  }
  out[0] = v;
  if (nderiv >= 1) out[1] = d1;
  if (nderiv >= 2) out[2] = d2;
}

void RadialTable::eval(int l, double u, double out[3], int nderiv) const {
  if (u >= kTableEnd) {
    asymptotic(l, u, out, nderiv);
    return;
  }
  int p = static_cast<int>(u / kPanel);
  if (p >= kPanels) p = kPanels - 1;
  double x = u - kPanel * p - 1.0;
  const auto& c = coef_[static_cast<std::size_t>(l / 2)][static_cast<std::size_t>(p)];
  out[0] = clenshaw(c[0], x);
  if (nderiv >= 1) out[1] = clenshaw(c[1], x);
  if (nderiv >= 2) out[2] = clenshaw(c[2], x);
}

const RadialTable& radial_table(RadialWeight weight, int lmax) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::unique_ptr<RadialTable>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(static_cast<int>(weight), lmax);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<RadialTable>(weight, lmax)).first;
  return *it->second;
}

}  // namespace ddd::detail
