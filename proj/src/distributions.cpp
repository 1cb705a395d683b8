#include "rpyskit/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rpys::dist {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Lentz's method for the incomplete beta continued fraction.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// 16-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
constexpr std::array<double, 8> kNodes = {0.0950125098376374402, 0.2816035507792589133, 0.4580167776572273863,
                                          0.6178762444026437484, 0.7554044083550030339, 0.8656312023878317439,
                                          0.9445750230732325761, 0.9894009349916499326};
constexpr std::array<double, 8> kWeights = {0.1894506104550684963, 0.1826034150449235889, 0.1691565193950025382,
                                            0.1495959888165767321, 0.1246289712555338720, 0.0951585116824927849,
                                            0.0622535239386478929, 0.0271524594117540949};

template <class F>
double gauss_legendre(F &&f, double a, double b, int panels) {
  double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    double half = 0.5 * h;
    double s = 0.0;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      double dx = half * kNodes[i];
      s += kWeights[i] * (f(mid - dx) + f(mid + dx));
    }
    total += s * half;
  }
  return total;
}

// Upper normal tail, accurate far into the right tail.
double normal_sf(double z) { return 0.5 * std::erfc(z / kSqrt2); }

// P(z - w < Z < z), written to avoid cancellation on either side.
double normal_interval(double z, double w) {
  if (z > 0) return normal_sf(z - w) - normal_sf(z);
  return normal_cdf(z) - normal_cdf(z - w);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("incomplete_beta: shape parameters must be positive");
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double f_cdf(double f, double d1, double d2) {
  if (d1 <= 0 || d2 <= 0) throw std::invalid_argument("f_cdf: degrees of freedom must be positive");
  if (!(f > 0)) return 0.0;
  if (std::isinf(f)) return 1.0;
  return incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * f / (d1 * f + d2));
}

double f_sf(double f, double d1, double d2) {
  if (d1 <= 0 || d2 <= 0) throw std::invalid_argument("f_sf: degrees of freedom must be positive");
  if (!(f > 0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double normal_range_cdf(double w, int k) {
  if (k < 2) throw std::invalid_argument("normal_range_cdf: k must be at least 2");
  if (!(w > 0)) return 0.0;
  if (std::isinf(w)) return 1.0;
  auto integrand = [&](double z) {
    double inner = normal_interval(z, w);
    if (inner <= 0) return 0.0;
    return kInvSqrt2Pi * std::exp(-0.5 * z * z) * std::pow(inner, k - 1);
  };
  double lo = -8.5, hi = w + 8.5;
  int panels = std::max(8, static_cast<int>(std::ceil((hi - lo) / 0.5)));
  return std::clamp(k * gauss_legendre(integrand, lo, hi, panels), 0.0, 1.0);
}

double studentized_range_cdf(double q, int k, double df) {
  if (k < 2) throw std::invalid_argument("studentized_range_cdf: k must be at least 2");
  if (!(df >= 1)) throw std::invalid_argument("studentized_range_cdf: df must be at least 1");
  if (!(q > 0)) return 0.0;
  if (std::isinf(q)) return 1.0;
  if (df > 25000) return normal_range_cdf(q, k);

  // s = sqrt(chi2_df / df) has density 2 (df/2)^(df/2) / Gamma(df/2) s^(df-1) exp(-df s^2 / 2).
  double ln_norm = std::log(2.0) + 0.5 * df * std::log(0.5 * df) - std::lgamma(0.5 * df);
  auto density = [&](double s) {
    if (s <= 0) return 0.0;
    return std::exp(ln_norm + (df - 1.0) * std::log(s) - 0.5 * df * s * s);
  };
  double sd = 1.0 / std::sqrt(2.0 * df);
  double lo = std::max(0.0, 1.0 - 12.0 * sd);
  double hi = 1.0 + 14.0 * sd + (df < 5 ? 6.0 : 0.0);
  auto integrand = [&](double s) {
    double d = density(s);
    return d > 0 ? d * normal_range_cdf(q * s, k) : 0.0;
  };
  return std::clamp(gauss_legendre(integrand, lo, hi, 24), 0.0, 1.0);
}

double studentized_range_quantile(double alpha, int k, double df) {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("studentized_range_quantile: alpha must lie in (0, 1)");
  double target = 1.0 - alpha;
  auto g = [&](double q) { return studentized_range_cdf(q, k, df) - target; };
  double lo = 0.0, glo = -target;
  double hi = 2.0, ghi = g(hi);
  while (ghi < 0) {
    lo = hi;
    glo = ghi;
    hi *= 2.0;
    ghi = g(hi);
    if (hi > 1e4) throw std::runtime_error("studentized_range_quantile: failed to bracket");
  }
  // Illinois variant of regula falsi.
  int side = 0;
  for (int iter = 0; iter < 100; ++iter) {
    double mid = (lo * ghi - hi * glo) / (ghi - glo);
    double gm = g(mid);
    if (std::fabs(gm) < 1e-12 || (hi - lo) < 1e-10) return mid;
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
      if (side == -1) ghi /= 2;
      side = -1;
    } else {
      hi = mid;
      ghi = gm;
      if (side == 1) glo /= 2;
      side = 1;
    }
    if ((hi - lo) < 1e-9 * std::max(1.0, hi)) return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

}  // namespace rpys::dist
