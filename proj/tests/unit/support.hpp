// Shared helpers for the unit and acceptance tests. Reference distributions
// come from Boost.Math so they are independent of the library's numerics.
#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "rotsym/geometry.hpp"
#include "rotsym/numerics.hpp"

namespace rotsym::oracle {

/// Asymptotic Kolmogorov p-value with Stephens' finite-n correction.
inline double ks_pvalue(double d, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double lam = (rn + 0.12 + 0.11 / rn) * d;
  if (lam < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lam * lam);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS distance against a continuous cdf.
inline double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

inline double ks_test(const std::vector<double>& x, const std::function<double(double)>& cdf) {
  return ks_pvalue(ks_distance(x, cdf), x.size());
}

/// Pearson chi-square p-value for observed counts against cell probabilities.
inline double chi2_gof(const std::vector<double>& observed, const std::vector<double>& probs,
                       int fitted = 0) {
  double n = 0.0;
  for (double o : observed) n += o;
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double e = n * probs[k];
    stat += (observed[k] - e) * (observed[k] - e) / e;
  }
  boost::math::chi_squared dist(static_cast<double>(observed.size()) - 1.0 - fitted);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Composite Simpson on [a, b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 2000) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Integral of a density on S^2 in tangent coordinates x = v theta + sqrt(1-v^2) gamma (cos a, sin a).
inline double sphere_integral(const TangentFrame& f, const std::function<double(const Eigen::VectorXd&)>& dens,
                       double v0 = -1.0, double v1 = 1.0, double a0 = 0.0, double a1 = 2.0 * M_PI,
                       int nv = 200, int na = 200) {
  const auto rule = numerics::gauss_legendre(static_cast<std::size_t>(nv));
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = 0.5 * (v1 - v0) * rule.nodes[i] + 0.5 * (v1 + v0);
    const double s = std::sqrt(1.0 - v * v);
    double inner = 0.0;
    for (int k = 0; k < na; ++k) {
      const double a = a0 + (k + 0.5) * (a1 - a0) / na;
      const Eigen::Vector3d x = v * f.theta().coords() + s * f.gamma() * Eigen::Vector2d(std::cos(a), std::sin(a));
      inner += dens(x);
    }
    total += 0.5 * (v1 - v0) * rule.weights[i] * inner * (a1 - a0) / na;
  }
  return total;
}

// Spherical chi-square GOF on a (v, angle) grid; cell probabilities by quadrature.
inline double sphere_gof(const TangentFrame& f, const std::function<double(const Eigen::VectorXd&)>& dens,
                  const DirectionalSample& sample, int vbins = 6, int abins = 8) {
  std::vector<double> obs(static_cast<std::size_t>(vbins * abins), 0.0), prob(obs.size());
  for (int i = 0; i < sample.n(); ++i) {
    const SignCosine sc = decompose(sample.row(i), f);
    int bv = std::min(vbins - 1, static_cast<int>((sc.v + 1.0) / 2.0 * vbins));
    double a = std::atan2(sc.u[1], sc.u[0]);
    if (a < 0) a += 2.0 * M_PI;
    int ba = std::min(abins - 1, static_cast<int>(a / (2.0 * M_PI) * abins));
    obs[static_cast<std::size_t>(bv * abins + ba)] += 1.0;
  }
  for (int bv = 0; bv < vbins; ++bv) {
    for (int ba = 0; ba < abins; ++ba) {
      prob[static_cast<std::size_t>(bv * abins + ba)] =
          sphere_integral(f, dens, -1.0 + 2.0 * bv / vbins, -1.0 + 2.0 * (bv + 1) / vbins,
                          2.0 * M_PI * ba / abins, 2.0 * M_PI * (ba + 1) / abins, 40, 40);
    }
  }
  return chi2_gof(obs, prob);
}

}  // namespace rotsym::oracle
