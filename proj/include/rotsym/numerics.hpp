#pragma once

#include <functional>
#include <vector>

namespace rotsym::numerics {

/// Modified Bessel function of the first kind I_nu(x), nu >= 0, x >= 0.
/// Throws ErrorCode::overflow when the result exceeds the double range;
/// use bessel_i_scaled() in that regime.
double bessel_i(double nu, double x);

/// Exponentially scaled Bessel function exp(-x) I_nu(x).
double bessel_i_scaled(double nu, double x);

/// log I_nu(x), finite for any x > 0 (x = 0 gives -inf unless nu = 0).
double log_bessel_i(double nu, double x);

/// Regularized lower and upper incomplete gamma functions P(a, x), Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chi2_cdf(double x, double df);
/// Upper tail 1 - F_df(x), computed directly (no cancellation).
double chi2_sf(double x, double df);
/// Quantile: smallest x with chi2_cdf(x, df) >= q, for q in [0, 1).
double chi2_quantile(double df, double q);

/// Noncentral chi-square CDF as a Poisson mixture of central CDFs.
double noncentral_chi2_cdf(double x, double df, double lambda);
double noncentral_chi2_sf(double x, double df, double lambda);

double normal_cdf(double z);
double normal_sf(double z);

/// Measure of the unit sphere S^{d-1} embedded in R^d: 2 pi^{d/2} / Gamma(d/2).
double surface_area(int d);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

inline constexpr std::size_t kDefaultQuadratureOrder = 256;

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(std::size_t order);

/// Shared 256-node rule, built once.
const QuadratureRule& default_rule();

double integrate(const std::function<double(double)>& f, const QuadratureRule& rule);
double integrate(const std::function<double(double)>& f);

/// Integral of f over [a, b] with the rule mapped affinely.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureRule& rule);

/// Integral over [-1, 1] of f(t, s), s = sqrt(1 - t^2), after the substitution
/// t = cos(phi): int_0^pi f(cos phi, sin phi) sin(phi) dphi with the rule mapped
/// onto [0, pi]. Integrands smooth(t) * (1 - t^2)^{k/2}, k >= -1, become smooth
/// in phi, so the rule converges spectrally where plain Gauss-Legendre does not.
/// Passing s separately avoids recomputing 1 - t^2 by cancellation near t = +-1.
double integrate_polar(const std::function<double(double, double)>& f,
                       const QuadratureRule& rule);
double integrate_polar(const std::function<double(double, double)>& f);

}  // namespace rotsym::numerics
