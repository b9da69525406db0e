#include "rotsym/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rotsym/error.hpp"

namespace rotsym::numerics {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
constexpr double kSeriesCutoff = 15.0;
constexpr int kMaxIterations = 100000;

void require_bessel_domain(double nu, double x) {
  if (!(nu >= 0.0) || !(x >= 0.0) || !std::isfinite(nu) || !std::isfinite(x)) {
    throw Error(ErrorCode::domain, "bessel_i: requires nu >= 0 and x >= 0 (nu=" +
                                       std::to_string(nu) + ", x=" + std::to_string(x) + ")");
  }
}

// log I_nu(x) from the ascending series; accurate for moderate x where all
// terms are positive and no cancellation occurs.
double log_bessel_series(double nu, double x) {
  const double quarter_x2 = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < kMaxIterations; ++k) {
    term *= quarter_x2 / ((k + 1.0) * (k + 1.0 + nu));
    sum += term;
    if (term < sum * kEps * 0.5) break;
  }
  return nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) + std::log(sum);
}

// exp(-x) I_nu(x) for x >= 2 from the continued fractions CF1 (ratio
// I_{nu+1}/I_nu) and Steed's CF2 (K_mu), joined through the Wronskian
// I_mu K_{mu+1} + I_{mu+1} K_mu = 1/x. K is carried with exp(x) removed, which
// yields I scaled by exp(-x).
double bessel_scaled_continued_fraction(double nu, double x) {
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;

  // CF1: f_nu = I'_nu / I_nu.
  double h = nu * xi;
  if (h < kTiny) h = kTiny;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int i = 0;
  for (; i < kMaxIterations; ++i) {
    b += xi2;
    d = 1.0 / (b + d);
    c = b + 1.0 / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i == kMaxIterations) {
    throw Error(ErrorCode::domain, "bessel_i: CF1 failed to converge");
  }

  // Downward recurrence from nu to mu with arbitrary normalization.
  double ril = kTiny;
  double ripl = h * ril;
  const double ril1 = ril;
  double fact = nu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const double ritemp = fact * ril + ripl;
    fact -= xi;
    ripl = fact * ritemp + ril;
    ril = ritemp;
  }
  const double f = ripl / ril;

  // CF2 (Steed) for K_mu and K_{mu+1}, scaled by exp(x).
  b = 2.0 * (1.0 + x);
  d = 1.0 / b;
  double delh = d;
  h = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1;
  c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (i = 1; i < kMaxIterations; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i == kMaxIterations) {
    throw Error(ErrorCode::domain, "bessel_i: CF2 failed to converge");
  }
  h = a1 * h;
  const double kmu = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  const double k1 = kmu * (mu + x + 0.5 - h) * xi;
  const double kmu_prime = mu * xi * kmu - k1;
  const double imu = xi / (f * kmu - kmu_prime);
  return imu * ril1 / ril;
}

double poisson_log_weight(int j, double mean) {
  if (mean == 0.0) return j == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -mean + j * std::log(mean) - std::lgamma(j + 1.0);
}

void require_chi2_df(double df) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw Error(ErrorCode::domain, "chi-square: degrees of freedom must be positive, got " +
                                       std::to_string(df));
  }
}

double incomplete_gamma_prefactor(double a, double x) {
  return std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Series for P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * incomplete_gamma_prefactor(a, x);
}

// Modified Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return incomplete_gamma_prefactor(a, x) * h;
}

void require_gamma_domain(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || std::isnan(x)) {
    throw Error(ErrorCode::domain, "incomplete gamma: requires a > 0 and x >= 0");
  }
}

double chi2_pdf(double x, double df) {
  if (x <= 0.0) return 0.0;
  const double k = 0.5 * df;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - std::lgamma(k));
}

}  // namespace

double log_bessel_i(double nu, double x) {
  require_bessel_domain(nu, x);
  if (x == 0.0) return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (x < kSeriesCutoff) return log_bessel_series(nu, x);
  return std::log(bessel_scaled_continued_fraction(nu, x)) + x;
}

double bessel_i_scaled(double nu, double x) {
  require_bessel_domain(nu, x);
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x < kSeriesCutoff) return std::exp(log_bessel_series(nu, x) - x);
  return bessel_scaled_continued_fraction(nu, x);
}

double bessel_i(double nu, double x) {
  const double log_value = log_bessel_i(nu, x);
  if (log_value > std::log(std::numeric_limits<double>::max())) {
    throw Error(ErrorCode::overflow,
                "bessel_i: I_nu(x) overflows double at x=" + std::to_string(x) +
                    "; use bessel_i_scaled");
  }
  if (x < kSeriesCutoff) return std::exp(log_value);
  return bessel_scaled_continued_fraction(nu, x) * std::exp(x);
}

double gamma_p(double a, double x) {
  require_gamma_domain(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double gamma_q(double a, double x) {
  require_gamma_domain(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi2_cdf(double x, double df) {
  require_chi2_df(df);
  if (!(x > 0.0)) return 0.0;
  return gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, double df) {
  require_chi2_df(df);
  if (!(x > 0.0)) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile(double df, double q) {
  require_chi2_df(df);
  if (!(q >= 0.0 && q < 1.0)) {
    throw Error(ErrorCode::domain, "chi2_quantile: probability must lie in [0, 1)");
  }
  if (q == 0.0) return 0.0;

  // Work on whichever tail is smaller to keep relative precision.
  const bool upper = q > 0.5;
  const double target = upper ? 1.0 - q : q;
  auto residual = [&](double x) { return upper ? target - chi2_sf(x, df) : chi2_cdf(x, df) - target; };

  double lo = 0.0;
  double hi = std::max(1.0, df);
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  // Safeguarded Newton: every iterate stays inside the shrinking bracket.
  double x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double r = residual(x);
    if (r == 0.0) return x;
    if (r < 0.0) lo = x; else hi = x;
    const double pdf = chi2_pdf(x, df);
    double next = pdf > 0.0 ? x - r / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * kEps * x || hi - lo <= 4.0 * kEps * hi) return next;
    x = next;
  }
  return x;
}

double noncentral_chi2_cdf(double x, double df, double lambda) {
  require_chi2_df(df);
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::domain, "noncentral_chi2_cdf: lambda must be >= 0");
  }
  if (lambda == 0.0) return chi2_cdf(x, df);
  if (!(x > 0.0)) return 0.0;
  const double mean = 0.5 * lambda;
  double total = 0.0;
  double weight_sum = 0.0;
  for (int j = 0; j < kMaxIterations; ++j) {
    const double w = std::exp(poisson_log_weight(j, mean));
    total += w * chi2_cdf(x, df + 2.0 * j);
    weight_sum += w;
    if (j > mean && 1.0 - weight_sum < 1e-14) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

double noncentral_chi2_sf(double x, double df, double lambda) {
  require_chi2_df(df);
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::domain, "noncentral_chi2_sf: lambda must be >= 0");
  }
  if (lambda == 0.0) return chi2_sf(x, df);
  if (!(x > 0.0)) return 1.0;
  const double mean = 0.5 * lambda;
  double total = 0.0;
  double weight_sum = 0.0;
  for (int j = 0; j < kMaxIterations; ++j) {
    const double w = std::exp(poisson_log_weight(j, mean));
    total += w * chi2_sf(x, df + 2.0 * j);
    weight_sum += w;
    if (j > mean && 1.0 - weight_sum < 1e-14) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double surface_area(int d) {
  if (d < 1) {
    throw Error(ErrorCode::invalid_dimension, "surface_area: dimension must be >= 1");
  }
  const double half = 0.5 * d;
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - std::lgamma(half));
}

QuadratureRule gauss_legendre(std::size_t order) {
  if (order == 0) {
    throw Error(ErrorCode::invalid_argument, "gauss_legendre: order must be positive");
  }
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const std::size_t half = (order + 1) / 2;
  const double n = static_cast<double>(order);
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = gauss_legendre(kDefaultQuadratureOrder);
  return rule;
}

double integrate(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

double integrate(const std::function<double(double)>& f) { return integrate(f, default_rule()); }

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

double integrate_polar(const std::function<double(double, double)>& f,
                       const QuadratureRule& rule) {
  return integrate(
      [&f](double phi) {
        const double s = std::sin(phi);
        return f(std::cos(phi), s) * s;
      },
      0.0, std::numbers::pi, rule);
}

double integrate_polar(const std::function<double(double, double)>& f) {
  return integrate_polar(f, default_rule());
}

}  // namespace rotsym::numerics
