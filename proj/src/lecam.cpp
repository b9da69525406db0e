#include "rotsym/lecam.hpp"

#include <algorithm>
#include <cmath>

#include "rotsym/error.hpp"

namespace rotsym {
namespace {

void require_p3(int p, const char* where) {
  if (p < 3) {
    throw Error(ErrorCode::invalid_dimension,
                std::string(where) + ": requires p >= 3, got " + std::to_string(p));
  }
}

InfoFunctionals info_with_rule(const AngularFunction& f, const AngularFunction& g, int p,
                               const numerics::QuadratureRule& rule) {
  InfoFunctionals out;
  out.i_p = cosine_expectation(g, p, [&](double t, double s) { return g.log_deriv(t) * s; }, rule);
  out.j_p = cosine_expectation(
      g, p, [&](double t, double s) { return std::pow(g.log_deriv(t) * s, 2); }, rule);
  out.j_fg = cosine_expectation(
      g, p, [&](double t, double s) { return f.log_deriv(t) * g.log_deriv(t) * s * s; }, rule);
  out.h_fg = cosine_expectation(g, p, [&](double t, double s) { return f.log_deriv(t) * s; }, rule);
  out.k_fg = cosine_expectation(
      g, p, [&](double t, double s) { return std::pow(f.log_deriv(t) * s, 2); }, rule);
  return out;
}

bool converged(double a, double b) {
  return std::isfinite(a) && std::isfinite(b) && std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b));
}

}  // namespace

double cosine_expectation(const AngularFunction& g, int p,
                          const std::function<double(double, double)>& h,
                          const numerics::QuadratureRule& rule) {
  const double log_front =
      std::log(numerics::surface_area(p - 1)) + log_normalizing_constant(g, p);
  // tilde g_p(t) dt = omega c s^{p-3} g(t) s dphi; integrate_polar supplies the last s.
  return numerics::integrate_polar(
      [&](double t, double s) {
        const double log_w = log_front + (p - 3) * std::log(s) + g.log_value(t);
        return h(t, s) * std::exp(log_w);
      },
      rule);
}

InfoFunctionals info_functionals(const AngularFunction& f, const AngularFunction& g, int p) {
  require_p3(p, "info_functionals");
  if (!f.has_log_deriv() || !g.has_log_deriv()) {
    throw Error(ErrorCode::unsupported_angular_function,
                "info_functionals: both angular functions need a registered score");
  }
  const InfoFunctionals base = info_with_rule(f, g, p, numerics::default_rule());
  static const numerics::QuadratureRule fine =
      numerics::gauss_legendre(2 * numerics::kDefaultQuadratureOrder);
  const InfoFunctionals check = info_with_rule(f, g, p, fine);
  if (!converged(base.i_p, check.i_p) || !converged(base.j_p, check.j_p) ||
      !converged(base.j_fg, check.j_fg) || !converged(base.h_fg, check.h_fg) ||
      !converged(base.k_fg, check.k_fg)) {
    throw Error(ErrorCode::divergent_functional,
                "info_functionals: quadrature does not converge for f=" + f.label() +
                    ", g=" + g.label());
  }
  return check;
}

double population_d(const AngularFunction& g, int p) {
  require_p3(p, "population_d");
  const double num = cosine_expectation(g, p, [](double t, double s) { return t / s; });
  const double den = cosine_expectation(g, p, [](double t, double) { return t; });
  if (!(std::abs(den) > 1e-12)) {
    throw Error(ErrorCode::undefined_d_hat, "population_d: E[V] vanishes");
  }
  return (p - 2.0) * num / ((p - 1.0) * den);
}

double are_vmf(int p, double eta) {
  require_p3(p, "are_vmf");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::domain, "are_vmf: eta must be positive and finite");
  }
  // The exp(-eta) scalings cancel between numerator and denominator.
  const double num = numerics::bessel_i_scaled(0.5 * (p - 1), eta);
  const double den_a = numerics::bessel_i_scaled(0.5 * (p - 2), eta);
  const double den_b = numerics::bessel_i_scaled(0.5 * p, eta);
  const double log_gamma_ratio = 2.0 * (std::lgamma(0.5 * p) - std::lgamma(0.5 * (p - 1)));
  const double ratio = 2.0 * std::exp(log_gamma_ratio) * num * num / ((p - 1.0) * den_a * den_b);
  return std::clamp(1.0 - ratio, 0.0, 1.0);
}

double are_quadrature(int p, double eta) {
  const AngularFunction g = AngularFunction::vmf(eta);
  const InfoFunctionals info = info_functionals(g, g, p);
  return 1.0 - info.i_p * info.i_p / info.j_p;
}

double noncentrality_te(const Eigen::MatrixXd& l, int p) {
  require_p3(p, "noncentrality_te");
  if (l.rows() != p - 1 || l.cols() != p - 1) {
    throw Error(ErrorCode::invalid_dimension, "noncentrality_te: L must be (p-1) x (p-1)");
  }
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::invalid_perturbation, "noncentrality_te: L must be symmetric");
  }
  if (std::abs(l.trace()) > 1e-10) {
    throw Error(ErrorCode::invalid_perturbation, "noncentrality_te: L must be traceless");
  }
  return (p - 1.0) * (l * l).trace() / (2.0 * (p + 1.0));
}

double noncentrality_tm(double k, int p) {
  require_p3(p, "noncentrality_tm");
  return k * k / (p - 1.0);
}

double noncentrality_semiparam(const AngularFunction& f, const AngularFunction& g, double k,
                               int p) {
  const InfoFunctionals info = info_functionals(f, g, p);
  if (!(std::abs(info.j_fg) > 1e-12)) {
    throw Error(ErrorCode::degenerate_cross_information,
                "noncentrality_semiparam: J_p(f;g) vanishes");
  }
  const double r = info.i_p / info.j_fg;
  const double shift = 1.0 - r * info.h_fg;
  const double denom = 1.0 - 2.0 * r * info.h_fg + r * r * info.k_fg;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::singular_information,
                "noncentrality_semiparam: asymptotic variance is not positive");
  }
  return k * k / (p - 1.0) * shift * shift / denom;
}

double predicted_power(double lambda, int df, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::domain, "predicted_power: alpha must lie in (0, 1)");
  }
  const double critical = numerics::chi2_quantile(df, 1.0 - alpha);
  return numerics::noncentral_chi2_sf(critical, df, lambda);
}

}  // namespace rotsym
