#include "rotsym/symmetry_tests.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rotsym/error.hpp"
#include "rotsym/numerics.hpp"

namespace rotsym {
namespace {

constexpr double kFisherFloor = 1e-300;

struct LabelEntry {
  Method method;
  std::string_view label;
};

constexpr std::array<LabelEntry, 10> kLabels{{
    {Method::loc, "s-loc"},
    {Method::sc, "s-sc"},
    {Method::hyb, "s-hyb"},
    {Method::hyb_fisher, "s-hybF"},
    {Method::cov, "s-cov"},
    {Method::loc_vmf_unspec, "u-loc"},
    {Method::sc_unspec, "u-sc"},
    {Method::hyb_vmf_unspec, "u-hyb"},
    {Method::hyb_fisher_unspec, "u-hybF"},
    {Method::loc_score_unspec, "u-locf"},
}};

void require_p3(int p, Method m) {
  if (p < 3) {
    throw Error(ErrorCode::invalid_dimension,
                std::string(label(m)) + ": requires p >= 3, got p = " + std::to_string(p));
  }
}

TestResult make_result(Method m, double statistic, int df, const DirectionalSample& sample,
                       const UnitVector& theta, std::string_view mode) {
  TestResult r;
  r.method = m;
  r.statistic = statistic;
  r.df = df;
  r.p_value = numerics::chi2_sf(statistic, df);
  r.n = sample.n();
  r.p = sample.p();
  r.theta = theta.coords();
  r.theta_mode = std::string(mode);
  return r;
}

SignsCosines signs(const DirectionalSample& sample, const TangentFrame& frame, Method m) {
  require_p3(sample.p(), m);
  return decompose(sample, frame);
}

TestResult fisher_result(Method m, const TestResult& loc, const TestResult& sc) {
  const FisherCombination fc = fisher_combine(loc.p_value, sc.p_value);
  TestResult r = loc;
  r.method = m;
  r.statistic = fc.statistic;
  r.df = 4;
  r.p_value = numerics::chi2_sf(fc.statistic, 4);
  r.clamped = fc.clamped;
  return r;
}

TestResult sum_result(Method m, const TestResult& loc, const TestResult& sc) {
  TestResult r = loc;
  r.method = m;
  r.statistic = loc.statistic + sc.statistic;
  r.df = *loc.df + *sc.df;
  r.p_value = numerics::chi2_sf(r.statistic, *r.df);
  return r;
}

double efficient_quadratic_form(const Eigen::VectorXd& delta, double gamma) {
  if (!(gamma > 1e-12)) {
    throw Error(ErrorCode::singular_information,
                "location test: estimated information scalar is not positive");
  }
  return delta.squaredNorm() / gamma;
}

}  // namespace

std::string_view label(Method m) {
  for (const auto& e : kLabels) {
    if (e.method == m) return e.label;
  }
  return "unknown";
}

std::optional<Method> method_from_label(std::string_view name) {
  for (const auto& e : kLabels) {
    if (e.label == name) return e.method;
  }
  return std::nullopt;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> out;
    for (const auto& e : kLabels) out.push_back(e.method);
    return out;
  }();
  return methods;
}

bool is_unspecified(Method m) {
  switch (m) {
    case Method::loc_vmf_unspec:
    case Method::sc_unspec:
    case Method::hyb_vmf_unspec:
    case Method::hyb_fisher_unspec:
    case Method::loc_score_unspec:
      return true;
    default:
      return false;
  }
}

int df_loc(int p) { return p - 1; }
int df_sc(int p) { return (p - 2) * (p + 1) / 2; }

double loc_statistic(const Eigen::MatrixXd& u) {
  const double n = static_cast<double>(u.rows());
  const Eigen::VectorXd mean = u.colwise().mean().transpose();
  return n * static_cast<double>(u.cols()) * mean.squaredNorm();
}

double sc_statistic(const Eigen::MatrixXd& u) {
  const double n = static_cast<double>(u.rows());
  const double pm1 = static_cast<double>(u.cols());
  const double p = pm1 + 1.0;
  const Eigen::MatrixXd s = u.transpose() * u / n;
  // tr S^2 >= 1/(p-1) because tr S = 1; rounding can dip below.
  const double excess = s.squaredNorm() - 1.0 / pm1;
  return std::max(0.0, 0.5 * n * (p * p - 1.0) * excess);
}

double cov_statistic(const Eigen::VectorXd& v, const Eigen::MatrixXd& u) {
  const double v2 = v.squaredNorm();
  if (!(v2 > 1e-12)) {
    throw Error(ErrorCode::degenerate_cosines, "s-cov: all cosines are numerically zero");
  }
  const Eigen::VectorXd weighted = u.transpose() * v;
  return static_cast<double>(u.cols()) / v2 * weighted.squaredNorm();
}

FisherCombination fisher_combine(double p1, double p2) {
  bool clamped = false;
  auto floor_p = [&](double p) {
    if (p < kFisherFloor) {
      clamped = true;
      return kFisherFloor;
    }
    return p;
  };
  const double a = floor_p(p1);
  const double b = floor_p(p2);
  return {-2.0 * std::log(a) - 2.0 * std::log(b), clamped};
}

TestResult q_loc(const DirectionalSample& sample, const UnitVector& theta) {
  return q_loc(sample, TangentFrame(theta));
}

TestResult q_loc(const DirectionalSample& sample, const TangentFrame& frame) {
  const SignsCosines sc = signs(sample, frame, Method::loc);
  return make_result(Method::loc, loc_statistic(sc.u), df_loc(sample.p()), sample, frame.theta(),
                     "specified");
}

TestResult q_sc(const DirectionalSample& sample, const UnitVector& theta) {
  return q_sc(sample, TangentFrame(theta));
}

TestResult q_sc(const DirectionalSample& sample, const TangentFrame& frame) {
  const SignsCosines sc = signs(sample, frame, Method::sc);
  return make_result(Method::sc, sc_statistic(sc.u), df_sc(sample.p()), sample, frame.theta(),
                     "specified");
}

TestResult q_hyb(const DirectionalSample& sample, const UnitVector& theta) {
  return q_hyb(sample, TangentFrame(theta));
}

TestResult q_hyb(const DirectionalSample& sample, const TangentFrame& frame) {
  return sum_result(Method::hyb, q_loc(sample, frame), q_sc(sample, frame));
}

TestResult q_hyb_fisher(const DirectionalSample& sample, const UnitVector& theta) {
  return q_hyb_fisher(sample, TangentFrame(theta));
}

TestResult q_hyb_fisher(const DirectionalSample& sample, const TangentFrame& frame) {
  return fisher_result(Method::hyb_fisher, q_loc(sample, frame), q_sc(sample, frame));
}

TestResult q_cov(const DirectionalSample& sample, const UnitVector& theta) {
  return q_cov(sample, TangentFrame(theta));
}

TestResult q_cov(const DirectionalSample& sample, const TangentFrame& frame) {
  const SignsCosines sc = signs(sample, frame, Method::cov);
  return make_result(Method::cov, cov_statistic(sc.v, sc.u), df_loc(sample.p()), sample,
                     frame.theta(), "specified");
}

TestResult q_sc_unspecified(const DirectionalSample& sample, Estimator estimator) {
  return q_sc_unspecified(sample, estimate_theta(sample, estimator));
}

TestResult q_sc_unspecified(const DirectionalSample& sample, const ThetaEstimate& theta_hat) {
  const SignsCosines sc = signs(sample, TangentFrame(theta_hat.theta), Method::sc_unspec);
  return make_result(Method::sc_unspec, sc_statistic(sc.u), df_sc(sample.p()), sample,
                     theta_hat.theta, to_string(theta_hat.estimator));
}

UnspecifiedLocStats unspecified_loc_stats(const Eigen::VectorXd& v, const Eigen::MatrixXd& u) {
  const Eigen::Index n = v.size();
  if (n < 1 || u.rows() != n) {
    throw Error(ErrorCode::invalid_dimension, "unspecified_loc_stats: cosines and signs disagree");
  }
  const double p = static_cast<double>(u.cols()) + 1.0;
  Eigen::VectorXd root(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double one_minus = (1.0 - v[i]) * (1.0 + v[i]);
    if (!(one_minus > kPoleTolerance)) {
      throw Error(ErrorCode::near_pole, "unspecified_loc_stats: observation " + std::to_string(i) +
                                            " lies at a pole of theta-hat");
    }
    root[i] = std::sqrt(one_minus);
  }
  const double sum_v = v.sum();
  if (!(std::abs(sum_v) > 1e-10)) {
    throw Error(ErrorCode::undefined_d_hat,
                "u-loc: sum of cosines is numerically zero (axial-looking data)");
  }
  UnspecifiedLocStats s;
  s.d_hat = (p - 2.0) * v.cwiseQuotient(root).sum() / ((p - 1.0) * sum_v);
  s.e_hat = root.mean();
  s.f_hat = v.squaredNorm() / static_cast<double>(n);
  const Eigen::VectorXd weights = (1.0 - s.d_hat * root.array()).matrix();
  s.delta_hat = u.transpose() * weights / std::sqrt(static_cast<double>(n));
  s.gamma_hat_scalar =
      (1.0 - 2.0 * s.d_hat * s.e_hat + s.d_hat * s.d_hat * (1.0 - s.f_hat)) / (p - 1.0);
  return s;
}

UnspecifiedLocStats unspecified_loc_stats(const DirectionalSample& sample,
                                          const UnitVector& theta_hat) {
  const SignsCosines sc = signs(sample, TangentFrame(theta_hat), Method::loc_vmf_unspec);
  return unspecified_loc_stats(sc.v, sc.u);
}

TestResult q_loc_vmf(const DirectionalSample& sample, Estimator estimator) {
  return q_loc_vmf(sample, estimate_theta(sample, estimator));
}

TestResult q_loc_vmf(const DirectionalSample& sample, const ThetaEstimate& theta_hat) {
  const UnspecifiedLocStats s = unspecified_loc_stats(sample, theta_hat.theta);
  const double q = efficient_quadratic_form(s.delta_hat, s.gamma_hat_scalar);
  return make_result(Method::loc_vmf_unspec, q, df_loc(sample.p()), sample, theta_hat.theta,
                     to_string(theta_hat.estimator));
}

TestResult q_hyb_vmf(const DirectionalSample& sample, Estimator estimator) {
  return q_hyb_vmf(sample, estimate_theta(sample, estimator));
}

TestResult q_hyb_vmf(const DirectionalSample& sample, const ThetaEstimate& theta_hat) {
  return sum_result(Method::hyb_vmf_unspec, q_loc_vmf(sample, theta_hat),
                    q_sc_unspecified(sample, theta_hat));
}

TestResult q_hyb_fisher_vmf(const DirectionalSample& sample, Estimator estimator) {
  return q_hyb_fisher_vmf(sample, estimate_theta(sample, estimator));
}

TestResult q_hyb_fisher_vmf(const DirectionalSample& sample, const ThetaEstimate& theta_hat) {
  return fisher_result(Method::hyb_fisher_unspec, q_loc_vmf(sample, theta_hat),
                       q_sc_unspecified(sample, theta_hat));
}

TestResult high_dim_standardize(const TestResult& result) {
  const double p = result.p;
  double center = 0.0;
  double scale = 0.0;
  switch (result.method) {
    case Method::loc:
      center = p - 1.0;
      scale = std::sqrt(2.0 * (p - 1.0));
      break;
    case Method::sc:
      center = 0.5 * (p - 2.0) * (p + 1.0);
      scale = std::sqrt((p - 2.0) * (p + 1.0));
      break;
    case Method::hyb:
      center = 0.5 * (p * (p + 1.0) - 4.0);
      scale = std::sqrt(p * (p + 1.0) - 4.0);
      break;
    default:
      throw Error(ErrorCode::unsupported_method,
                  "high_dim_standardize: only s-loc, s-sc and s-hyb have a normal limit");
  }
  if (!result.df) {
    throw Error(ErrorCode::unsupported_method, "high_dim_standardize: result is already standardized");
  }
  TestResult z = result;
  z.statistic = (result.statistic - center) / scale;
  z.df.reset();
  z.p_value = numerics::normal_sf(z.statistic);
  return z;
}

ScoreFunctionals score_functionals(const Eigen::VectorXd& v, const AngularFunction& f, int p) {
  const Eigen::Index n = v.size();
  if (n < 1) throw Error(ErrorCode::insufficient_data, "score_functionals: empty sample");
  ScoreFunctionals s;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double one_minus = (1.0 - v[i]) * (1.0 + v[i]);
    if (!(one_minus > kPoleTolerance)) {
      throw Error(ErrorCode::near_pole, "score_functionals: observation " + std::to_string(i) +
                                            " lies at a pole of theta-hat");
    }
    const double root = std::sqrt(one_minus);
    const double phi = f.log_deriv(v[i]);
    s.i_hat += v[i] / root;
    s.j_hat += (p - 1.0) * phi * v[i] - f.log_deriv_prime(v[i]) * one_minus;
    s.h_hat += phi * root;
    s.k_hat += phi * phi * one_minus;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  s.i_hat *= (p - 2.0) * inv_n;
  s.j_hat *= inv_n;
  s.h_hat *= inv_n;
  s.k_hat *= inv_n;
  return s;
}

TestResult efficient_score_loc(const DirectionalSample& sample, const ThetaEstimate& theta_hat,
                               const AngularFunction& f) {
  const SignsCosines sc = signs(sample, TangentFrame(theta_hat.theta), Method::loc_score_unspec);
  const int p = sample.p();
  const ScoreFunctionals s = score_functionals(sc.v, f, p);
  if (!(std::abs(s.j_hat) > 1e-12)) {
    throw Error(ErrorCode::degenerate_cross_information,
                "u-locf: estimated cross-information J(f;g) is numerically zero");
  }
  const double ratio = s.i_hat / s.j_hat;
  Eigen::VectorXd weights(sc.n());
  for (int i = 0; i < sc.n(); ++i) {
    const double root = std::sqrt((1.0 - sc.v[i]) * (1.0 + sc.v[i]));
    weights[i] = 1.0 - ratio * f.log_deriv(sc.v[i]) * root;
  }
  const Eigen::VectorXd delta = sc.u.transpose() * weights / std::sqrt(static_cast<double>(sc.n()));
  const double gamma =
      (1.0 - 2.0 * ratio * s.h_hat + ratio * ratio * s.k_hat) / (p - 1.0);
  return make_result(Method::loc_score_unspec, efficient_quadratic_form(delta, gamma), df_loc(p),
                     sample, theta_hat.theta, to_string(theta_hat.estimator));
}

TestResult run_method(Method m, const DirectionalSample& sample, const UnitVector* theta,
                      Estimator estimator, const AngularFunction* f) {
  if (!is_unspecified(m)) {
    if (!theta) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(label(m)) + ": a specified-theta test needs theta");
    }
    switch (m) {
      case Method::loc: return q_loc(sample, *theta);
      case Method::sc: return q_sc(sample, *theta);
      case Method::hyb: return q_hyb(sample, *theta);
      case Method::hyb_fisher: return q_hyb_fisher(sample, *theta);
      case Method::cov: return q_cov(sample, *theta);
      default: break;
    }
  }
  const ThetaEstimate est = estimate_theta(sample, estimator);
  switch (m) {
    case Method::loc_vmf_unspec: return q_loc_vmf(sample, est);
    case Method::sc_unspec: return q_sc_unspecified(sample, est);
    case Method::hyb_vmf_unspec: return q_hyb_vmf(sample, est);
    case Method::hyb_fisher_unspec: return q_hyb_fisher_vmf(sample, est);
    case Method::loc_score_unspec: {
      const AngularFunction fallback = AngularFunction::vmf(1.0);
      return efficient_score_loc(sample, est, f ? *f : fallback);
    }
    default: break;
  }
  throw Error(ErrorCode::unsupported_method, "run_method: unhandled method");
}

}  // namespace rotsym
