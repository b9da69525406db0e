#include "rotsym/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "rotsym/error.hpp"
#include "rotsym/numerics.hpp"

namespace rotsym {
namespace {

constexpr int kEnvelopeGrid = 512;
constexpr int kMaxRejections = 10'000'000;

void require_p(int p, const char* where) {
  if (p < 2) {
    throw Error(ErrorCode::invalid_dimension,
                std::string(where) + ": dimension must be >= 2, got " + std::to_string(p));
  }
}

double sample_beta_symmetric(double a, Rng& rng) {
  if (a == 1.0) return rng.uniform01();
  std::gamma_distribution<double> gamma(a, 1.0);
  const double x = gamma(rng);
  const double y = gamma(rng);
  return x / (x + y);
}

// Wood (1994): cosine of a vMF(kappa) draw on S^{m-1}.
double sample_vmf_cosine(int m, double kappa, Rng& rng) {
  const double dim1 = m - 1.0;
  const double b = dim1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dim1 * dim1));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + dim1 * std::log(1.0 - x0 * x0);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double z = sample_beta_symmetric(0.5 * dim1, rng);
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform01();
    if (kappa * w + dim1 * std::log(1.0 - x0 * w) - c >= std::log(u)) return w;
  }
  throw Error(ErrorCode::domain, "sample_vmf: rejection sampler did not terminate");
}

double golden_max(const AngularFunction& g, double a, double b) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  for (int i = 0; i < 80 && b - a > 1e-14; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = g(x1);
    }
  }
  return std::max(f1, f2);
}

double envelope_constant(const AngularFunction& g) {
  double best = -1.0;
  int best_i = 0;
  for (int i = 0; i < kEnvelopeGrid; ++i) {
    const double t = -1.0 + 2.0 * i / (kEnvelopeGrid - 1.0);
    const double value = g(t);
    if (!std::isfinite(value) || value < 0.0) {
      throw Error(ErrorCode::unsupported_angular_function,
                  "sample_cosine: g(" + g.label() + ") is negative or unbounded on [-1, 1]");
    }
    if (value > best) {
      best = value;
      best_i = i;
    }
  }
  const double h = 2.0 / (kEnvelopeGrid - 1.0);
  const double lo = std::max(-1.0, -1.0 + h * (best_i - 1));
  const double hi = std::min(1.0, -1.0 + h * (best_i + 1));
  const double refined = golden_max(g, lo, hi);
  if (!std::isfinite(refined)) {
    throw Error(ErrorCode::unsupported_angular_function,
                "sample_cosine: g(" + g.label() + ") is unbounded near its maximum");
  }
  // Small safety margin against a maximum missed between grid points.
  return std::max(best, refined) * (1.0 + 1e-9);
}

Eigen::VectorXd vmf_draw(const TangentFrame& frame, double kappa, Rng& rng) {
  const int d = frame.p();
  const double w = sample_vmf_cosine(d, kappa, rng);
  const Eigen::VectorXd u = sample_uniform_sphere(d - 1, rng);
  Eigen::VectorXd x = reconstruct(w, u, frame);
  return x / x.norm();
}

DirectionalSample stack(std::size_t n, int p, const std::function<Eigen::VectorXd()>& draw) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), p);
  for (std::size_t i = 0; i < n; ++i) rows.row(static_cast<Eigen::Index>(i)) = draw().transpose();
  return DirectionalSample(std::move(rows));
}

}  // namespace

AngularFunction::AngularFunction(std::string label, Fn g, Fn log_deriv, Fn log_deriv_prime)
    : label_(std::move(label)),
      g_(std::move(g)),
      phi_(std::move(log_deriv)),
      phi_prime_(std::move(log_deriv_prime)) {
  if (!g_) throw Error(ErrorCode::invalid_argument, "AngularFunction: g is empty");
}

AngularFunction AngularFunction::vmf(double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::invalid_argument, "AngularFunction::vmf: concentration must be >= 0");
  }
  AngularFunction g(
      "vmf(" + std::to_string(eta) + ")", [eta](double t) { return std::exp(eta * t); },
      [eta](double) { return eta; }, [](double) { return 0.0; });
  g.vmf_eta_ = eta;
  return g;
}

AngularFunction AngularFunction::uniform() { return vmf(0.0); }

AngularFunction AngularFunction::arcsin_exp(double kappa) {
  return AngularFunction(
      "arcsin_exp(" + std::to_string(kappa) + ")",
      [kappa](double t) { return std::exp(kappa * std::asin(std::clamp(t, -1.0, 1.0))); },
      [kappa](double t) { return kappa / std::sqrt(1.0 - t * t); },
      [kappa](double t) { return kappa * t / std::pow(1.0 - t * t, 1.5); });
}

AngularFunction angular_function_from_string(const std::string& spec) {
  std::string text = spec;
  for (char& ch : text) {
    if (ch == '(' || ch == ')' || ch == ',' || ch == ':') ch = ' ';
  }
  std::istringstream in(text);
  std::string name;
  in >> name;
  double param = 0.0;
  const bool has_param = static_cast<bool>(in >> param);
  in.clear();
  std::string rest;
  if (in >> rest) {
    throw Error(ErrorCode::invalid_argument, "angular function: trailing text in '" + spec + "'");
  }
  if (name == "uniform" && !has_param) return AngularFunction::uniform();
  if (name == "vmf" && has_param) return AngularFunction::vmf(param);
  if (name == "arcsin_exp" && has_param) return AngularFunction::arcsin_exp(param);
  throw Error(ErrorCode::invalid_argument,
              "angular function: expected 'vmf <eta>', 'uniform' or 'arcsin_exp <kappa>', got '" +
                  spec + "'");
}

double AngularFunction::log_value(double t) const {
  if (vmf_eta_) return *vmf_eta_ * t;
  return std::log(g_(t));
}

double AngularFunction::log_deriv(double t) const {
  if (!phi_) {
    throw Error(ErrorCode::unsupported_angular_function,
                "angular function " + label_ + " has no registered score");
  }
  return phi_(t);
}

double AngularFunction::log_deriv_prime(double t) const {
  if (!phi_prime_) {
    throw Error(ErrorCode::unsupported_angular_function,
                "angular function " + label_ + " has no registered score derivative");
  }
  return phi_prime_(t);
}

double log_vmf_norm_const(int p, double kappa) {
  require_p(p, "vmf_norm_const");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::domain, "vmf_norm_const: kappa must be finite and >= 0");
  }
  if (kappa == 0.0) return -std::log(numerics::surface_area(p));
  const double nu = 0.5 * (p - 2);
  return nu * std::log(kappa) - 0.5 * p * std::log(2.0 * std::numbers::pi) -
         numerics::log_bessel_i(nu, kappa);
}

double vmf_norm_const(int p, double kappa) { return std::exp(log_vmf_norm_const(p, kappa)); }

double log_normalizing_constant(const AngularFunction& g, int p) {
  require_p(p, "normalizing_constant");
  if (auto eta = g.vmf_concentration()) return log_vmf_norm_const(p, *eta);

  const auto& rule = numerics::default_rule();
  double shift = -std::numeric_limits<double>::infinity();
  for (double node : rule.nodes) {
    shift = std::max(shift, g.log_value(std::cos(0.5 * std::numbers::pi * (node + 1.0))));
  }
  if (!std::isfinite(shift)) {
    throw Error(ErrorCode::normalization,
                "normalizing_constant: g(" + g.label() + ") vanishes or is not finite");
  }
  const double mass = numerics::integrate_polar(
      [&](double t, double s) { return std::pow(s, p - 3) * std::exp(g.log_value(t) - shift); },
      rule);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::normalization,
                "normalizing_constant: g(" + g.label() + ") has no finite positive mass");
  }
  return -(std::log(numerics::surface_area(p - 1)) + shift + std::log(mass));
}

double normalizing_constant(const AngularFunction& g, int p) {
  return std::exp(log_normalizing_constant(g, p));
}

CosineDistribution::CosineDistribution(AngularFunction g, int p)
    : g_(std::move(g)), p_(p), log_c_(log_normalizing_constant(g_, p)) {
  log_omega_ = std::log(numerics::surface_area(p - 1));
  if (!g_.vmf_concentration()) envelope_ = envelope_constant(g_);
}

double CosineDistribution::c() const { return std::exp(log_c_); }

double CosineDistribution::density(double v) const {
  if (!(std::abs(v) <= 1.0)) {
    throw Error(ErrorCode::domain, "cosine density: |v| must not exceed 1");
  }
  const double one_minus = (1.0 - v) * (1.0 + v);
  double log_weight = 0.0;
  if (p_ != 3) {
    if (one_minus == 0.0) return p_ > 3 ? 0.0 : std::numeric_limits<double>::infinity();
    log_weight = 0.5 * (p_ - 3) * std::log(one_minus);
  }
  return std::exp(log_omega_ + log_c_ + log_weight + g_.log_value(v));
}

double CosineDistribution::sample(Rng& rng) const {
  if (auto eta = g_.vmf_concentration()) return sample_vmf_cosine(p_, *eta, rng);
  // Envelope: the uniform-on-sphere cosine 2 Z - 1, Z ~ Beta((p-1)/2, (p-1)/2).
  const double a = 0.5 * (p_ - 1);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double v = 2.0 * sample_beta_symmetric(a, rng) - 1.0;
    if (rng.uniform01() * envelope_ <= g_(v)) return v;
  }
  throw Error(ErrorCode::unsupported_angular_function,
              "sample_cosine: acceptance rate too low for g(" + g_.label() + ")");
}

Eigen::VectorXd CosineDistribution::sample(std::size_t n, Rng& rng) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (auto& v : out) v = sample(rng);
  return out;
}

double cosine_density(const AngularFunction& g, int p, double v) {
  return CosineDistribution(g, p).density(v);
}

Eigen::VectorXd sample_cosine(const AngularFunction& g, int p, std::size_t n, Rng& rng) {
  return CosineDistribution(g, p).sample(n, rng);
}

Eigen::VectorXd sample_uniform_sphere(int d, Rng& rng) {
  if (d < 1) throw Error(ErrorCode::invalid_dimension, "sample_uniform_sphere: d must be >= 1");
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(d);
  double norm = 0.0;
  do {
    for (auto& x : z) x = normal(rng);
    norm = z.norm();
  } while (!(norm > 0.0));
  return z / norm;
}

Eigen::VectorXd sample_vmf(const UnitVector& mu, double kappa, Rng& rng) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::invalid_argument, "sample_vmf: kappa must be finite and >= 0");
  }
  return vmf_draw(TangentFrame(mu), kappa, rng);
}

DirectionalSample sample_vmf(const UnitVector& mu, double kappa, std::size_t n, Rng& rng) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::invalid_argument, "sample_vmf: kappa must be finite and >= 0");
  }
  const TangentFrame frame(mu);
  return stack(n, mu.dim(), [&] { return vmf_draw(frame, kappa, rng); });
}

ShapeMatrix::ShapeMatrix(const Eigen::MatrixXd& lambda) : lambda_(lambda) {
  const Eigen::Index d = lambda_.rows();
  if (d < 1 || lambda_.cols() != d) {
    throw Error(ErrorCode::invalid_shape, "ShapeMatrix: must be a nonempty square matrix");
  }
  if (!lambda_.allFinite()) throw Error(ErrorCode::invalid_shape, "ShapeMatrix: non-finite entry");
  if ((lambda_ - lambda_.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::invalid_shape, "ShapeMatrix: not symmetric");
  }
  lambda_ = 0.5 * (lambda_ + lambda_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lambda_, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorCode::invalid_shape, "ShapeMatrix: not positive definite");
  }
  const double trace = lambda_.trace();
  if (std::abs(trace - static_cast<double>(d)) > 1e-10) {
    lambda_ *= static_cast<double>(d) / trace;
    rescaled_ = true;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(lambda_);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::invalid_shape, "ShapeMatrix: Cholesky factorization failed");
  }
  chol_ = llt.matrixL();
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

double ShapeMatrix::inverse_quadratic(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>().solve(u);
  return y.squaredNorm();
}

Eigen::VectorXd sample_acg(const ShapeMatrix& lambda, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(lambda.dim());
  Eigen::VectorXd y;
  double norm = 0.0;
  do {
    for (auto& x : z) x = normal(rng);
    y = lambda.cholesky_factor().triangularView<Eigen::Lower>() * z;
    norm = y.norm();
  } while (!(norm > 0.0));
  return y / norm;
}

DirectionalSample sample_acg(const ShapeMatrix& lambda, std::size_t n, Rng& rng) {
  if (lambda.dim() < 2) {
    throw Error(ErrorCode::invalid_dimension, "sample_acg: sphere dimension must be >= 2");
  }
  return stack(n, lambda.dim(), [&] { return sample_acg(lambda, rng); });
}

double acg_density(const Eigen::VectorXd& u, const ShapeMatrix& lambda) {
  const int d = lambda.dim();
  if (u.size() != d) throw Error(ErrorCode::invalid_dimension, "acg_density: dimension mismatch");
  const double log_c = -std::log(numerics::surface_area(d)) - 0.5 * lambda.log_det();
  return std::exp(log_c - 0.5 * d * std::log(lambda.inverse_quadratic(u)));
}

RotationallySymmetric::RotationallySymmetric(const UnitVector& theta, AngularFunction g)
    : RotationallySymmetric(TangentFrame(theta), std::move(g)) {}

RotationallySymmetric::RotationallySymmetric(TangentFrame frame, AngularFunction g)
    : frame_(std::move(frame)), cosine_(std::move(g), frame_.p()) {}

double RotationallySymmetric::density(const Eigen::VectorXd& x) const {
  const double v = std::clamp(x.dot(frame_.theta().coords()), -1.0, 1.0);
  return std::exp(cosine_.log_c() + cosine_.g().log_value(v));
}

Eigen::VectorXd RotationallySymmetric::sample(Rng& rng) const {
  const double v = cosine_.sample(rng);
  Eigen::VectorXd x = reconstruct(v, sample_uniform_sphere(frame_.p() - 1, rng), frame_);
  return x / x.norm();
}

DirectionalSample RotationallySymmetric::sample(std::size_t n, Rng& rng) const {
  return stack(n, frame_.p(), [&] { return sample(rng); });
}

TangentElliptical::TangentElliptical(const UnitVector& theta, AngularFunction g,
                                     ShapeMatrix lambda)
    : TangentElliptical(TangentFrame(theta), std::move(g), std::move(lambda)) {}

TangentElliptical::TangentElliptical(TangentFrame frame, AngularFunction g, ShapeMatrix lambda)
    : frame_(std::move(frame)), cosine_(std::move(g), frame_.p()), lambda_(std::move(lambda)) {
  if (lambda_.dim() != frame_.p() - 1) {
    throw Error(ErrorCode::invalid_dimension, "TangentElliptical: shape must be (p-1) x (p-1)");
  }
}

double TangentElliptical::density(const Eigen::VectorXd& x) const {
  const SignCosine sc = decompose(x, frame_);
  const int p = frame_.p();
  const double log_omega = std::log(numerics::surface_area(p - 1));
  const double log_acg = -log_omega - 0.5 * lambda_.log_det();
  return std::exp(log_omega + cosine_.log_c() + log_acg + cosine_.g().log_value(sc.v) -
                  0.5 * (p - 1) * std::log(lambda_.inverse_quadratic(sc.u)));
}

Eigen::VectorXd TangentElliptical::sample(Rng& rng) const {
  const double v = cosine_.sample(rng);
  Eigen::VectorXd x = reconstruct(v, sample_acg(lambda_, rng), frame_);
  return x / x.norm();
}

DirectionalSample TangentElliptical::sample(std::size_t n, Rng& rng) const {
  return stack(n, frame_.p(), [&] { return sample(rng); });
}

TangentVmf::TangentVmf(const UnitVector& theta, AngularFunction g, const UnitVector& mu,
                       double kappa)
    : TangentVmf(TangentFrame(theta), std::move(g), mu, kappa) {}

TangentVmf::TangentVmf(TangentFrame frame, AngularFunction g, const UnitVector& mu, double kappa)
    : frame_(std::move(frame)), cosine_(std::move(g), frame_.p()), mu_(mu), kappa_(kappa) {
  if (mu_.dim() != frame_.p() - 1) {
    throw Error(ErrorCode::invalid_dimension, "TangentVmf: mu must lie on S^{p-2}");
  }
  if (!(kappa_ >= 0.0) || !std::isfinite(kappa_)) {
    throw Error(ErrorCode::invalid_argument, "TangentVmf: kappa must be finite and >= 0");
  }
  log_sign_const_ = log_vmf_norm_const(frame_.p() - 1, kappa_);
}

double TangentVmf::density(const Eigen::VectorXd& x) const {
  const SignCosine sc = decompose(x, frame_);
  const double log_omega = std::log(numerics::surface_area(frame_.p() - 1));
  return std::exp(log_omega + cosine_.log_c() + log_sign_const_ +
                  cosine_.g().log_value(sc.v) + kappa_ * mu_.coords().dot(sc.u));
}

Eigen::VectorXd TangentVmf::sample(Rng& rng) const {
  const double v = cosine_.sample(rng);
  Eigen::VectorXd x = reconstruct(v, sample_vmf(mu_, kappa_, rng), frame_);
  return x / x.norm();
}

DirectionalSample TangentVmf::sample(std::size_t n, Rng& rng) const {
  return stack(n, frame_.p(), [&] { return sample(rng); });
}

DirectionalSample sample_mixture(const std::vector<std::pair<double, Sampler>>& components,
                                 std::size_t n, Rng& rng, std::vector<int>* labels) {
  if (components.empty()) throw Error(ErrorCode::config, "sample_mixture: no components");
  double total = 0.0;
  for (const auto& [w, sampler] : components) {
    if (!(w > 0.0) || !sampler) {
      throw Error(ErrorCode::config, "sample_mixture: weights must be positive");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::config, "sample_mixture: weights must sum to 1");
  }
  if (labels) labels->assign(n, 0);
  std::vector<Eigen::VectorXd> draws;
  draws.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = rng.uniform01();
    std::size_t k = 0;
    double cumulative = components[0].first;
    while (pick > cumulative && k + 1 < components.size()) cumulative += components[++k].first;
    draws.push_back(components[k].second(rng));
    if (labels) (*labels)[i] = static_cast<int>(k);
  }
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), draws.empty() ? 0 : draws[0].size());
  for (std::size_t i = 0; i < n; ++i) {
    if (draws[i].size() != rows.cols()) {
      throw Error(ErrorCode::invalid_dimension, "sample_mixture: components disagree on p");
    }
    rows.row(static_cast<Eigen::Index>(i)) = draws[i].transpose();
  }
  return DirectionalSample(std::move(rows));
}

}  // namespace rotsym
