#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotsym/geometry.hpp"
#include "rotsym/rng.hpp"

namespace rotsym {

/// The angular function g on [-1, 1] of a rotationally symmetric law, with its
/// optional score phi_g = g'/g and the score's derivative.
class AngularFunction {
 public:
  using Fn = std::function<double(double)>;

  AngularFunction(std::string label, Fn g, Fn log_deriv = {}, Fn log_deriv_prime = {});

  /// g(t) = exp(eta t).
  static AngularFunction vmf(double eta);
  static AngularFunction uniform();
  /// g(t) = exp(kappa asin t); its score kappa / sqrt(1 - t^2) blows up at +-1.
  static AngularFunction arcsin_exp(double kappa);

  double operator()(double t) const { return g_(t); }
  /// log g(t); exact (no overflow) for the vMF family.
  double log_value(double t) const;

  bool has_log_deriv() const { return static_cast<bool>(phi_); }
  bool has_log_deriv_prime() const { return static_cast<bool>(phi_prime_); }
  double log_deriv(double t) const;
  double log_deriv_prime(double t) const;

  const std::string& label() const { return label_; }
  /// Set for exp(eta t); enables closed-form constants and the Wood sampler.
  std::optional<double> vmf_concentration() const { return vmf_eta_; }

 private:
  std::string label_;
  Fn g_;
  Fn phi_;
  Fn phi_prime_;
  std::optional<double> vmf_eta_;
};

/// Parses "vmf 2", "vmf(2)", "uniform" or "arcsin_exp 1".
AngularFunction angular_function_from_string(const std::string& spec);

/// c^M_{p,kappa}: density constant of vMF on S^{p-1}; kappa = 0 gives the
/// uniform constant.
double vmf_norm_const(int p, double kappa);
double log_vmf_norm_const(int p, double kappa);

/// c_{p,g} making c g(x^T theta) a density on S^{p-1} (closed form for vMF,
/// quadrature otherwise).
double normalizing_constant(const AngularFunction& g, int p);
double log_normalizing_constant(const AngularFunction& g, int p);

/// The law of V = X^T theta on [-1, 1] for a given (g, p). Holds c_{p,g} and
/// the rejection envelope so repeated densities and draws reuse them.
class CosineDistribution {
 public:
  CosineDistribution(AngularFunction g, int p);

  int p() const { return p_; }
  const AngularFunction& g() const { return g_; }
  double log_c() const { return log_c_; }
  double c() const;

  /// tilde g_p(v) = omega_{p-1} c (1 - v^2)^{(p-3)/2} g(v).
  double density(double v) const;

  double sample(Rng& rng) const;
  Eigen::VectorXd sample(std::size_t n, Rng& rng) const;

 private:
  AngularFunction g_;
  int p_;
  double log_c_;
  double log_omega_;
  double envelope_ = 0.0;  // sup g, generic rejection only
};

double cosine_density(const AngularFunction& g, int p, double v);
Eigen::VectorXd sample_cosine(const AngularFunction& g, int p, std::size_t n, Rng& rng);

/// Uniform draw on S^{d-1}.
Eigen::VectorXd sample_uniform_sphere(int d, Rng& rng);

/// vMF(mu, kappa) on S^{d-1}, d = mu.dim(): Wood's cosine rejection, a uniform
/// tangent sign, and the tangent-normal reconstruction.
Eigen::VectorXd sample_vmf(const UnitVector& mu, double kappa, Rng& rng);
DirectionalSample sample_vmf(const UnitVector& mu, double kappa, std::size_t n, Rng& rng);

/// Scatter for the angular central Gaussian, kept at trace = dimension.
class ShapeMatrix {
 public:
  /// Accepts any symmetric positive-definite matrix; rescales it to trace
  /// dim when needed (see rescaled()).
  explicit ShapeMatrix(const Eigen::MatrixXd& lambda);

  static ShapeMatrix identity(int dim) { return ShapeMatrix(Eigen::MatrixXd::Identity(dim, dim)); }

  const Eigen::MatrixXd& matrix() const { return lambda_; }
  int dim() const { return static_cast<int>(lambda_.rows()); }
  bool rescaled() const { return rescaled_; }
  double log_det() const { return log_det_; }
  const Eigen::MatrixXd& cholesky_factor() const { return chol_; }
  /// u^T Lambda^{-1} u.
  double inverse_quadratic(const Eigen::VectorXd& u) const;

 private:
  Eigen::MatrixXd lambda_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
  bool rescaled_ = false;
};

/// ACG draw on S^{d-1}, d = lambda.dim(): Cholesky(Lambda) z, projected radially.
Eigen::VectorXd sample_acg(const ShapeMatrix& lambda, Rng& rng);
DirectionalSample sample_acg(const ShapeMatrix& lambda, std::size_t n, Rng& rng);
/// c^A (u^T Lambda^{-1} u)^{-d/2} with c^A = 1 / (omega_d sqrt(det Lambda)).
double acg_density(const Eigen::VectorXd& u, const ShapeMatrix& lambda);

/// Law with density c_{p,g} g(x^T theta).
class RotationallySymmetric {
 public:
  RotationallySymmetric(const UnitVector& theta, AngularFunction g);
  RotationallySymmetric(TangentFrame frame, AngularFunction g);

  const TangentFrame& frame() const { return frame_; }
  const CosineDistribution& cosine() const { return cosine_; }

  double density(const Eigen::VectorXd& x) const;
  Eigen::VectorXd sample(Rng& rng) const;
  DirectionalSample sample(std::size_t n, Rng& rng) const;

 private:
  TangentFrame frame_;
  CosineDistribution cosine_;
};

/// Tangent elliptical law: cosine from g, sign ACG(Lambda) in the frame's
/// tangent coordinates. The density depends on the frame through u, so the
/// frame is part of the parameter.
class TangentElliptical {
 public:
  TangentElliptical(const UnitVector& theta, AngularFunction g, ShapeMatrix lambda);
  TangentElliptical(TangentFrame frame, AngularFunction g, ShapeMatrix lambda);

  const TangentFrame& frame() const { return frame_; }
  const ShapeMatrix& shape() const { return lambda_; }

  /// Throws near_pole at +-theta.
  double density(const Eigen::VectorXd& x) const;
  Eigen::VectorXd sample(Rng& rng) const;
  DirectionalSample sample(std::size_t n, Rng& rng) const;

 private:
  TangentFrame frame_;
  CosineDistribution cosine_;
  ShapeMatrix lambda_;
};

/// Tangent vMF law: cosine from g, sign vMF(mu, kappa) on S^{p-2}.
class TangentVmf {
 public:
  TangentVmf(const UnitVector& theta, AngularFunction g, const UnitVector& mu, double kappa);
  TangentVmf(TangentFrame frame, AngularFunction g, const UnitVector& mu, double kappa);

  const TangentFrame& frame() const { return frame_; }
  const UnitVector& mu() const { return mu_; }
  double kappa() const { return kappa_; }

  double density(const Eigen::VectorXd& x) const;
  Eigen::VectorXd sample(Rng& rng) const;
  DirectionalSample sample(std::size_t n, Rng& rng) const;

 private:
  TangentFrame frame_;
  CosineDistribution cosine_;
  UnitVector mu_;
  double kappa_;
  double log_sign_const_;
};

/// Single-draw sampler, type-erased so mixtures can combine families.
using Sampler = std::function<Eigen::VectorXd(Rng&)>;

template <class Law>
Sampler make_sampler(Law law) {
  return [law = std::move(law)](Rng& rng) { return law.sample(rng); };
}

/// Each draw picks component k with probability w_k. Weights must be positive
/// and sum to 1 within 1e-12. When labels is non-null it receives the chosen
/// component of every row.
DirectionalSample sample_mixture(const std::vector<std::pair<double, Sampler>>& components,
                                 std::size_t n, Rng& rng, std::vector<int>* labels = nullptr);

}  // namespace rotsym
