#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

namespace rotsym {

inline constexpr double kUnitTolerance = 1e-10;
/// Observations with 1 - v^2 at or below this have no usable sign.
inline constexpr double kPoleTolerance = 1e-12;

/// A point on S^{d-1}, d >= 2. Norm is checked to kUnitTolerance.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd coords);

  /// Rescales a nonzero vector onto the sphere.
  static UnitVector normalize(const Eigen::VectorXd& v);
  /// Canonical basis vector e_{axis+1} in R^dim.
  static UnitVector basis(int dim, int axis);

  const Eigen::VectorXd& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }

  operator const Eigen::VectorXd&() const { return coords_; }

 private:
  Eigen::VectorXd coords_;
};

/// n points on S^{p-1}, stored row-wise.
class DirectionalSample {
 public:
  explicit DirectionalSample(Eigen::MatrixXd rows);

  int n() const { return static_cast<int>(rows_.rows()); }
  int p() const { return static_cast<int>(rows_.cols()); }
  const Eigen::MatrixXd& rows() const { return rows_; }
  Eigen::VectorXd row(int i) const { return rows_.row(i).transpose(); }

 private:
  Eigen::MatrixXd rows_;
};

/// A location theta and an orthonormal basis gamma (p x (p-1)) of its
/// orthogonal complement.
class TangentFrame {
 public:
  /// Householder frame: the reflector with w = theta + sign(theta_1) e_1 maps
  /// e_1 to -sign(theta_1) theta; its last p-1 columns span theta-perp.
  explicit TangentFrame(const UnitVector& theta);

  /// Frame with a caller-supplied basis; both frame identities are checked.
  TangentFrame(const UnitVector& theta, Eigen::MatrixXd gamma);

  const UnitVector& theta() const { return theta_; }
  const Eigen::MatrixXd& gamma() const { return gamma_; }
  int p() const { return theta_.dim(); }

  /// Same theta, basis gamma * o for an orthogonal (p-1) x (p-1) matrix o.
  TangentFrame rotated_basis(const Eigen::MatrixXd& o) const;

 private:
  UnitVector theta_;
  Eigen::MatrixXd gamma_;
};

TangentFrame tangent_frame(const UnitVector& theta);

struct SignCosine {
  double v = 0.0;
  Eigen::VectorXd u;
};

SignCosine decompose(const Eigen::VectorXd& x, const TangentFrame& frame);
Eigen::VectorXd reconstruct(double v, const Eigen::VectorXd& u, const TangentFrame& frame);
UnitVector reconstruct(const SignCosine& sc, const TangentFrame& frame);

/// Cosines and signs of a whole sample: v has length n, u is n x (p-1).
struct SignsCosines {
  Eigen::VectorXd v;
  Eigen::MatrixXd u;

  int n() const { return static_cast<int>(v.size()); }
  int p() const { return static_cast<int>(u.cols()) + 1; }
};

/// Decomposes every row; throws near_pole naming every offending row index.
SignsCosines decompose(const DirectionalSample& sample, const TangentFrame& frame);

UnitVector spherical_mean(const DirectionalSample& sample);

/// Leading eigenvector of the sample covariance, sign fixed so the first
/// nonzero coordinate is positive.
UnitVector principal_axis(const DirectionalSample& sample);

enum class Estimator { spherical_mean, principal_axis, fixed };

std::string_view to_string(Estimator e);

struct ThetaEstimate {
  UnitVector theta;
  Estimator estimator;
};

ThetaEstimate estimate_theta(const DirectionalSample& sample, Estimator estimator);

/// Wraps a known location as a degenerate estimate.
ThetaEstimate fixed_theta(const UnitVector& theta);

/// Angle in radians between two unit vectors.
double angle_between(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace rotsym
