#include "rotsym/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotsym/error.hpp"

namespace rotsym {
namespace {

void require_dim(int p, const char* where) {
  if (p < 2) {
    throw Error(ErrorCode::invalid_dimension,
                std::string(where) + ": dimension must be >= 2, got " + std::to_string(p));
  }
}

}  // namespace

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  require_dim(static_cast<int>(coords_.size()), "UnitVector");
  if (!coords_.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "UnitVector: non-finite coordinate");
  }
  const double norm = coords_.norm();
  if (std::abs(norm - 1.0) > kUnitTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "UnitVector: norm " << norm << " differs from 1";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
}

UnitVector UnitVector::normalize(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::invalid_argument, "UnitVector::normalize: zero or non-finite vector");
  }
  return UnitVector(v / norm);
}

UnitVector UnitVector::basis(int dim, int axis) {
  require_dim(dim, "UnitVector::basis");
  if (axis < 0 || axis >= dim) {
    throw Error(ErrorCode::invalid_argument, "UnitVector::basis: axis out of range");
  }
  return UnitVector(Eigen::VectorXd::Unit(dim, axis));
}

DirectionalSample::DirectionalSample(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1) {
    throw Error(ErrorCode::insufficient_data, "DirectionalSample: needs at least one row");
  }
  require_dim(static_cast<int>(rows_.cols()), "DirectionalSample");
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    const double norm = rows_.row(i).norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "DirectionalSample: row " << i << " has norm " << norm;
      throw Error(ErrorCode::invalid_argument, msg.str());
    }
  }
}

TangentFrame::TangentFrame(const UnitVector& theta) : theta_(theta) {
  const int p = theta.dim();
  const Eigen::VectorXd& t = theta.coords();
  const double sign = t[0] >= 0.0 ? 1.0 : -1.0;
  Eigen::VectorXd w = t;
  w[0] += sign;
  const double w2 = w.squaredNorm();  // = 2 (1 + |theta_1|) >= 2
  // Columns 2..p of H = I - 2 w w^T / |w|^2.
  gamma_ = -2.0 / w2 * w * w.tail(p - 1).transpose();
  gamma_.bottomRows(p - 1).diagonal().array() += 1.0;
}

TangentFrame::TangentFrame(const UnitVector& theta, Eigen::MatrixXd gamma)
    : theta_(theta), gamma_(std::move(gamma)) {
  const int p = theta.dim();
  if (gamma_.rows() != p || gamma_.cols() != p - 1) {
    throw Error(ErrorCode::invalid_dimension, "TangentFrame: gamma must be p x (p-1)");
  }
  const Eigen::MatrixXd gram = gamma_.transpose() * gamma_;
  const Eigen::MatrixXd proj = gamma_ * gamma_.transpose();
  const Eigen::MatrixXd target =
      Eigen::MatrixXd::Identity(p, p) - theta.coords() * theta.coords().transpose();
  if ((gram - Eigen::MatrixXd::Identity(p - 1, p - 1)).cwiseAbs().maxCoeff() > kUnitTolerance ||
      (proj - target).cwiseAbs().maxCoeff() > kUnitTolerance) {
    throw Error(ErrorCode::invalid_argument,
                "TangentFrame: gamma is not an orthonormal basis of theta-perp");
  }
}

TangentFrame TangentFrame::rotated_basis(const Eigen::MatrixXd& o) const {
  return TangentFrame(theta_, gamma_ * o);
}

TangentFrame tangent_frame(const UnitVector& theta) { return TangentFrame(theta); }

SignCosine decompose(const Eigen::VectorXd& x, const TangentFrame& frame) {
  if (x.size() != frame.p()) {
    throw Error(ErrorCode::invalid_dimension, "decompose: point and frame dimensions differ");
  }
  SignCosine sc;
  sc.v = x.dot(frame.theta().coords());
  Eigen::VectorXd proj = frame.gamma().transpose() * x;
  const double r = proj.norm();
  if (1.0 - sc.v * sc.v <= kPoleTolerance || !(r > 0.0)) {
    throw Error(ErrorCode::near_pole, "decompose: point lies at a pole of theta");
  }
  sc.u = proj / r;
  return sc;
}

Eigen::VectorXd reconstruct(double v, const Eigen::VectorXd& u, const TangentFrame& frame) {
  const double s = std::sqrt(std::max(0.0, 1.0 - v * v));
  return v * frame.theta().coords() + s * (frame.gamma() * u);
}

UnitVector reconstruct(const SignCosine& sc, const TangentFrame& frame) {
  if (std::abs(sc.v) > 1.0) {
    throw Error(ErrorCode::invalid_argument, "reconstruct: |v| exceeds 1");
  }
  if (sc.u.size() != frame.p() - 1) {
    throw Error(ErrorCode::invalid_dimension, "reconstruct: sign has wrong dimension");
  }
  return UnitVector::normalize(reconstruct(sc.v, sc.u, frame));
}

SignsCosines decompose(const DirectionalSample& sample, const TangentFrame& frame) {
  if (sample.p() != frame.p()) {
    throw Error(ErrorCode::invalid_dimension, "decompose: sample and frame dimensions differ");
  }
  SignsCosines out;
  out.v = sample.rows() * frame.theta().coords();
  out.u = sample.rows() * frame.gamma();
  std::vector<int> poles;
  for (int i = 0; i < sample.n(); ++i) {
    const double r = out.u.row(i).norm();
    if (1.0 - out.v[i] * out.v[i] <= kPoleTolerance || !(r > 0.0)) {
      poles.push_back(i);
      continue;
    }
    out.u.row(i) /= r;
  }
  if (!poles.empty()) {
    std::string msg = "observations at a pole of theta (sign undefined), rows:";
    for (std::size_t k = 0; k < poles.size() && k < 20; ++k) msg += " " + std::to_string(poles[k]);
    if (poles.size() > 20) msg += " ... (" + std::to_string(poles.size()) + " total)";
    throw Error(ErrorCode::near_pole, msg);
  }
  return out;
}

UnitVector spherical_mean(const DirectionalSample& sample) {
  const Eigen::VectorXd mean = sample.rows().colwise().mean().transpose();
  if (mean.norm() <= 1e-12) {
    throw Error(ErrorCode::undefined_mean, "spherical_mean: resultant is numerically zero");
  }
  return UnitVector::normalize(mean);
}

UnitVector principal_axis(const DirectionalSample& sample) {
  const int n = sample.n();
  const int p = sample.p();
  if (n < p) {
    throw Error(ErrorCode::insufficient_data, "principal_axis: needs n >= p observations");
  }
  const Eigen::MatrixXd centered = sample.rows().rowwise() - sample.rows().colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd& vals = eig.eigenvalues();  // ascending
  if (vals[p - 1] - vals[p - 2] <= 1e-10) {
    throw Error(ErrorCode::ambiguous_axis, "principal_axis: leading eigenvalue is not simple");
  }
  Eigen::VectorXd axis = eig.eigenvectors().col(p - 1);
  for (int i = 0; i < p; ++i) {
    if (std::abs(axis[i]) > 1e-12) {
      if (axis[i] < 0.0) axis = -axis;
      break;
    }
  }
  return UnitVector::normalize(axis);
}

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::spherical_mean: return "spherical_mean";
    case Estimator::principal_axis: return "principal_axis";
    case Estimator::fixed: return "fixed";
  }
  return "unknown";
}

ThetaEstimate estimate_theta(const DirectionalSample& sample, Estimator estimator) {
  switch (estimator) {
    case Estimator::spherical_mean: return {spherical_mean(sample), estimator};
    case Estimator::principal_axis: return {principal_axis(sample), estimator};
    case Estimator::fixed: break;
  }
  throw Error(ErrorCode::invalid_argument, "estimate_theta: a fixed estimate needs a theta");
}

ThetaEstimate fixed_theta(const UnitVector& theta) { return {theta, Estimator::fixed}; }

double angle_between(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  // atan2 form stays accurate for nearly parallel vectors.
  const double cross = (a * b.norm() - b * a.norm()).norm();
  const double along = (a * b.norm() + b * a.norm()).norm();
  return 2.0 * std::atan2(cross, along);
}

}  // namespace rotsym
