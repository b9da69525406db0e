#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "rotsym/distributions.hpp"
#include "rotsym/error.hpp"
#include "rotsym/geometry.hpp"
#include "rotsym/rng.hpp"

using namespace rotsym;

namespace {

Eigen::MatrixXd random_orthogonal(int d, Rng& rng) {
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) a.col(i) = sample_uniform_sphere(d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

void expect_valid_frame(const TangentFrame& f) {
  const int p = f.p();
  const Eigen::MatrixXd& g = f.gamma();
  EXPECT_LT((g.transpose() * g - Eigen::MatrixXd::Identity(p - 1, p - 1)).norm(), 1e-12);
  EXPECT_LT((g.transpose() * f.theta().coords()).norm(), 1e-12);
  EXPECT_LT((g * g.transpose() + f.theta().coords() * f.theta().coords().transpose() -
             Eigen::MatrixXd::Identity(p, p))
                .norm(),
            1e-12);
}

}  // namespace

TEST(UnitVector, ValidatesNorm) {
  EXPECT_NO_THROW(UnitVector(Eigen::Vector3d(0, 0, 1)));
  EXPECT_THROW(UnitVector(Eigen::Vector3d(0, 0, 1.1)), Error);
  EXPECT_THROW(UnitVector::normalize(Eigen::Vector3d::Zero()), Error);
  try {
    UnitVector(Eigen::VectorXd::Ones(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_dimension);
  }
}

TEST(TangentFrame, InvariantsAcrossRandomThetas) {
  Rng rng(11);
  for (int p : {2, 3, 4, 7, 60}) {
    for (int k = 0; k < 20; ++k) expect_valid_frame(TangentFrame(UnitVector(sample_uniform_sphere(p, rng))));
    expect_valid_frame(TangentFrame(UnitVector::basis(p, 0)));
    expect_valid_frame(TangentFrame(UnitVector(-Eigen::VectorXd::Unit(p, 0))));
  }
}

TEST(TangentFrame, Deterministic) {
  const UnitVector t = UnitVector::normalize(Eigen::Vector3d(1, -1, 0));
  EXPECT_EQ(TangentFrame(t).gamma(), TangentFrame(t).gamma());
}

TEST(TangentFrame, RejectsBadGamma) {
  const UnitVector t = UnitVector::basis(3, 0);
  Eigen::MatrixXd g(3, 2);
  g << 1, 0, 0, 1, 0, 0;
  EXPECT_THROW(TangentFrame(t, g), Error);
}

TEST(Decompose, NorthPoleFrameExample) {
  const TangentFrame f(UnitVector::basis(3, 2));
  const Eigen::Vector3d x(1, 0, 0);
  const SignCosine sc = decompose(x, f);
  EXPECT_NEAR(sc.v, 0.0, 1e-15);
  EXPECT_NEAR(sc.u.norm(), 1.0, 1e-15);
  EXPECT_LT((reconstruct(sc.v, sc.u, f) - x).norm(), 1e-12);
}

TEST(Decompose, ReconstructionRoundTrip) {
  Rng rng(3);
  for (int p : {3, 5, 20}) {
    const TangentFrame f(UnitVector(sample_uniform_sphere(p, rng)));
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXd x = sample_uniform_sphere(p, rng);
      const SignCosine sc = decompose(x, f);
      EXPECT_NEAR(sc.u.norm(), 1.0, 1e-12);
      EXPECT_LT((reconstruct(sc.v, sc.u, f) - x).norm(), 1e-10);
    }
  }
}

TEST(Decompose, PoleIsAnError) {
  const TangentFrame f(UnitVector::basis(3, 0));
  EXPECT_THROW(decompose(Eigen::Vector3d(1, 0, 0), f), Error);
  EXPECT_THROW(decompose(Eigen::Vector3d(-1, 0, 0), f), Error);

  Eigen::MatrixXd rows(3, 3);
  rows << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  try {
    decompose(DirectionalSample(rows), f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::near_pole);
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
}

TEST(Decompose, FrameChoiceLeavesInnerProductsAlone) {
  Rng rng(5);
  const int p = 5;
  const TangentFrame f(UnitVector(sample_uniform_sphere(p, rng)));
  const TangentFrame g = f.rotated_basis(random_orthogonal(p - 1, rng));
  const Eigen::VectorXd x = sample_uniform_sphere(p, rng);
  const Eigen::VectorXd y = sample_uniform_sphere(p, rng);
  EXPECT_NEAR(decompose(x, f).u.dot(decompose(y, f).u), decompose(x, g).u.dot(decompose(y, g).u),
              1e-12);
}

TEST(Decompose, RotationalEquivariance) {
  Rng rng(8);
  const int p = 4;
  const TangentFrame f(UnitVector(sample_uniform_sphere(p, rng)));
  for (int k = 0; k < 20; ++k) {
    const Eigen::MatrixXd o = random_orthogonal(p, rng);
    const TangentFrame fo(UnitVector::normalize(o * f.theta().coords()), o * f.gamma());
    const Eigen::VectorXd x = sample_uniform_sphere(p, rng);
    const SignCosine a = decompose(x, f);
    const SignCosine b = decompose(o * x, fo);
    EXPECT_NEAR(a.v, b.v, 1e-12);
    EXPECT_LT((a.u - b.u).norm(), 1e-10);
  }
}

TEST(SphericalMean, SimpleAndUndefined) {
  Eigen::MatrixXd rows(2, 3);
  rows << 1, 0, 0, 0, 1, 0;
  const UnitVector m = spherical_mean(DirectionalSample(rows));
  EXPECT_LT((m.coords() - Eigen::Vector3d(1, 1, 0).normalized()).norm(), 1e-15);

  rows << 1, 0, 0, -1, 0, 0;
  try {
    spherical_mean(DirectionalSample(rows));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::undefined_mean);
  }
}

TEST(SphericalMean, ConcentratedSampleNearTheta) {
  Rng rng(21);
  const UnitVector theta = UnitVector::normalize(Eigen::Vector3d(1, 2, 3));
  const UnitVector m = spherical_mean(sample_vmf(theta, 50.0, 2000, rng));
  EXPECT_LT(angle_between(m, theta), 0.02);
}

TEST(PrincipalAxis, AxialSampleAndSignConvention) {
  Rng rng(22);
  const UnitVector theta = UnitVector::normalize(Eigen::Vector3d(-1, 2, 0.5));
  DirectionalSample s = sample_vmf(theta, 20.0, 600, rng);
  Eigen::MatrixXd rows = s.rows();
  for (int i = 0; i < rows.rows(); i += 2) rows.row(i) *= -1.0;
  const UnitVector axis = principal_axis(DirectionalSample(rows));
  EXPECT_GT(axis[0], 0.0);
  EXPECT_LT(std::min(angle_between(axis, theta), angle_between(-axis.coords(), theta)), 0.05);
}

TEST(PrincipalAxis, AmbiguousAndTooSmall) {
  Eigen::MatrixXd rows(4, 3);
  rows << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0;
  try {
    principal_axis(DirectionalSample(rows));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ambiguous_axis);
  }
  Eigen::MatrixXd two(2, 3);
  two << 1, 0, 0, 0, 1, 0;
  EXPECT_THROW(principal_axis(DirectionalSample(two)), Error);
}

TEST(AngleBetween, Basics) {
  EXPECT_NEAR(angle_between(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)), M_PI / 2, 1e-15);
  EXPECT_NEAR(angle_between(Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 1e-9).normalized()), 1e-9, 1e-20);
}
