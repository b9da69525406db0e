#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <random>

#include "rotsym/distributions.hpp"
#include "rotsym/error.hpp"
#include "rotsym/lecam.hpp"
#include "support.hpp"

using namespace rotsym;
using rotsym::oracle::simpson;

namespace {

// E_g[h(V)] on S^2 (p = 3) for g(t) = exp(eta t), in angle form to tame endpoint factors.
double vmf3_expect(double eta, const std::function<double(double, double)>& h) {
  const double c = eta / (2.0 * std::sinh(eta));
  return simpson([&](double phi) {
    const double t = std::cos(phi), s = std::sin(phi);
    return h(t, s) * c * std::exp(eta * t) * s;
  }, 1e-9, M_PI - 1e-9, 4000);
}

}  // namespace

TEST(InfoFunctionals, ZeroScore) {
  const InfoFunctionals u = info_functionals(AngularFunction::vmf(1.0), AngularFunction::uniform(), 4);
  EXPECT_EQ(u.i_p, 0.0);
  EXPECT_EQ(u.j_p, 0.0);
}

TEST(InfoFunctionals, SelfCrossEquality) {
  for (int p : {3, 5}) {
    const AngularFunction g = AngularFunction::vmf(2.0);
    const InfoFunctionals i = info_functionals(g, g, p);
    EXPECT_NEAR(i.j_p, i.j_fg, 1e-10);
    EXPECT_NEAR(i.j_p, i.k_fg, 1e-10);
    EXPECT_NEAR(i.h_fg, i.i_p, 1e-10);
    EXPECT_GE(i.j_p - i.i_p * i.i_p, -1e-10);
  }
}

TEST(InfoFunctionals, IntegrationByPartsTwin) {
  const double eta = 2.0;
  const InfoFunctionals i = info_functionals(AngularFunction::vmf(eta), AngularFunction::vmf(eta), 3);
  const double twin = vmf3_expect(eta, [](double t, double s) { return t / s; });
  EXPECT_NEAR(i.i_p, (3 - 2) * twin, 1e-8);
  EXPECT_NEAR(i.i_p, eta * vmf3_expect(eta, [](double, double s) { return s; }), 1e-8);
}

TEST(InfoFunctionals, JensenEqualityForArcsinExp) {
  for (double k : {0.5, 1.0, 2.0}) {
    const AngularFunction g = AngularFunction::arcsin_exp(k);
    const InfoFunctionals i = info_functionals(g, g, 3);
    EXPECT_NEAR(i.j_p, i.i_p * i.i_p, 1e-6) << k;
  }
  for (double eta : {0.5, 3.0}) {
    const InfoFunctionals i = info_functionals(AngularFunction::vmf(eta), AngularFunction::vmf(eta), 4);
    EXPECT_GT(i.j_p - i.i_p * i.i_p, 1e-6);
  }
}

TEST(InfoFunctionals, DivergentIntegralDetected) {
  const AngularFunction g("atanh-exp", [](double t) { return std::sqrt((1 + t) / (1 - t)); },
                          [](double t) { return 1.0 / (1 - t * t); },
                          [](double t) { return 2 * t / ((1 - t * t) * (1 - t * t)); });
  try {
    info_functionals(g, g, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::divergent_functional);
  }
}

TEST(PopulationD, MatchesSimpson) {
  const double eta = 2.0;
  const double expected = (3 - 2) * vmf3_expect(eta, [](double t, double s) { return t / s; }) /
                          ((3 - 1) * vmf3_expect(eta, [](double t, double) { return t; }));
  EXPECT_NEAR(population_d(AngularFunction::vmf(eta), 3), expected, 1e-8);
}

TEST(Are, PublishedValue) {
  const auto start = std::chrono::steady_clock::now();
  EXPECT_NEAR(are_vmf(3, 5.0), 0.171, 0.001);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
}

TEST(Are, ClosedFormMatchesQuadrature) {
  for (int p : {3, 4, 6}) {
    for (double eta : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double a = are_vmf(p, eta);
      EXPECT_NEAR(a, are_quadrature(p, eta), 1e-7) << p << " " << eta;
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
  }
}

TEST(Are, SmallConcentrationLimit) {
  // The score is eta itself, so eta cancels and the limit is the uniform-law
  // value 1 - E[sqrt(1-V^2)]^2 / E[1-V^2] = 1 - 3 pi^2 / 32 on S^2.
  EXPECT_NEAR(are_vmf(3, 1e-4), 1.0 - 3.0 * M_PI * M_PI / 32.0, 1e-6);
}

TEST(Are, MonotoneInConcentration) {
  for (int p : {3, 4, 6, 10}) {
    double prev = are_vmf(p, 0.05);
    for (double eta = 0.1; eta < 200.0; eta *= 1.3) {
      const double a = are_vmf(p, eta);
      EXPECT_GE(a, prev - 1e-12) << p << " " << eta;
      prev = a;
    }
  }
}

TEST(Are, LargeConcentrationStaysFinite) {
  for (double eta : {150.0, 700.0, 5000.0}) {
    const double a = are_vmf(3, eta);
    EXPECT_TRUE(std::isfinite(a));
    EXPECT_LE(a, 1.0);
  }
}

TEST(NoncentralityTe, Examples) {
  EXPECT_EQ(noncentrality_te(Eigen::Matrix2d::Zero(), 3), 0.0);
  Eigen::Matrix2d l = Eigen::Vector2d(1, -1).asDiagonal();
  EXPECT_NEAR(noncentrality_te(l, 3), 0.5, 1e-15);
  const double a = 0.7;
  Eigen::Matrix2d o;
  o << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  EXPECT_NEAR(noncentrality_te(o * l * o.transpose(), 3), 0.5, 1e-14);
  try {
    noncentrality_te(Eigen::Matrix2d::Identity(), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_perturbation);
  }
}

TEST(NoncentralityTm, Examples) {
  EXPECT_EQ(noncentrality_tm(0.0, 3), 0.0);
  EXPECT_NEAR(noncentrality_tm(3.0, 3), 4.5, 1e-15);
  EXPECT_EQ(noncentrality_semiparam(AngularFunction::vmf(1.0), AngularFunction::vmf(2.0), 0.0, 3), 0.0);
}

TEST(NoncentralitySemiparam, SelfTargetIsParametricValue) {
  const AngularFunction g = AngularFunction::vmf(2.0);
  const InfoFunctionals i = info_functionals(g, g, 3);
  EXPECT_NEAR(noncentrality_semiparam(g, g, 2.0, 3), 4.0 * (1.0 - i.i_p * i.i_p / i.j_p) / 2.0, 1e-10);
}

TEST(NoncentralitySemiparam, IndependentAssembly) {
  const double eta = 3.0, k = 2.0;
  const AngularFunction g("exp(3t)", [=](double t) { return std::exp(eta * t); },
                          [=](double) { return eta; }, [](double) { return 0.0; });
  const double s1 = vmf3_expect(eta, [](double, double s) { return s; });
  const double s2 = vmf3_expect(eta, [](double, double s) { return s * s; });
  const double ig = eta * s1, h = s1, kk = s2, jfg = eta * s2;
  const double r = ig / jfg;
  const double expected = k * k / 2.0 * std::pow(1 - r * h, 2) / (1 - 2 * r * h + r * r * kk);
  EXPECT_NEAR(noncentrality_semiparam(AngularFunction::vmf(1.0), g, k, 3), expected, 1e-8);
}

TEST(PredictedPower, NullMonotoneAndSimulated) {
  EXPECT_NEAR(predicted_power(0.0, 2, 0.05), 0.05, 1e-10);
  EXPECT_NEAR(predicted_power(0.0, 7, 0.01), 0.01, 1e-10);
  double prev = 0.0;
  for (double l = 0.0; l < 30.0; l += 0.5) {
    const double pw = predicted_power(l, 3, 0.05);
    EXPECT_GT(pw, prev);
    prev = pw;
  }
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> z;
  const double crit = -2.0 * std::log(0.05);
  const long draws = 10'000'000;
  long hits = 0;
  const double shift = std::sqrt(0.5);
  for (long i = 0; i < draws; ++i) {
    const double a = z(gen) + shift, b = z(gen);
    hits += a * a + b * b > crit;
  }
  const double mc = static_cast<double>(hits) / draws;
  const double pw = predicted_power(0.5, 2, 0.05);
  EXPECT_NEAR(mc, pw, 3.0 * std::sqrt(pw * (1 - pw) / draws));
}
