#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotsym/config.hpp"
#include "rotsym/distributions.hpp"
#include "rotsym/geometry.hpp"
#include "rotsym/symmetry_tests.hpp"

namespace rotsym {

enum class Scenario {
  te_grid,             // TE(theta0, g, Lambda_l)
  tm_grid,             // TM(theta0, g, mu, kappa_l)
  mixture_vmf,         // 1/2 vMF(theta0, c) + 1/2 vMF(theta_l, c)
  mixture_te_tm,       // 1/2 TM(theta0, g, mu, kappa_l) + 1/2 TE(theta0, g, Lambda_l)
  misspecified_theta,  // null at theta0, specified tests run at theta
  high_dim_null,       // uniform null, standardized specified tests
};

std::string_view to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view name);

struct ExperimentConfig {
  Scenario scenario = Scenario::te_grid;
  int p = 3;
  int n = 200;
  int reps = 2000;
  double alpha = 0.05;
  std::vector<int> levels{0};
  /// Location handed to specified-theta tests.
  Eigen::VectorXd theta;
  /// True location of the data; defaults to theta.
  Eigen::VectorXd theta0;
  /// Angular function of the data (concentration in mixture_vmf).
  std::string g = "vmf 2";
  /// Lambda_l = (p-1) diag(1 + l*shape_step, 1, ..., 1) / (p - 1 + l*shape_step).
  double shape_step = 0.5;
  /// kappa_l = kappa_step * l.
  double kappa_step = 1.0;
  /// mixture_vmf: theta_l = cos(l*angle_step) theta0 + sin(l*angle_step) gamma_1.
  double angle_step = 0.025;
  /// Tangent vMF direction on S^{p-2}; defaults to e_1.
  Eigen::VectorXd mu;
  std::vector<Method> tests;
  Estimator estimator = Estimator::spherical_mean;
  /// Score target for u-locf.
  std::string score_f = "vmf 1";
  std::uint64_t base_seed = 1;
  /// 0 means std::thread::hardware_concurrency().
  int workers = 0;

  /// Fills defaults and checks invariants; throws ErrorCode::config.
  void validate();
};

struct PowerRow {
  std::string test;
  int ell = 0;
  int n = 0;
  int p = 0;
  long rejections = 0;
  /// Replicates that produced a result.
  long reps = 0;
  double freq = 0.0;
  double se = 0.0;
};

struct PowerTable {
  std::string scenario;
  std::vector<PowerRow> rows;
  long failures = 0;
  long regenerated = 0;

  /// Row for (test, ell); n = 0 matches any sample size.
  const PowerRow& at(std::string_view test, int ell, int n = 0) const;
};

/// Shape used by the TE scenarios at severity level ell.
Eigen::MatrixXd shape_for_level(int p, int ell, double step);

/// Draws one replicate's sample at level index `level_index`.
using SampleFactory = std::function<DirectionalSample(std::size_t level_index, Rng& rng)>;
/// Returns per-test p-values for one sample, in a fixed order.
using TestBattery = std::function<std::vector<double>(const DirectionalSample& sample)>;

struct ReplicateCounts {
  /// [level][test] rejection counts.
  std::vector<std::vector<long>> rejections;
  std::vector<long> successes;
  long failures = 0;
  long regenerated = 0;
};

/// Deterministic parallel driver. Replicate r at level l uses substream
/// (base_seed, stream_tag, l, r, attempt); a failing replicate is retried once
/// with attempt = 1 and otherwise counted as a failure. Results do not depend
/// on the number of workers. More than 0.1% failures throws ErrorCode::experiment.
ReplicateCounts run_replicates(std::size_t level_count, int reps, double alpha, int num_tests,
                               std::uint64_t base_seed, std::uint64_t stream_tag, int workers,
                               const SampleFactory& factory, const TestBattery& battery);

struct NamedExperiment {
  std::string name;
  /// One run per (p, n) combination; all share the scenario settings.
  std::vector<ExperimentConfig> runs;
};

PowerTable run_experiment(const ExperimentConfig& config);
/// Runs every (p, n) combination and concatenates the rows.
PowerTable run_experiment(const NamedExperiment& experiment);

/// Null-only run with data centred at theta0 and specified tests at theta;
/// unspecified tests estimate the location.
PowerTable scenario_misspecified(ExperimentConfig config);

enum class AlternativeKind { tangent_elliptical, tangent_vmf };

struct LocalAlternativeReport {
  Method test = Method::loc;
  AlternativeKind kind = AlternativeKind::tangent_vmf;
  double strength = 0.0;
  int p = 0;
  int n = 0;
  int reps = 0;
  double lambda = 0.0;
  double predicted = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  /// |empirical - predicted| / se.
  double z = 0.0;
};

/// Noncentrality the asymptotic theory assigns to `test` under the local
/// alternative (Lambda_n = I + n^{-1/2} strength diag(1,-1,0,...) or
/// kappa_n = strength / sqrt(n), mu = e_1) with angular function g.
double local_noncentrality(Method test, AlternativeKind kind, double strength, int p,
                           const AngularFunction& g);

/// Runs all `tests` on the same replicates and compares each empirical power
/// with predicted_power at the test's noncentrality.
std::vector<LocalAlternativeReport> local_alternative_validation(
    int p, int n, const std::vector<Method>& tests, AlternativeKind kind, double strength,
    int reps = 2000, double alpha = 0.05, std::uint64_t base_seed = 1,
    const std::string& g = "vmf 2", int workers = 0);

LocalAlternativeReport local_alternative_validation(int p, int n, Method test,
                                                    AlternativeKind kind, double strength,
                                                    int reps = 2000, double alpha = 0.05,
                                                    std::uint64_t base_seed = 1,
                                                    const std::string& g = "vmf 2",
                                                    int workers = 0);

/// Reads `[experiment]` defaults and one `[scenario NAME]` section per
/// experiment; scenario keys override the defaults. List-valued n or p
/// expand into one run per value.
std::vector<NamedExperiment> experiments_from_config(const ConfigFile& file);

void write_power_csv(std::ostream& out, const PowerTable& table);
void write_power_json(std::ostream& out, const PowerTable& table);

}  // namespace rotsym
