#include "rotsym/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "rotsym/error.hpp"
#include "rotsym/lecam.hpp"

namespace rotsym {
namespace {

constexpr std::array<std::pair<Scenario, std::string_view>, 6> kScenarioNames{{
    {Scenario::te_grid, "te_grid"},
    {Scenario::tm_grid, "tm_grid"},
    {Scenario::mixture_vmf, "mixture_vmf"},
    {Scenario::mixture_te_tm, "mixture_te_tm"},
    {Scenario::misspecified_theta, "misspecified_theta"},
    {Scenario::high_dim_null, "high_dim_null"},
}};

std::string shortest(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

const std::vector<Method>& default_tests() {
  static const std::vector<Method> tests{Method::loc,          Method::sc,
                                         Method::hyb,          Method::hyb_fisher,
                                         Method::cov,          Method::loc_vmf_unspec,
                                         Method::sc_unspec,    Method::hyb_vmf_unspec,
                                         Method::hyb_fisher_unspec};
  return tests;
}

TestBattery make_battery(const ExperimentConfig& config) {
  const UnitVector theta(config.theta);
  const AngularFunction score_f = angular_function_from_string(config.score_f);
  const bool standardize = config.scenario == Scenario::high_dim_null;
  const std::vector<Method> tests = config.tests;
  const Estimator estimator = config.estimator;
  return [=](const DirectionalSample& sample) {
    std::vector<double> p_values;
    p_values.reserve(tests.size());
    std::optional<ThetaEstimate> est;
    for (Method m : tests) {
      TestResult r;
      if (!is_unspecified(m)) {
        r = run_method(m, sample, &theta, estimator);
      } else {
        if (!est) est = estimate_theta(sample, estimator);
        switch (m) {
          case Method::loc_vmf_unspec: r = q_loc_vmf(sample, *est); break;
          case Method::sc_unspec: r = q_sc_unspecified(sample, *est); break;
          case Method::hyb_vmf_unspec: r = q_hyb_vmf(sample, *est); break;
          case Method::hyb_fisher_unspec: r = q_hyb_fisher_vmf(sample, *est); break;
          default: r = efficient_score_loc(sample, *est, score_f); break;
        }
      }
      if (standardize) r = high_dim_standardize(r);
      p_values.push_back(r.p_value);
    }
    return p_values;
  };
}

SampleFactory make_factory(const ExperimentConfig& config) {
  const int p = config.p;
  const std::size_t n = static_cast<std::size_t>(config.n);
  const UnitVector theta0(config.theta0);
  const UnitVector mu(config.mu);
  const AngularFunction g = angular_function_from_string(config.g);
  std::vector<Sampler> samplers;
  for (int ell : config.levels) {
    switch (config.scenario) {
      case Scenario::te_grid:
        samplers.push_back(make_sampler(
            TangentElliptical(theta0, g, ShapeMatrix(shape_for_level(p, ell, config.shape_step)))));
        break;
      case Scenario::tm_grid:
        samplers.push_back(make_sampler(TangentVmf(theta0, g, mu, config.kappa_step * ell)));
        break;
      case Scenario::mixture_vmf: {
        const TangentFrame frame(theta0);
        const double a = config.angle_step * ell;
        const UnitVector theta_l = UnitVector::normalize(std::cos(a) * theta0.coords() +
                                                         std::sin(a) * frame.gamma().col(0));
        auto first = make_sampler(RotationallySymmetric(theta0, g));
        auto second = make_sampler(RotationallySymmetric(theta_l, g));
        std::vector<std::pair<double, Sampler>> parts{{0.5, first}, {0.5, second}};
        samplers.push_back([parts](Rng& rng) {
          return sample_mixture(parts, 1, rng).row(0);
        });
        break;
      }
      case Scenario::mixture_te_tm: {
        auto tm = make_sampler(TangentVmf(theta0, g, mu, config.kappa_step * ell));
        auto te = make_sampler(
            TangentElliptical(theta0, g, ShapeMatrix(shape_for_level(p, ell, config.shape_step))));
        std::vector<std::pair<double, Sampler>> parts{{0.5, tm}, {0.5, te}};
        samplers.push_back([parts](Rng& rng) {
          return sample_mixture(parts, 1, rng).row(0);
        });
        break;
      }
      case Scenario::misspecified_theta:
        samplers.push_back(make_sampler(RotationallySymmetric(theta0, g)));
        break;
      case Scenario::high_dim_null:
        samplers.push_back(make_sampler(RotationallySymmetric(theta0, AngularFunction::uniform())));
        break;
    }
  }
  return [samplers, n, p](std::size_t level, Rng& rng) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), p);
    for (std::size_t i = 0; i < n; ++i) {
      rows.row(static_cast<Eigen::Index>(i)) = samplers[level](rng).transpose();
    }
    return DirectionalSample(std::move(rows));
  };
}

std::uint64_t stream_tag_for(const ExperimentConfig& config) {
  return derive_key(static_cast<std::uint64_t>(config.scenario),
                    {static_cast<std::uint64_t>(config.p), static_cast<std::uint64_t>(config.n)});
}

Eigen::VectorXd parse_vector(const ConfigFile& file, const ConfigEntry& e) {
  const auto parts = split_list(e.value);
  if (parts.empty()) file.fail(e.line, "expected a comma-separated vector");
  Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      std::size_t used = 0;
      v[static_cast<Eigen::Index>(i)] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      file.fail(e.line, "not a number: '" + parts[i] + "'");
    }
  }
  if (!(v.norm() > 0.0)) file.fail(e.line, "vector must be nonzero");
  return v / v.norm();
}

double parse_double(const ConfigFile& file, const ConfigEntry& e) {
  try {
    std::size_t used = 0;
    const double x = std::stod(e.value, &used);
    if (used != e.value.size() || !std::isfinite(x)) throw std::invalid_argument(e.value);
    return x;
  } catch (const std::exception&) {
    file.fail(e.line, "not a number: '" + e.value + "'");
  }
}

long long parse_int(const ConfigFile& file, const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return x;
  } catch (const std::exception&) {
    file.fail(line, "not an integer: '" + text + "'");
  }
}

std::vector<int> parse_int_list(const ConfigFile& file, const ConfigEntry& e) {
  std::vector<int> out;
  for (const auto& piece : split_list(e.value)) {
    const auto dots = piece.find("..");
    if (dots != std::string::npos) {
      const long long lo = parse_int(file, trim(piece.substr(0, dots)), e.line);
      const long long hi = parse_int(file, trim(piece.substr(dots + 2)), e.line);
      if (hi < lo) file.fail(e.line, "empty range '" + piece + "'");
      for (long long k = lo; k <= hi; ++k) out.push_back(static_cast<int>(k));
    } else {
      out.push_back(static_cast<int>(parse_int(file, piece, e.line)));
    }
  }
  if (out.empty()) file.fail(e.line, "expected a nonempty list");
  return out;
}

int limit_df(Method m, int p) {
  switch (m) {
    case Method::loc:
    case Method::loc_vmf_unspec:
      return df_loc(p);
    case Method::sc:
    case Method::sc_unspec:
      return df_sc(p);
    default:
      return df_loc(p) + df_sc(p);
  }
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& [value, name] : kScenarioNames) {
    if (value == s) return name;
  }
  return "unknown";
}

std::optional<Scenario> scenario_from_string(std::string_view name) {
  for (const auto& [value, label] : kScenarioNames) {
    if (label == name) return value;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::config, msg); };
  if (p < 3) fail("p must be >= 3");
  if (n < 1) fail("n must be >= 1");
  if (reps < 1) fail("reps must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (levels.empty()) fail("levels must be nonempty");
  for (int ell : levels) {
    if (ell < 0) fail("levels must be >= 0");
  }
  if (theta.size() == 0) theta = Eigen::VectorXd::Unit(p, 0);
  if (theta0.size() == 0) theta0 = theta;
  if (mu.size() == 0) mu = Eigen::VectorXd::Unit(p - 1, 0);
  if (theta.size() != p || theta0.size() != p) fail("theta and theta0 must have p coordinates");
  if (mu.size() != p - 1) fail("mu must have p-1 coordinates");
  if (std::abs(theta.norm() - 1.0) > kUnitTolerance ||
      std::abs(theta0.norm() - 1.0) > kUnitTolerance ||
      std::abs(mu.norm() - 1.0) > kUnitTolerance) {
    fail("theta, theta0 and mu must be unit vectors");
  }
  if (scenario == Scenario::high_dim_null) {
    if (tests.empty()) tests = {Method::loc, Method::sc, Method::hyb};
    for (Method m : tests) {
      if (m != Method::loc && m != Method::sc && m != Method::hyb) {
        fail("high_dim_null supports only s-loc, s-sc and s-hyb");
      }
    }
  }
  if (tests.empty()) tests = default_tests();
  if (scenario == Scenario::misspecified_theta || scenario == Scenario::high_dim_null) {
    if (levels != std::vector<int>{0}) fail(std::string(to_string(scenario)) + " is null-only: levels must be 0");
  }
  if (scenario == Scenario::te_grid || scenario == Scenario::mixture_te_tm) {
    if (!(shape_step >= 0.0)) fail("shape_step must be >= 0");
  }
  if (!(kappa_step >= 0.0)) fail("kappa_step must be >= 0");
  try {
    angular_function_from_string(g);
    angular_function_from_string(score_f);
  } catch (const Error& e) {
    fail(e.what());
  }
}

const PowerRow& PowerTable::at(std::string_view test, int ell, int n) const {
  for (const auto& row : rows) {
    if (row.test == test && row.ell == ell && (n == 0 || row.n == n)) return row;
  }
  throw Error(ErrorCode::invalid_argument,
              "PowerTable: no row for " + std::string(test) + " at level " + std::to_string(ell));
}

Eigen::MatrixXd shape_for_level(int p, int ell, double step) {
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(p - 1);
  diag[0] += ell * step;
  return (p - 1.0) * Eigen::MatrixXd(diag.asDiagonal()) / (p - 1.0 + ell * step);
}

ReplicateCounts run_replicates(std::size_t level_count, int reps, double alpha, int num_tests,
                               std::uint64_t base_seed, std::uint64_t stream_tag, int workers,
                               const SampleFactory& factory, const TestBattery& battery) {
  const std::size_t total = level_count * static_cast<std::size_t>(reps);
  const std::size_t width = static_cast<std::size_t>(num_tests);
  // status: 0 ok, 1 ok after regeneration, 2 failed
  std::vector<unsigned char> status(total, 0);
  std::vector<unsigned char> rejected(total * width, 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const std::size_t level = task / static_cast<std::size_t>(reps);
      const std::size_t r = task % static_cast<std::size_t>(reps);
      try {
        bool done = false;
        for (std::uint64_t attempt = 0; attempt < 2 && !done; ++attempt) {
          Rng rng = substream(base_seed, {stream_tag, level, r, attempt});
          try {
            const DirectionalSample sample = factory(level, rng);
            const std::vector<double> p_values = battery(sample);
            for (std::size_t t = 0; t < width; ++t) {
              rejected[task * width + t] = p_values[t] < alpha ? 1 : 0;
            }
            status[task] = attempt == 0 ? 0 : 1;
            done = true;
          } catch (const Error&) {
            status[task] = 2;
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  const int nthreads = std::min<int>(resolve_workers(workers), static_cast<int>(std::max<std::size_t>(total, 1)));
  if (nthreads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  ReplicateCounts counts;
  counts.rejections.assign(level_count, std::vector<long>(width, 0));
  counts.successes.assign(level_count, 0);
  for (std::size_t task = 0; task < total; ++task) {
    const std::size_t level = task / static_cast<std::size_t>(reps);
    if (status[task] == 2) {
      ++counts.failures;
      continue;
    }
    if (status[task] == 1) ++counts.regenerated;
    ++counts.successes[level];
    for (std::size_t t = 0; t < width; ++t) counts.rejections[level][t] += rejected[task * width + t];
  }
  if (static_cast<double>(counts.failures) > 1e-3 * static_cast<double>(total)) {
    throw Error(ErrorCode::experiment, "experiment: " + std::to_string(counts.failures) + " of " +
                                           std::to_string(total) +
                                           " replicates failed (more than 0.1%)");
  }
  return counts;
}

PowerTable run_experiment(const ExperimentConfig& input) {
  ExperimentConfig config = input;
  config.validate();
  const SampleFactory factory = make_factory(config);
  const TestBattery battery = make_battery(config);
  const ReplicateCounts counts =
      run_replicates(config.levels.size(), config.reps, config.alpha,
                     static_cast<int>(config.tests.size()), config.base_seed,
                     stream_tag_for(config), config.workers, factory, battery);
  PowerTable table;
  table.scenario = std::string(to_string(config.scenario));
  table.failures = counts.failures;
  table.regenerated = counts.regenerated;
  for (std::size_t l = 0; l < config.levels.size(); ++l) {
    for (std::size_t t = 0; t < config.tests.size(); ++t) {
      PowerRow row;
      row.test = std::string(label(config.tests[t]));
      row.ell = config.levels[l];
      row.n = config.n;
      row.p = config.p;
      row.rejections = counts.rejections[l][t];
      row.reps = counts.successes[l];
      row.freq = row.reps > 0 ? static_cast<double>(row.rejections) / row.reps : 0.0;
      row.se = row.reps > 0 ? std::sqrt(row.freq * (1.0 - row.freq) / row.reps) : 0.0;
      table.rows.push_back(row);
    }
  }
  return table;
}

PowerTable run_experiment(const NamedExperiment& experiment) {
  PowerTable merged;
  for (const auto& run : experiment.runs) {
    PowerTable part = run_experiment(run);
    merged.scenario = part.scenario;
    merged.failures += part.failures;
    merged.regenerated += part.regenerated;
    merged.rows.insert(merged.rows.end(), part.rows.begin(), part.rows.end());
  }
  return merged;
}

PowerTable scenario_misspecified(ExperimentConfig config) {
  config.scenario = Scenario::misspecified_theta;
  config.levels = {0};
  if (config.theta.size() == 0) config.theta = Eigen::Vector3d(1.0, 0.0, 0.0);
  if (config.theta0.size() == 0) {
    config.theta0 = Eigen::Vector3d(1.0, -1.0, 0.0).normalized();
  }
  config.p = static_cast<int>(config.theta.size());
  return run_experiment(config);
}

double local_noncentrality(Method test, AlternativeKind kind, double strength, int p,
                           const AngularFunction& g) {
  if (kind == AlternativeKind::tangent_elliptical) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p - 1, p - 1);
    l(0, 0) = strength;
    l(1, 1) = -strength;
    const double lambda = noncentrality_te(l, p);
    switch (test) {
      case Method::loc:
      case Method::loc_vmf_unspec:
        return 0.0;
      case Method::sc:
      case Method::hyb:
      case Method::sc_unspec:
      case Method::hyb_vmf_unspec:
        return lambda;
      default: break;
    }
  } else {
    switch (test) {
      case Method::loc:
      case Method::hyb:
        return noncentrality_tm(strength, p);
      case Method::sc:
      case Method::sc_unspec:
        return 0.0;
      case Method::loc_vmf_unspec:
      case Method::hyb_vmf_unspec:
        return noncentrality_semiparam(AngularFunction::vmf(1.0), g, strength, p);
      default: break;
    }
  }
  throw Error(ErrorCode::unsupported_method,
              std::string("local_noncentrality: no noncentral chi-square limit for ") +
                  std::string(label(test)));
}

std::vector<LocalAlternativeReport> local_alternative_validation(
    int p, int n, const std::vector<Method>& tests, AlternativeKind kind, double strength,
    int reps, double alpha, std::uint64_t base_seed, const std::string& g_spec, int workers) {
  if (p < 3 || n < 1 || reps < 1 || tests.empty()) {
    throw Error(ErrorCode::invalid_argument, "local_alternative_validation: invalid arguments");
  }
  const AngularFunction g = angular_function_from_string(g_spec);
  const UnitVector theta = UnitVector::basis(p, 0);
  const double scale = strength / std::sqrt(static_cast<double>(n));

  Sampler sampler;
  if (kind == AlternativeKind::tangent_elliptical) {
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Identity(p - 1, p - 1);
    lambda(0, 0) += scale;
    lambda(1, 1) -= scale;
    sampler = make_sampler(TangentElliptical(theta, g, ShapeMatrix(lambda)));
  } else {
    sampler = make_sampler(TangentVmf(theta, g, UnitVector::basis(p - 1, 0), scale));
  }
  const std::size_t size = static_cast<std::size_t>(n);
  const SampleFactory factory = [&](std::size_t, Rng& rng) {
    Eigen::MatrixXd rows(n, p);
    for (std::size_t i = 0; i < size; ++i) rows.row(static_cast<Eigen::Index>(i)) = sampler(rng).transpose();
    return DirectionalSample(std::move(rows));
  };
  const TestBattery battery = [&](const DirectionalSample& sample) {
    std::vector<double> out;
    for (Method m : tests) out.push_back(run_method(m, sample, &theta, Estimator::spherical_mean).p_value);
    return out;
  };
  const std::uint64_t tag = derive_key(1000 + static_cast<std::uint64_t>(kind),
                                       {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(n)});
  const ReplicateCounts counts = run_replicates(1, reps, alpha, static_cast<int>(tests.size()),
                                                base_seed, tag, workers, factory, battery);
  std::vector<LocalAlternativeReport> reports;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    LocalAlternativeReport rep;
    rep.test = tests[t];
    rep.kind = kind;
    rep.strength = strength;
    rep.p = p;
    rep.n = n;
    rep.reps = static_cast<int>(counts.successes[0]);
    rep.lambda = local_noncentrality(tests[t], kind, strength, p, g);
    rep.predicted = predicted_power(rep.lambda, limit_df(tests[t], p), alpha);
    rep.empirical = static_cast<double>(counts.rejections[0][t]) / rep.reps;
    // Binomial s.e. under the predicted power.
    rep.se = std::sqrt(rep.predicted * (1.0 - rep.predicted) / rep.reps);
    rep.z = rep.se > 0.0 ? std::abs(rep.empirical - rep.predicted) / rep.se : 0.0;
    reports.push_back(rep);
  }
  return reports;
}

LocalAlternativeReport local_alternative_validation(int p, int n, Method test,
                                                    AlternativeKind kind, double strength,
                                                    int reps, double alpha,
                                                    std::uint64_t base_seed, const std::string& g,
                                                    int workers) {
  return local_alternative_validation(p, n, std::vector<Method>{test}, kind, strength, reps, alpha,
                                      base_seed, g, workers)
      .front();
}

std::vector<NamedExperiment> experiments_from_config(const ConfigFile& file) {
  const ConfigSection* defaults = nullptr;
  std::vector<const ConfigSection*> scenarios;
  for (const auto& section : file.sections()) {
    if (section.kind == "experiment") {
      if (defaults) file.fail(section.line, "only one [experiment] section is allowed");
      if (!section.name.empty()) file.fail(section.line, "[experiment] takes no name");
      defaults = &section;
    } else if (section.kind == "scenario") {
      if (section.name.empty()) file.fail(section.line, "[scenario] needs a name");
      for (const auto* other : scenarios) {
        if (other->name == section.name) {
          file.fail(section.line, "duplicate scenario name '" + section.name + "'");
        }
      }
      scenarios.push_back(&section);
    } else {
      file.fail(section.line, "unknown section kind '" + section.kind + "'");
    }
  }
  if (scenarios.empty()) file.fail(1, "no [scenario NAME] section found");

  static const std::vector<std::string> known{
      "kind",  "p",     "n",          "reps",       "alpha",      "levels", "theta",
      "theta0", "g",    "shape_step", "kappa_step", "angle_step", "mu",     "tests",
      "estimator", "score_f", "seed", "workers"};

  std::vector<NamedExperiment> out;
  for (const auto* section : scenarios) {
    std::map<std::string, ConfigEntry> merged;
    if (defaults) merged = defaults->entries;
    for (const auto& [k, v] : section->entries) merged[k] = v;
    for (const auto& [k, v] : merged) {
      if (std::find(known.begin(), known.end(), k) == known.end()) {
        file.fail(v.line, "unknown key '" + k + "'");
      }
    }
    auto get = [&](const std::string& key) -> const ConfigEntry* {
      const auto it = merged.find(key);
      return it == merged.end() ? nullptr : &it->second;
    };

    ExperimentConfig base;
    const ConfigEntry* kind = get("kind");
    if (!kind) file.fail(section->line, "scenario '" + section->name + "' needs 'kind'");
    const auto scenario = scenario_from_string(kind->value);
    if (!scenario) file.fail(kind->line, "unknown scenario kind '" + kind->value + "'");
    base.scenario = *scenario;
    if (auto e = get("reps")) base.reps = static_cast<int>(parse_int(file, e->value, e->line));
    if (auto e = get("alpha")) base.alpha = parse_double(file, *e);
    if (auto e = get("levels")) base.levels = parse_int_list(file, *e);
    if (auto e = get("theta")) base.theta = parse_vector(file, *e);
    if (auto e = get("theta0")) base.theta0 = parse_vector(file, *e);
    if (auto e = get("mu")) base.mu = parse_vector(file, *e);
    if (auto e = get("g")) base.g = e->value;
    if (auto e = get("score_f")) base.score_f = e->value;
    if (auto e = get("shape_step")) base.shape_step = parse_double(file, *e);
    if (auto e = get("kappa_step")) base.kappa_step = parse_double(file, *e);
    if (auto e = get("angle_step")) base.angle_step = parse_double(file, *e);
    if (auto e = get("seed")) base.base_seed = static_cast<std::uint64_t>(parse_int(file, e->value, e->line));
    if (auto e = get("workers")) base.workers = static_cast<int>(parse_int(file, e->value, e->line));
    if (auto e = get("estimator")) {
      if (e->value == "mean") {
        base.estimator = Estimator::spherical_mean;
      } else if (e->value == "axis") {
        base.estimator = Estimator::principal_axis;
      } else {
        file.fail(e->line, "estimator must be 'mean' or 'axis'");
      }
    }
    if (auto e = get("tests")) {
      for (const auto& name : split_list(e->value)) {
        if (name == "all") {
          for (Method m : default_tests()) base.tests.push_back(m);
          continue;
        }
        const auto m = method_from_label(name);
        if (!m) file.fail(e->line, "unknown test '" + name + "'");
        base.tests.push_back(*m);
      }
    }

    std::vector<int> ps{static_cast<int>(base.theta.size() > 0 ? base.theta.size() : 3)};
    std::vector<int> ns{base.n};
    if (auto e = get("p")) ps = parse_int_list(file, *e);
    if (auto e = get("n")) ns = parse_int_list(file, *e);

    NamedExperiment named;
    named.name = section->name;
    for (int p : ps) {
      for (int n : ns) {
        ExperimentConfig run = base;
        run.p = p;
        run.n = n;
        try {
          run.validate();
        } catch (const Error& err) {
          file.fail(section->line, "scenario '" + section->name + "': " + err.what());
        }
        named.runs.push_back(std::move(run));
      }
    }
    out.push_back(std::move(named));
  }
  return out;
}

void write_power_csv(std::ostream& out, const PowerTable& table) {
  out << "test,ell,n,p,freq,se,N\n";
  for (const auto& row : table.rows) {
    out << row.test << ',' << row.ell << ',' << row.n << ',' << row.p << ',' << shortest(row.freq)
        << ',' << shortest(row.se) << ',' << row.reps << '\n';
  }
}

void write_power_json(std::ostream& out, const PowerTable& table) {
  nlohmann::json j;
  j["scenario"] = table.scenario;
  j["failures"] = table.failures;
  j["regenerated"] = table.regenerated;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    j["rows"].push_back({{"test", row.test},
                         {"ell", row.ell},
                         {"n", row.n},
                         {"p", row.p},
                         {"rejections", row.rejections},
                         {"freq", row.freq},
                         {"se", row.se},
                         {"N", row.reps}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace rotsym
