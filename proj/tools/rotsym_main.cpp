// rotsym: rotational symmetry tests for directional data.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rotsym/config.hpp"
#include "rotsym/distributions.hpp"
#include "rotsym/error.hpp"
#include "rotsym/io.hpp"
#include "rotsym/kde.hpp"
#include "rotsym/lecam.hpp"
#include "rotsym/montecarlo.hpp"
#include "rotsym/report.hpp"
#include "rotsym/symmetry_tests.hpp"

namespace {

using rotsym::Error;
using rotsym::ErrorCode;

constexpr int kExitData = 2;
constexpr int kExitTest = 3;

struct DataOptions {
  std::string path;
  std::string format = "unit";
  double tolerance = 1e-3;
  bool header = false;
};

void add_data_options(CLI::App* cmd, DataOptions& opt) {
  cmd->add_option("data", opt.path, "CSV file of observations")->required();
  cmd->add_option("--format", opt.format,
                  "unit: p columns of unit-vector coordinates; lonlat: longitude, latitude in "
                  "degrees (latitude in [-90, 90])")
      ->check(CLI::IsMember({"unit", "lonlat"}));
  cmd->add_option("--tol", opt.tolerance, "renormalize rows whose norm is within tol of 1");
  cmd->add_flag("--header", opt.header, "skip the first line");
}

rotsym::DirectionalSample load(const DataOptions& opt) {
  rotsym::IngestSpec spec;
  spec.path = opt.path;
  spec.format = opt.format == "lonlat" ? rotsym::InputFormat::lonlat_degrees_csv
                                       : rotsym::InputFormat::unit_vectors_csv;
  spec.tolerance = opt.tolerance;
  spec.header = opt.header;
  return rotsym::ingest(spec);
}

rotsym::Estimator estimator_from(const std::string& name) {
  if (name == "axis") return rotsym::Estimator::principal_axis;
  return rotsym::Estimator::spherical_mean;
}

std::vector<double> parse_grid(const std::string& text) {
  // "a:b:step" or a comma list
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c, ':');
    const double lo = std::stod(a), hi = std::stod(b), step = std::stod(c);
    if (!(step > 0.0) || hi < lo) throw Error(ErrorCode::invalid_argument, "bad grid '" + text + "'");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
  }
  for (const auto& piece : rotsym::split_list(text)) out.push_back(std::stod(piece));
  if (out.empty()) throw Error(ErrorCode::invalid_argument, "empty grid");
  return out;
}

std::ostream& output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw Error(ErrorCode::data, "cannot write '" + path + "'");
  return *holder;
}

int run_test(const DataOptions& data, const std::vector<std::string>& labels,
             const std::string& theta_text, const std::string& estimator,
             const std::string& score_f, const std::string& out_path) {
  const rotsym::DirectionalSample sample = load(data);
  std::vector<rotsym::Method> methods;
  for (const auto& name : labels) {
    if (name == "all") {
      for (auto m : rotsym::all_methods()) {
        if (!theta_text.empty() || rotsym::is_unspecified(m)) methods.push_back(m);
      }
      continue;
    }
    const auto m = rotsym::method_from_label(name);
    if (!m) throw Error(ErrorCode::invalid_argument, "unknown test '" + name + "'");
    methods.push_back(*m);
  }
  std::unique_ptr<rotsym::UnitVector> theta;
  if (!theta_text.empty()) {
    theta = std::make_unique<rotsym::UnitVector>(rotsym::parse_vector(theta_text));
    if (theta->dim() != sample.p()) {
      throw Error(ErrorCode::invalid_dimension, "--theta has " + std::to_string(theta->dim()) +
                                                    " coordinates, data have " +
                                                    std::to_string(sample.p()));
    }
  }
  for (auto m : methods) {
    if (!rotsym::is_unspecified(m) && !theta) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(rotsym::label(m)) + " needs --theta");
    }
  }
  const rotsym::AngularFunction f = rotsym::angular_function_from_string(score_f);
  std::vector<rotsym::TestResult> results;
  for (auto m : methods) {
    results.push_back(rotsym::run_method(m, sample, theta.get(), estimator_from(estimator), &f));
  }
  std::unique_ptr<std::ofstream> file;
  output(out_path, file) << rotsym::to_json(results).dump(2) << '\n';
  return 0;
}

struct SampleOptions {
  std::string family = "vmf";
  int p = 3;
  int n = 100;
  std::uint64_t seed = 1;
  std::string theta;
  double kappa = 0.0;
  std::string g = "vmf 2";
  std::string lambda;
  std::string mu;
  std::string out;
};

int run_sample(const SampleOptions& o) {
  if (o.n < 1) throw Error(ErrorCode::invalid_argument, "--n must be >= 1");
  const rotsym::UnitVector theta = o.theta.empty() ? rotsym::UnitVector::basis(o.p, 0)
                                                   : rotsym::UnitVector(rotsym::parse_vector(o.theta));
  const int p = theta.dim();
  rotsym::Rng rng = rotsym::substream(o.seed, {0x73616d706c65ULL});
  rotsym::Sampler draw;
  if (o.family == "vmf") {
    draw = [theta, k = o.kappa](rotsym::Rng& r) { return rotsym::sample_vmf(theta, k, r); };
  } else if (o.family == "rotsym") {
    draw = rotsym::make_sampler(
        rotsym::RotationallySymmetric(theta, rotsym::angular_function_from_string(o.g)));
  } else if (o.family == "te") {
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Identity(p - 1, p - 1);
    if (!o.lambda.empty()) {
      std::vector<double> vals;
      for (const auto& piece : rotsym::split_list(o.lambda)) vals.push_back(std::stod(piece));
      if (vals.size() == static_cast<std::size_t>(p - 1)) {
        lambda = Eigen::Map<Eigen::VectorXd>(vals.data(), p - 1).asDiagonal();
      } else if (vals.size() == static_cast<std::size_t>((p - 1) * (p - 1))) {
        lambda = Eigen::Map<Eigen::MatrixXd>(vals.data(), p - 1, p - 1);
      } else {
        throw Error(ErrorCode::invalid_shape,
                    "--lambda needs p-1 diagonal entries or (p-1)^2 matrix entries");
      }
    }
    rotsym::ShapeMatrix shape(lambda);
    if (shape.rescaled()) {
      std::cerr << "warning: shape matrix rescaled to trace " << p - 1 << '\n';
    }
    draw = rotsym::make_sampler(
        rotsym::TangentElliptical(theta, rotsym::angular_function_from_string(o.g), shape));
  } else if (o.family == "tm") {
    const rotsym::UnitVector mu = o.mu.empty() ? rotsym::UnitVector::basis(p - 1, 0)
                                               : rotsym::UnitVector(rotsym::parse_vector(o.mu));
    draw = rotsym::make_sampler(
        rotsym::TangentVmf(theta, rotsym::angular_function_from_string(o.g), mu, o.kappa));
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown family '" + o.family + "'");
  }
  Eigen::MatrixXd rows(o.n, p);
  for (int i = 0; i < o.n; ++i) rows.row(i) = draw(rng).transpose();
  std::unique_ptr<std::ofstream> file;
  rotsym::write_sample_csv(output(o.out, file), rotsym::DirectionalSample(std::move(rows)));
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& prefix, int workers) {
  const auto experiments = rotsym::experiments_from_config(rotsym::ConfigFile::load(config_path));
  for (auto experiment : experiments) {
    if (workers > 0) {
      for (auto& run : experiment.runs) run.workers = workers;
    }
    const rotsym::PowerTable table = rotsym::run_experiment(experiment);
    const std::string stem = prefix + "_" + experiment.name;
    std::ofstream csv(stem + ".csv");
    std::ofstream json(stem + ".json");
    if (!csv || !json) throw Error(ErrorCode::data, "cannot write outputs under '" + stem + "'");
    rotsym::write_power_csv(csv, table);
    rotsym::write_power_json(json, table);
    std::cerr << experiment.name << ": " << table.rows.size() << " rows, " << table.failures
              << " failed replicates -> " << stem << ".csv\n";
  }
  return 0;
}

int run_are(const std::vector<int>& ps, const std::string& eta_grid, const std::string& out_path) {
  const auto etas = parse_grid(eta_grid);
  std::unique_ptr<std::ofstream> file;
  std::ostream& out = output(out_path, file);
  out << "p,eta,are\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int p : ps) {
    for (double eta : etas) out << p << ',' << eta << ',' << rotsym::are_vmf(p, eta) << '\n';
  }
  return 0;
}

int run_describe(const DataOptions& data, const std::string& theta_text, double mass, int grid,
                 const std::string& out_path) {
  const rotsym::DirectionalSample sample = load(data);
  const rotsym::UnitVector theta(rotsym::parse_vector(theta_text));
  if (theta.dim() != sample.p()) throw Error(ErrorCode::invalid_dimension, "--theta dimension mismatch");
  const Eigen::VectorXd v = sample.rows() * theta.coords();
  const rotsym::KdeSummary summary = rotsym::describe_cosines(v, mass, grid);
  std::unique_ptr<std::ofstream> file;
  output(out_path, file) << rotsym::to_json(summary).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tests of rotational symmetry on the unit hypersphere"};
  app.require_subcommand(1);

  DataOptions test_data;
  std::vector<std::string> labels{"all"};
  std::string theta, estimator = "mean", score_f = "vmf 1", test_out;
  auto* test = app.add_subcommand("test", "run symmetry tests on a data file");
  add_data_options(test, test_data);
  test->add_option("--tests", labels,
                   "s-loc s-sc s-hyb s-hybF s-cov u-loc u-sc u-hyb u-hybF u-locf, or all")
      ->delimiter(',');
  test->add_option("--theta", theta, "symmetry axis for s- tests, e.g. 0,0,1");
  test->add_option("--estimator", estimator, "location estimator for u- tests")
      ->check(CLI::IsMember({"mean", "axis"}));
  test->add_option("--score-f", score_f, "angular function targeted by u-locf");
  test->add_option("-o,--out", test_out, "output JSON (default stdout)");

  SampleOptions so;
  auto* sample = app.add_subcommand("sample", "draw a sample to CSV");
  sample->add_option("--family", so.family, "vmf, rotsym, te or tm")
      ->check(CLI::IsMember({"vmf", "rotsym", "te", "tm"}));
  sample->add_option("-p,--dim", so.p, "ambient dimension (ignored when --theta is set)");
  sample->add_option("-n,--n", so.n, "sample size");
  sample->add_option("--seed", so.seed, "base seed");
  sample->add_option("--theta", so.theta, "location");
  sample->add_option("--kappa", so.kappa, "vmf concentration, or tangent vMF intensity for tm");
  sample->add_option("--g", so.g, "angular function: 'vmf 2', 'uniform', 'arcsin_exp 1'");
  sample->add_option("--lambda", so.lambda, "te shape: diagonal or row-major entries");
  sample->add_option("--mu", so.mu, "tm direction in R^{p-1}");
  sample->add_option("-o,--out", so.out, "output CSV (default stdout)");

  std::string config_path, prefix = "power";
  int workers = 0;
  auto* simulate = app.add_subcommand("simulate", "run Monte Carlo experiments from a config file");
  simulate->add_option("config", config_path, "experiment config")->required();
  simulate->add_option("-o,--out", prefix, "output prefix; writes PREFIX_NAME.csv and .json");
  simulate->add_option("--workers", workers, "worker threads (0: config or hardware)");

  std::vector<int> are_ps{3};
  std::string eta_grid = "0.5:20:0.5", are_out;
  auto* are = app.add_subcommand("are", "ARE of the vMF location test, closed form");
  are->add_option("-p,--dim", are_ps, "dimensions")->delimiter(',');
  are->add_option("--eta", eta_grid, "grid 'lo:hi:step' or comma list");
  are->add_option("-o,--out", are_out, "output CSV (default stdout)");

  DataOptions desc_data;
  std::string desc_theta, desc_out;
  double mass = 0.90;
  int grid = 1000;
  auto* describe = app.add_subcommand("describe", "kernel density of the cosines about theta");
  add_data_options(describe, desc_data);
  describe->add_option("--theta", desc_theta, "axis")->required();
  describe->add_option("--mass", mass, "probability of the shortest set");
  describe->add_option("--grid", grid, "grid cells on [-1, 1]");
  describe->add_option("-o,--out", desc_out, "output JSON (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*test) return run_test(test_data, labels, theta, estimator, score_f, test_out);
    if (*sample) return run_sample(so);
    if (*simulate) return run_simulate(config_path, prefix, workers);
    if (*are) return run_are(are_ps, eta_grid, are_out);
    if (*describe) return run_describe(desc_data, desc_theta, mass, grid, desc_out);
  } catch (const Error& e) {
    std::cerr << rotsym::error_json(e.code(), e.what()).dump() << '\n';
    switch (e.code()) {
      case ErrorCode::data:
      case ErrorCode::config:
      case ErrorCode::invalid_argument:
      case ErrorCode::invalid_dimension:
      case ErrorCode::invalid_shape:
        return kExitData;
      default:
        return kExitTest;
    }
  } catch (const std::exception& e) {
    std::cerr << rotsym::error_json(ErrorCode::invalid_argument, e.what()).dump() << '\n';
    return kExitData;
  }
  return 0;
}
