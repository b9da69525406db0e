#include "rotsym/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rotsym/error.hpp"

namespace rotsym {
namespace {

double quantile_sorted(const std::vector<double>& x, double q) {
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

}  // namespace

double silverman_bandwidth(const Eigen::VectorXd& v) {
  const auto n = static_cast<double>(v.size());
  if (v.size() < 2) throw Error(ErrorCode::insufficient_data, "bandwidth needs at least 2 points");
  const double mean = v.mean();
  const double sd = std::sqrt((v.array() - mean).square().sum() / (n - 1.0));
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) throw Error(ErrorCode::degenerate_cosines, "all cosines are equal");
  return 0.9 * spread * std::pow(n, -0.2);
}

std::vector<double> grid_modes(const Eigen::VectorXd& grid, const Eigen::VectorXd& density) {
  std::vector<double> modes;
  const Eigen::Index m = density.size();
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool left = i == 0 || density[i] > density[i - 1];
    const bool right = i == m - 1 || density[i] >= density[i + 1];
    if (left && right && density[i] > 0.0) modes.push_back(grid[i]);
  }
  return modes;
}

ShortestSet shortest_set(const Eigen::VectorXd& grid, const Eigen::VectorXd& density, double step,
                         double mass) {
  if (!(mass > 0.0 && mass <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "mass must lie in (0, 1]");
  }
  const Eigen::Index m = density.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return density[a] > density[b]; });
  std::vector<bool> keep(static_cast<std::size_t>(m), false);
  ShortestSet out;
  double acc = 0.0;
  for (Eigen::Index idx : order) {
    keep[static_cast<std::size_t>(idx)] = true;
    acc += density[idx] * step;
    out.threshold = density[idx];
    if (acc >= mass * (1.0 - 1e-12)) break;
  }
  // ties at the threshold belong to the set too
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!keep[static_cast<std::size_t>(i)] && density[i] == out.threshold) {
      keep[static_cast<std::size_t>(i)] = true;
      acc += density[i] * step;
    }
  }
  out.mass = acc;
  for (Eigen::Index i = 0; i < m;) {
    if (!keep[static_cast<std::size_t>(i)]) {
      ++i;
      continue;
    }
    CosineInterval iv;
    iv.lo = grid[i] - 0.5 * step;
    while (i < m && keep[static_cast<std::size_t>(i)]) {
      iv.mass += density[i] * step;
      iv.hi = grid[i] + 0.5 * step;
      ++i;
    }
    out.intervals.push_back(iv);
  }
  return out;
}

KdeSummary describe_cosines(const Eigen::VectorXd& v, double mass, int grid_points) {
  if (v.size() < 10) {
    throw Error(ErrorCode::insufficient_data,
                "describe needs at least 10 observations, got " + std::to_string(v.size()));
  }
  if (grid_points < 10) throw Error(ErrorCode::invalid_argument, "grid too coarse");
  KdeSummary s;
  s.requested_mass = mass;
  s.bandwidth = silverman_bandwidth(v);
  s.step = 2.0 / grid_points;
  s.grid.resize(grid_points);
  s.density.setZero(grid_points);
  const double h = s.bandwidth;
  for (int i = 0; i < grid_points; ++i) {
    const double t = -1.0 + (i + 0.5) * s.step;
    s.grid[i] = t;
    double sum = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const double z = (t - v[k]) / h;
      sum += std::exp(-0.5 * z * z);
    }
    s.density[i] = sum;
  }
  const double total = s.density.sum() * s.step;
  if (!(total > 0.0)) throw Error(ErrorCode::normalization, "kernel estimate vanishes on [-1, 1]");
  s.density /= total;
  s.modes = grid_modes(s.grid, s.density);
  s.shortest_set = shortest_set(s.grid, s.density, s.step, mass);
  return s;
}

}  // namespace rotsym
