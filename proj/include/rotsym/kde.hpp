#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rotsym {

struct CosineInterval {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;
};

struct ShortestSet {
  std::vector<CosineInterval> intervals;
  double threshold = 0.0;
  double mass = 0.0;
};

/// Gaussian kernel estimate of the cosine density on a cell-centred grid over
/// [-1, 1], renormalized so that sum(density) * step = 1.
struct KdeSummary {
  Eigen::VectorXd grid;
  Eigen::VectorXd density;
  double step = 0.0;
  double bandwidth = 0.0;
  std::vector<double> modes;
  double requested_mass = 0.0;
  ShortestSet shortest_set;
};

/// 0.9 min(sd, IQR/1.34) n^{-1/5}; falls back to sd when the IQR is 0.
double silverman_bandwidth(const Eigen::VectorXd& v);

/// Throws insufficient_data for n < 10 and degenerate_cosines when all
/// cosines coincide.
KdeSummary describe_cosines(const Eigen::VectorXd& v, double mass = 0.90, int grid_points = 1000);

/// Grid local maxima (strict on the left, weak on the right).
std::vector<double> grid_modes(const Eigen::VectorXd& grid, const Eigen::VectorXd& density);

/// Highest-density cells, added in decreasing order until their mass reaches
/// `mass`, merged into contiguous intervals.
ShortestSet shortest_set(const Eigen::VectorXd& grid, const Eigen::VectorXd& density, double step,
                         double mass);

}  // namespace rotsym
