#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "rotsym/geometry.hpp"

namespace rotsym {

enum class InputFormat { unit_vectors_csv, lonlat_degrees_csv };

struct IngestSpec {
  std::string path;
  InputFormat format = InputFormat::unit_vectors_csv;
  /// Rows with | |x| - 1 | up to this are renormalized; must lie in (0, 0.1).
  double tolerance = 1e-3;
  bool header = false;
};

/// Reads a CSV into a sample. Errors are ErrorCode::data and name the line.
DirectionalSample ingest(const IngestSpec& spec);
DirectionalSample ingest(std::istream& in, const IngestSpec& spec);

/// Geographic degrees to (cos lat cos lon, cos lat sin lon, sin lat).
Eigen::Vector3d lonlat_to_unit(double lon_deg, double lat_deg);

/// One row per point, 17 significant digits (round-trips exactly).
void write_sample_csv(std::ostream& out, const DirectionalSample& sample);

/// "0,0,1" -> normalized vector; throws invalid_argument on junk.
Eigen::VectorXd parse_vector(const std::string& text);

}  // namespace rotsym
