#include "rotsym/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "rotsym/config.hpp"
#include "rotsym/error.hpp"

namespace rotsym {
namespace {

bool parse_double(const std::string& text, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(text, &used);
    return used == text.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void row_error(int line, const std::string& msg) {
  throw Error(ErrorCode::data, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Eigen::Vector3d lonlat_to_unit(double lon_deg, double lat_deg) {
  if (!(lat_deg >= -90.0 && lat_deg <= 90.0) || !std::isfinite(lon_deg)) {
    throw Error(ErrorCode::data, "latitude must lie in [-90, 90] degrees");
  }
  const double d = std::acos(-1.0) / 180.0;
  const double lon = lon_deg * d;
  const double lat = lat_deg * d;
  Eigen::Vector3d x(std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat));
  return x / x.norm();
}

DirectionalSample ingest(std::istream& in, const IngestSpec& spec) {
  if (!(spec.tolerance > 0.0 && spec.tolerance < 0.1)) {
    throw Error(ErrorCode::invalid_argument, "normalization tolerance must lie in (0, 0.1)");
  }
  std::vector<Eigen::VectorXd> rows;
  std::string raw;
  int line_no = 0;
  bool skipped_header = !spec.header;
  Eigen::Index width = -1;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    Eigen::VectorXd values(static_cast<Eigen::Index>(fields.size()));
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!parse_double(fields[k], values[static_cast<Eigen::Index>(k)])) {
        row_error(line_no, "field " + std::to_string(k + 1) + " is not a number: '" + fields[k] + "'");
      }
    }
    if (spec.format == InputFormat::lonlat_degrees_csv) {
      if (values.size() != 2) row_error(line_no, "expected 2 columns (lon, lat)");
      if (values[1] < -90.0 || values[1] > 90.0) row_error(line_no, "latitude outside [-90, 90]");
      rows.emplace_back(lonlat_to_unit(values[0], values[1]));
      continue;
    }
    if (width < 0) {
      width = values.size();
      if (width < 2) row_error(line_no, "need at least 2 columns");
    } else if (values.size() != width) {
      row_error(line_no, "expected " + std::to_string(width) + " columns, found " +
                             std::to_string(values.size()));
    }
    const double norm = values.norm();
    // 1e-12 absorbs decimal rounding of inputs sitting exactly on the boundary
    if (std::abs(norm - 1.0) > spec.tolerance + 1e-12) {
      std::ostringstream msg;
      msg << "row norm " << std::setprecision(6) << norm << " is off the unit sphere by more than "
          << spec.tolerance;
      row_error(line_no, msg.str());
    }
    // rows already unit to rounding are kept bit-exact
    if (std::abs(norm - 1.0) > 8 * std::numeric_limits<double>::epsilon()) values /= norm;
    rows.push_back(values);
  }
  if (rows.empty()) throw Error(ErrorCode::data, "no data rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  try {
    return DirectionalSample(std::move(m));
  } catch (const Error& e) {
    throw Error(ErrorCode::data, e.what());
  }
}

DirectionalSample ingest(const IngestSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw Error(ErrorCode::data, "cannot open '" + spec.path + "'");
  return ingest(in, spec);
}

void write_sample_csv(std::ostream& out, const DirectionalSample& sample) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i < sample.n(); ++i) {
    for (int j = 0; j < sample.p(); ++j) {
      if (j) out << ',';
      out << sample.rows()(i, j);
    }
    out << '\n';
  }
  out.precision(old);
}

Eigen::VectorXd parse_vector(const std::string& text) {
  const auto parts = split_list(text);
  Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!parse_double(parts[k], v[static_cast<Eigen::Index>(k)])) {
      throw Error(ErrorCode::invalid_argument, "not a number: '" + parts[k] + "'");
    }
  }
  if (v.size() < 2 || !(v.norm() > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "expected a nonzero vector with at least 2 entries");
  }
  return v / v.norm();
}

}  // namespace rotsym
