#include "rotsym/report.hpp"

#include <algorithm>
#include <cmath>

namespace rotsym {
namespace {

double latitude_deg(double v) {
  return std::asin(std::clamp(v, -1.0, 1.0)) * 180.0 / std::acos(-1.0);
}

}  // namespace

nlohmann::json to_json(const TestResult& r) {
  nlohmann::json j;
  j["method"] = std::string(label(r.method));
  j["statistic"] = r.statistic;
  if (r.df) {
    j["df"] = *r.df;
    j["reference"] = "chi2";
  } else {
    j["df"] = nullptr;
    j["reference"] = "normal";
  }
  j["p_value"] = r.p_value;
  j["n"] = r.n;
  j["p"] = r.p;
  j["theta"] = std::vector<double>(r.theta.data(), r.theta.data() + r.theta.size());
  j["theta_mode"] = r.theta_mode;
  j["clamped"] = r.clamped;
  return j;
}

nlohmann::json to_json(const std::vector<TestResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  return arr;
}

nlohmann::json to_json(const KdeSummary& s) {
  nlohmann::json j;
  j["bandwidth"] = s.bandwidth;
  j["step"] = s.step;
  j["grid"] = std::vector<double>(s.grid.data(), s.grid.data() + s.grid.size());
  j["density"] = std::vector<double>(s.density.data(), s.density.data() + s.density.size());
  j["modes"] = nlohmann::json::array();
  for (double m : s.modes) j["modes"].push_back({{"cosine", m}, {"latitude_deg", latitude_deg(m)}});
  nlohmann::json set;
  set["requested_mass"] = s.requested_mass;
  set["mass"] = s.shortest_set.mass;
  set["threshold"] = s.shortest_set.threshold;
  set["intervals"] = nlohmann::json::array();
  for (const auto& iv : s.shortest_set.intervals) {
    set["intervals"].push_back({{"cosine", {iv.lo, iv.hi}},
                                {"latitude_deg", {latitude_deg(iv.lo), latitude_deg(iv.hi)}},
                                {"mass", iv.mass}});
  }
  j["shortest_set"] = set;
  return j;
}

nlohmann::json error_json(ErrorCode code, const std::string& message) {
  return {{"error", std::string(to_string(code))}, {"message", message}};
}

}  // namespace rotsym
