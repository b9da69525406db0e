#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "rotsym/error.hpp"
#include "rotsym/kde.hpp"
#include "rotsym/symmetry_tests.hpp"

namespace rotsym {

nlohmann::json to_json(const TestResult& r);
nlohmann::json to_json(const std::vector<TestResult>& results);
/// Adds latitude (degrees, asin of the cosine) alongside every cosine.
nlohmann::json to_json(const KdeSummary& s);
nlohmann::json error_json(ErrorCode code, const std::string& message);

}  // namespace rotsym
