#pragma once

#include <string>

#include "config.hpp"
#include "json.hpp"
#include "lie.hpp"
#include "suites.hpp"
#include "volume.hpp"

namespace hvf {

nlohmann::json to_json(const IndexReport& rep);
nlohmann::json to_json(const SuiteReport& rep);
nlohmann::json to_json(const VolumeEstimate& est);
nlohmann::json to_json(const BallBoxReport& rep);
nlohmann::json to_json(const DoublingReport& rep);
nlohmann::json to_json(const WeakTypeReport& rep);
nlohmann::json config_echo(const RunConfig& cfg);

// Rows as CSV with a sorted union header; numeric formatting is fixed so the
// same run reproduces the same bytes.
std::string rows_csv(const std::vector<std::map<std::string, double>>& rows);

}  // namespace hvf
