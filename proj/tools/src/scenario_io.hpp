#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "crmadapt/bounds/bounds.hpp"
#include "crmadapt/sim/scenario.hpp"

namespace crmadapt::cli {

using json = nlohmann::json;

// Throws ConfigError carrying the offending field path ("plant.den[2]").
sim::Scenario scenario_from_json(const json& j);
sim::Scenario load_scenario(const std::string& path);

json transfer_to_json(const lintf::RationalTransfer& w);
json scenario_to_json(const sim::Scenario& sc);
json bound_to_json(const bounds::BoundReport& r);

}  // namespace crmadapt::cli
