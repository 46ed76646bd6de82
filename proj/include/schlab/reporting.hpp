#pragma once

#include <string>

#include "json.hpp"

#include "schlab/config.hpp"
#include "schlab/experiments.hpp"

namespace schlab {

nlohmann::json config_to_json(const RunConfig& config);

nlohmann::json rate_report_to_json(const RateReport& report);
nlohmann::json density_report_to_json(const DensityReport& report);

std::string rate_report_csv(const RateReport& report, const std::string& level_name);
std::string density_report_csv(const DensityReport& report);

// {version, command, config, ...}; every artifact embeds both.
nlohmann::json make_artifact(Command command, const RunConfig& config);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace schlab
