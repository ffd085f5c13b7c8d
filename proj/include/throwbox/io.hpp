#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "throwbox/dtn.hpp"

namespace throwbox {

/// time,place_coverage_mean,place_coverage_sem,agent_coverage_mean,agent_coverage_sem
void write_series_csv(std::ostream& out, const EnsembleResult& result);
nlohmann::ordered_json series_json(const EnsembleResult& result);

/// Single run as a table with zero standard errors.
EnsembleResult as_ensemble(const CoverageSeries& series);

/// Shortest text that reads back as the same double.
std::string format_number(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace throwbox
