#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "latentcl/checks.hpp"
#include "latentcl/experiments.hpp"

namespace latentcl {

/// 17 significant digits; NaN and infinities render as "NA".
std::string format_number(double v);

/// records.csv column names, in order.
const std::vector<std::string>& record_columns();
std::string record_row(const TrialRecord& rec);
/// Header plus one row per record, '\n' line endings.
std::string records_csv(const std::vector<TrialRecord>& records);

/// Inverse of records_csv. wall_time is not part of the format and reads back as 0.
/// Throws IoError on a malformed document.
std::vector<TrialRecord> parse_records_csv(std::istream& in);

const std::vector<std::string>& aggregate_columns();
std::string aggregate_csv(const AggregateReport& report);

/// Log-log line plot of the median risks and the median forgetting ratio against p.
std::string sweep_svg(const AggregateReport& report);

struct RunTiming {
  double checks_seconds = 0.0;
  double sweep_seconds = 0.0;
  double total_seconds = 0.0;
  double mean_trial_seconds = 0.0;
};

nlohmann::json check_to_json(const CheckResult& check);

/// summary.json document: per-check status, the sweep overview, timing and the
/// configuration echo.
nlohmann::json summary_json(const std::vector<CheckResult>& checks, const SweepResult& sweep,
                            const nlohmann::json& config_echo, const RunTiming& timing);

/// Writes `content` to `path`, replacing it. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace latentcl
