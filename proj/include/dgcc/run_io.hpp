#pragma once

#include <filesystem>
#include <string>

#include "dgcc/framework.hpp"

namespace dgcc {

// JSON object whose keys mirror RunConfig fields. Unknown keys are rejected so
// typos surface early. Fields absent from the text keep the values in `base`.
RunConfig parse_run_config(const std::string& json_text, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});
std::string run_config_to_json(const RunConfig& cfg);

// One JSON object per round.
std::string history_to_jsonl(const std::vector<RoundSnapshot>& history);

struct RunSummaryInfo {
    std::string instance;
    std::string algorithm;  // "dgcc" or "global-nsga2"
    double wall_ms = 0.0;
};

std::string summary_to_json(const RunResult& result, const RunConfig& cfg, const RunSummaryInfo& info);

// Writes archive.csv, history.jsonl and summary.json into `dir`.
void write_run_outputs(const std::filesystem::path& dir, const RunResult& result, const RunConfig& cfg,
                       const RunSummaryInfo& info);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace dgcc
