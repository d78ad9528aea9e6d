#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "germdet/request.hpp"

namespace germdet {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

std::string engine_version();

struct RunResult {
  Json report;
  int exit_code = 0;
};

// Never throws for engine failures; they become error documents (exit 1).
RunResult run(const AnalysisRequest& request);

Json error_document(const std::exception& e, int* exit_code);

// Human-readable rendering of a report document.
std::string render_text(const Json& report);

struct CliResult {
  int exit_code = 0;
  std::string output;
};

// Parses, runs and renders; handles batch corpora.
CliResult run_cli(const std::vector<std::string>& args);

// Batch over corpus text: request lines (with # comments) or a JSON list of
// command strings / token arrays.
CliResult run_batch(const std::string& corpus_text, bool json, bool timing, int jobs);

}  // namespace germdet
