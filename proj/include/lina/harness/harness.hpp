#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "lina/data/datasets.hpp"
#include "lina/llm/provider.hpp"
#include "lina/llm/trace.hpp"

namespace lina::harness {

enum class Method { Direct, CoT, CoTSC, LINA, LINA_NoFOL, LINA_NoNL, LINA_NoDeductive };

Method method_from_string(const std::string& s);
const char* to_string(Method m);
bool is_lina_method(Method m);

struct RunConfig {
  Method method = Method::LINA;
  int cotsc_samples = 10;
  data::DatasetKind dataset = data::DatasetKind::FOLIO;
  std::string dataset_path;
  int sample_size = -1;  // -1 = whole file
  std::uint64_t seed = 0;
  llm::ProviderConfig provider;
  std::string model = "gpt-4o";
  double temperature = 0.3;
  double cotsc_temperature = 1.0;
  int step_limit = 5;  // deduction step budget per hypothesis
  int judges = 3;
  std::string output_dir;     // reports + resumable per-problem records
  std::string cache_dir;      // empty = no response cache
  std::string templates_dir;  // empty = compiled-in templates
  std::string run_log;        // JSONL trace export path
  bool resume = false;
  int concurrency = 1;
};

nlohmann::json config_to_json(const RunConfig& config);

struct ProblemRecord {
  std::string id;
  std::string prediction;  // option letter, or True/False/Unknown
  std::string gold;
  bool correct = false;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  long wall_ms = 0;  // accumulated provider latency
  std::string error;
  bool operator==(const ProblemRecord&) const = default;
};

struct Report {
  std::string method;
  std::string dataset;
  nlohmann::json config_echo;
  std::string fixture_digest;  // replay runs echo the fixture hash
  std::vector<ProblemRecord> records;
  double accuracy = 0.0;
  std::map<std::string, double> per_class_recall;  // entailment kinds
  int failures = 0;
};

// Exact-match accuracy (percent, two decimals, half-up) plus per-class
// recall for truth-labeled golds.
struct ScoreResult {
  double accuracy = 0.0;
  std::map<std::string, double> per_class_recall;
};
ScoreResult score(const std::vector<std::string>& predictions, const std::vector<std::string>& golds);

double round2(double value);

// Loads the configured dataset, samples when requested, and runs.
Report run(const RunConfig& config);

// The core loop over an explicit problem list (the CLI passes a loaded
// dataset; tests pass mixed corpora). Per-problem failures are recorded
// and the run continues. With output_dir set, each finished problem is
// appended to records.jsonl, and resume=true skips problems already
// recorded there, so a crashed run recomputes nothing that finished.
Report run_problems(const RunConfig& config, const std::vector<data::Problem>& problems,
                    llm::Provider* provider_override = nullptr, llm::TraceLog* trace = nullptr);

// Canonical serialization; equal reports have equal bytes.
std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
Report load_report(const std::string& path);

// Accuracy grid, methods as rows and datasets as columns.
std::string render_table(const std::vector<Report>& reports);

// Writes report.json and report.txt under dir.
void emit_report(const Report& report, const std::string& dir);

}  // namespace lina::harness
