#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lina::data {

enum class DatasetKind { ReClor, LogiQA, RuleTaker, ProofWriter, FOLIO };

DatasetKind kind_from_string(const std::string& s);
const char* to_string(DatasetKind kind);

// ReClor and LogiQA are multiple choice; the rest judge a conclusion
// against a context (entailment style).
bool is_mcq(DatasetKind kind);

enum class Truth { True, False, Unknown };

const char* to_string(Truth t);
Truth truth_from_string(const std::string& s);

// Either the index of the correct option (MCQ) or a truth judgment.
struct GoldLabel {
  enum class Family { OptionIndex, Truth };
  Family family = Family::OptionIndex;
  int option_index = -1;
  Truth truth = Truth::Unknown;

  static GoldLabel option(int index) { return {Family::OptionIndex, index, Truth::Unknown}; }
  static GoldLabel truth_label(Truth t) { return {Family::Truth, -1, t}; }
  bool operator==(const GoldLabel&) const = default;

  // Canonical rendering used in reports: "A".."H" or True/False/Unknown.
  std::string text() const;
};

struct Problem {
  std::string id;
  DatasetKind dataset = DatasetKind::FOLIO;
  std::string context;
  std::string question;               // conclusion text for entailment kinds
  std::vector<std::string> options;   // empty for entailment kinds
  GoldLabel gold;
};

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

struct LoadResult {
  std::vector<Problem> problems;
  std::vector<RecordError> errors;
};

// Loads the canonical JSONL layout for `kind` (field names follow each
// dataset's public release; see docs/formats.md). Malformed records are
// reported per line while the rest still load; ids are stable across loads.
LoadResult load(const std::string& path, DatasetKind kind);

// Permissive single-record conversion used by the `data convert`
// subcommand: maps common public field spellings onto the canonical layout.
std::optional<std::string> convert_record(const std::string& json_line, DatasetKind kind,
                                          std::string& error);

// Deterministic n-of-m subset: sorts by id, shuffles with a seeded
// explicit Fisher-Yates (stable across platforms), returns the first n
// re-sorted by id. Input order never matters.
std::vector<Problem> sample(std::vector<Problem> problems, std::size_t n, std::uint64_t seed);

}  // namespace lina::data
