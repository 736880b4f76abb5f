#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lina/fol/ast.hpp"
#include "lina/llm/types.hpp"
#include "lina/prompt/templates.hpp"

namespace lina::extract {

struct PredicateDef {
  std::string name;
  int arity = 0;
  std::string gloss;

  // "E(x, y): x is east of y" — the form glosses take inside NL.
  std::string render() const;
};

enum class Polarity { Affirming, Negating };

struct Hypothesis {
  int option_index = 0;
  std::string declarative_text;
  std::optional<fol::Formula> fol;
  Polarity polarity = Polarity::Affirming;
  bool degraded = false;  // fusion fell back to question+option concatenation
};

struct ClassifiedContext {
  std::vector<std::string> logical_statements;
  std::vector<std::string> other_information;
  bool degraded = false;  // coverage was completed by the verbatim fallback
};

// Sentence-level accounting: where each context sentence landed. The
// classification boundary is where both sides are natural language, so the
// fuzzy alignment is meaningful there; LS translates logical_statements
// and NL keeps everything else, which extends the accounting to the tuple.
struct CoverageEntry {
  std::string sentence;
  enum class Slot { LogicalStatement, OtherInformation, VerbatimFallback } slot =
      Slot::LogicalStatement;
  double overlap = 0.0;
};

struct CoverageReport {
  std::vector<CoverageEntry> entries;
  // True when every sentence reached a slot; the verbatim fallback keeps
  // this true even on degraded runs, so nothing is ever silently dropped.
  bool complete = false;
};

struct ReasoningTuple {
  std::vector<fol::Formula> ls;
  std::vector<std::string> nl;  // glosses + retained context + residual + demoted lines
  std::vector<PredicateDef> predicate_defs;
  std::vector<Hypothesis> hypotheses;
  ClassifiedContext classified;
  CoverageReport coverage;
};

struct RawTask {
  std::string context;
  std::string question;
  std::vector<std::string> options;
  bool entailment_style = false;  // judge the conclusion in `question` True/False(/Unknown)
};

void validate_task(const RawTask& task);

enum class AblationMode { Full, NoFOL, NoNL, NoDeductive };

AblationMode ablation_from_string(const std::string& s);
const char* to_string(AblationMode mode);

struct ExtractionError : std::runtime_error {
  ExtractionError(std::string stage_in, const std::string& what, std::vector<std::string> transcripts_in)
      : std::runtime_error("[" + stage_in + "] " + what),
        stage(std::move(stage_in)),
        transcripts(std::move(transcripts_in)) {}
  std::string stage;
  std::vector<std::string> transcripts;  // raw request/response pairs
};

struct PipelineConfig {
  std::string model = "gpt-4o";
  double temperature = 0.3;
  int retry_budget = 3;  // retries per stage on format violations
  prompt::TemplateStore templates = prompt::TemplateStore::embedded();
};

// Context classification: labeled-line prompt format, retried on format
// violations, with a sentence-coverage check (normalized token overlap
// ≥ 0.5). After the retry budget, uncovered sentences are appended to
// other_information verbatim rather than dropped.
ClassifiedContext classify_context(const std::string& context, llm::Provider& llm,
                                   const PipelineConfig& cfg, CoverageReport* coverage = nullptr);

struct TranslationResult {
  std::vector<fol::Formula> formulas;
  std::vector<PredicateDef> predicate_defs;
  std::vector<std::string> residual_nl;  // statements the model kept as natural language
  std::vector<std::string> demoted;      // lines that never parsed; preserved verbatim
};

// FOL translation of the classified logical statements. Unparseable
// formula lines are re-prompted with the parser error appended; after the
// retry budget they are demoted to NL, never dropped.
TranslationResult translate_to_fol(const ClassifiedContext& classified, llm::Provider& llm,
                                   const PipelineConfig& cfg);

// Question-option fusion into a declarative hypothesis. Polarity comes
// from the model's judgment when parseable, otherwise from the negation
// cue lexicon applied to the question.
Hypothesis fuse_question_option(const std::string& question, const std::string& option,
                                int option_index, llm::Provider& llm, const PipelineConfig& cfg);

// FOL translation of one hypothesis, reusing the context's predicate
// inventory; new predicates are accepted and returned through new_defs.
std::optional<fol::Formula> translate_hypothesis(const std::string& text,
                                                 const std::vector<PredicateDef>& inventory,
                                                 llm::Provider& llm, const PipelineConfig& cfg,
                                                 std::vector<PredicateDef>* new_defs = nullptr);

// Three-stage orchestration under an ablation mode. NoFOL leaves LS
// empty with the context verbatim in NL; NoNL clears NL after extraction;
// NoDeductive extracts LS/NL only (the harness runs fixed-step forward
// reasoning instead of the hypothesis loop).
ReasoningTuple extract(const RawTask& task, llm::Provider& llm, AblationMode mode,
                       const PipelineConfig& cfg);

// Exposed for tests.
std::vector<std::string> split_sentences(const std::string& text);
double token_overlap(const std::string& source, const std::string& candidate);
bool question_has_negation_cue(const std::string& question);

inline constexpr double kCoverageThreshold = 0.5;

}  // namespace lina::extract
