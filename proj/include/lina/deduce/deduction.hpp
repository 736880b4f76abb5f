#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lina/extract/extraction.hpp"
#include "lina/fol/skeleton.hpp"
#include "lina/llm/types.hpp"

namespace lina::deduce {

// One derived conclusion plus its provenance; the raw transcript is always
// retained for audit.
struct DeductionStep {
  int index = 1;
  std::vector<std::string> premise_refs;  // "LS1", "NL2", ... as cited
  std::optional<fol::Formula> conclusion_fol;
  std::string conclusion_text;  // rendered formula, or the raw text conclusion
  std::string rule_hint;
  std::string raw_transcript;
  bool degraded = false;  // conclusion never parsed despite looking like logic
};

struct SupervisorAction {
  enum class Kind { Accept, Adjust, Reset, StopRefuted, StopProven };
  Kind kind = Kind::Accept;
  std::string adjusted_conclusion;  // Adjust only
  std::string rationale;
};

enum class CheckResult { Contradicts, Confirms, Neither };

const char* to_string(CheckResult r);

struct CheckOutcome {
  CheckResult result = CheckResult::Neither;
  bool syntactic = false;  // decided by the truth-table layer, no LLM call
  std::optional<SupervisorAction> supervisor;
  std::string raw_transcript;
};

enum class VerdictOutcome { Validated, Disproved, Inconclusive, Aborted };

const char* to_string(VerdictOutcome v);

struct TraceEvent {
  DeductionStep step;
  CheckOutcome check;
};

struct Verdict {
  VerdictOutcome outcome = VerdictOutcome::Inconclusive;
  std::vector<TraceEvent> trace;
  int steps_used = 0;
  std::string error;  // Aborted only
};

// The hypothesis as it evolves through the loop (H ← C updates).
struct CurrentHypothesis {
  std::string text;
  std::optional<fol::Formula> fol;
};

using extract::PipelineConfig;
using extract::ReasoningTuple;

// One deduction step: prompts the model for exactly one new conclusion.
// Logic-shaped conclusions must parse (retried with parser feedback);
// plain-prose conclusions are accepted as text.
DeductionStep deduce_step(const ReasoningTuple& tuple, const CurrentHypothesis& hypothesis,
                          int step_index, llm::Provider& llm, const PipelineConfig& cfg);

// Two-layer check. Layer 1 (syntactic, no LLM): entails(LS ∪ {H}, C) —
// Contradicted ⇒ Contradicts, Entailed ⇒ Confirms. Layer 2 (semantic):
// the supervisor call, whose verdict is parsed from the fixed answer
// schema; its Adjust/Reset directives ride along in the outcome. Format
// failures degrade to Neither so reasoning continues.
CheckOutcome check_step(const ReasoningTuple& tuple, const DeductionStep& step,
                        const CurrentHypothesis& hypothesis, llm::Provider& llm,
                        const PipelineConfig& cfg);

// The hypothetical-deductive loop: deduce then check, stopping on
// Contradicts (Disproved) or Confirms (Validated), otherwise updating
// H ← C until the step limit exhausts (Inconclusive). A supervisor Reset
// restores the original hypothesis without refunding steps; an Adjust is
// honored only when the replacement parses and is not syntactically
// contradicted by LS.
Verdict run_hypothetical_deduction(const ReasoningTuple& tuple, const extract::Hypothesis& hypothesis,
                                   int step_limit, llm::Provider& llm, const PipelineConfig& cfg);

struct FinalSelection {
  int chosen_option = 0;
  std::vector<Verdict> per_option_verdicts;
  std::vector<std::string> judge_transcripts;
  std::map<int, int> vote_tally;
  bool judges_consulted = false;
  bool fallback_used = false;  // every judge reply was unparseable
};

// Whether a verdict supports its option: Validated for affirming
// hypotheses; Disproved supports a negating (EXCEPT-style) hypothesis.
bool verdict_supports_option(const extract::Hypothesis& hypothesis, const Verdict& verdict);

// Final selection. A unique supported option wins outright with no LLM
// call; otherwise j independent judge calls vote, majority wins, ties
// break to the lowest option index. If no judge reply parses, fall back to
// verdict priority (Validated > Inconclusive > Disproved, lowest index).
FinalSelection judge_processes(const extract::RawTask& task, const std::vector<Verdict>& verdicts,
                               const std::vector<extract::Hypothesis>& hypotheses, llm::Provider& llm,
                               int judge_count, const PipelineConfig& cfg);

}  // namespace lina::deduce
