#include <gtest/gtest.h>

#include "lina/extract/extraction.hpp"
#include "lina/fol/parser.hpp"
#include "lina/llm/scripted.hpp"

using namespace lina;
using extract::AblationMode;
using extract::PipelineConfig;
using llm::ScriptedProvider;

namespace {

const char* kEastWestContext = "A is east of B. C is west of B.";

std::string classify_reply_east_west() {
  return
      "Logical Statement 1: A is east of B\n"
      "Logical Statement 2: C is west of B\n";
}

std::string translate_reply_east_west() {
  return
      "1. Define logical predicates:\n"
      "- E(x, y): x is east of y\n"
      "- W(x, y): x is west of y\n"
      "2. Convert to first-order logic expressions:\n"
      "- E(A, B)\n"
      "- W(C, B)\n"
      "3. Natural language information that is not easy to convert to FOL:\n";
}

PipelineConfig test_config() {
  PipelineConfig cfg;
  cfg.retry_budget = 3;
  return cfg;
}

}  // namespace

TEST(SplitSentences, PeriodAndNewlineBoundaries) {
  const auto s = extract::split_sentences("A is east of B. C is west of B.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], "A is east of B.");
  EXPECT_EQ(s[1], "C is west of B.");
  EXPECT_EQ(extract::split_sentences("One line\nTwo line").size(), 2u);
  EXPECT_TRUE(extract::split_sentences("   ").empty());
}

TEST(TokenOverlap, NormalizedAndThresholded) {
  EXPECT_DOUBLE_EQ(extract::token_overlap("A is east of B.", "a is east of b"), 1.0);
  EXPECT_GE(extract::token_overlap("A is east of B", "A east B"), 0.5);
  EXPECT_LT(extract::token_overlap("the quick brown fox", "unrelated words entirely"), 0.5);
}

TEST(NegationCues, LexiconMatchesWholeWords) {
  EXPECT_TRUE(extract::question_has_negation_cue("All of the following are true EXCEPT"));
  EXPECT_TRUE(extract::question_has_negation_cue("Which statement is false?"));
  EXPECT_FALSE(extract::question_has_negation_cue("Which must be true?"));
  // "notably" must not trip the "not" cue.
  EXPECT_FALSE(extract::question_has_negation_cue("Which is notably relevant?"));
}

TEST(Classify, ParsesLabeledLines) {
  ScriptedProvider llm;
  llm.push(classify_reply_east_west());
  const auto classified = extract::classify_context(kEastWestContext, llm, test_config());
  EXPECT_EQ(classified.logical_statements,
            (std::vector<std::string>{"A is east of B", "C is west of B"}));
  EXPECT_TRUE(classified.other_information.empty());
  EXPECT_FALSE(classified.degraded);
  EXPECT_EQ(llm.calls(), 1u);
}

TEST(Classify, SingleSentenceContext) {
  ScriptedProvider llm;
  llm.push("Logical Statement 1: it rains\n");
  const auto classified = extract::classify_context("It rains.", llm, test_config());
  EXPECT_EQ(classified.logical_statements.size(), 1u);
  EXPECT_TRUE(classified.other_information.empty());
}

TEST(Classify, AcceptsPromptSpellingOfOtherInformation) {
  ScriptedProvider llm;
  llm.push(
      "Logical Statement 1: it rains\n"
      "Other Infomation: one of the statements is false\n");
  const auto classified =
      extract::classify_context("It rains. One of the statements is false.", llm, test_config());
  EXPECT_EQ(classified.other_information.size(), 1u);
}

TEST(Classify, UnlabeledProseExhaustsRetriesIntoError) {
  ScriptedProvider llm;
  for (int i = 0; i < 4; ++i) llm.push("just some freeform prose with no labels");
  try {
    extract::classify_context(kEastWestContext, llm, test_config());
    FAIL() << "expected ExtractionError";
  } catch (const extract::ExtractionError& e) {
    EXPECT_EQ(e.stage, "classify");
    EXPECT_EQ(e.transcripts.size(), 4u);  // raw transcripts carried out
  }
  EXPECT_EQ(llm.calls(), 4u);
}

TEST(Classify, CoverageFailureRetriesThenFallsBackVerbatim) {
  ScriptedProvider llm;
  // Persistently omits the second sentence, whose tokens are disjoint
  // from the first (shared function words alone can reach the 0.5
  // threshold on very short sentences).
  const std::string context = "A is east of B. Charlie dislikes spinach soup.";
  for (int i = 0; i < 4; ++i) llm.push("Logical Statement 1: A is east of B\n");
  extract::CoverageReport coverage;
  const auto classified = extract::classify_context(context, llm, test_config(), &coverage);
  EXPECT_TRUE(classified.degraded);
  ASSERT_EQ(classified.other_information.size(), 1u);
  EXPECT_EQ(classified.other_information[0], "Charlie dislikes spinach soup.");
  EXPECT_TRUE(coverage.complete);
  EXPECT_EQ(llm.calls(), 4u);
  bool fallback_seen = false;
  for (const auto& e : coverage.entries) {
    if (e.slot == extract::CoverageEntry::Slot::VerbatimFallback) fallback_seen = true;
  }
  EXPECT_TRUE(fallback_seen);
}

TEST(Translate, ParsesDefsFormulasAndResidual) {
  ScriptedProvider llm;
  llm.push(
      "1. Define logical predicates:\n"
      "- L(x): x is lying\n"
      "2. Convert to first-order logic expressions:\n"
      "- L(A) ∨ L(B)\n"
      "3. Natural language information that is not easy to convert to FOL:\n"
      "- One of the statements is false\n");
  extract::ClassifiedContext classified;
  classified.logical_statements = {"A or B lies", "One of the statements is false"};
  const auto result = extract::translate_to_fol(classified, llm, test_config());
  ASSERT_EQ(result.formulas.size(), 1u);
  EXPECT_EQ(fol::render_formula(result.formulas[0]), "L(A) ∨ L(B)");
  ASSERT_EQ(result.predicate_defs.size(), 1u);
  EXPECT_EQ(result.predicate_defs[0].name, "L");
  EXPECT_EQ(result.predicate_defs[0].arity, 1);
  ASSERT_EQ(result.residual_nl.size(), 1u);
  EXPECT_EQ(result.residual_nl[0], "One of the statements is false");
  EXPECT_TRUE(result.demoted.empty());
}

TEST(Translate, UnparseableLineRetriesWithFeedbackThenSucceeds) {
  ScriptedProvider llm;
  llm.push(
      "2. Convert to first-order logic expressions:\n"
      "- E(A, B) ∧\n");  // malformed
  llm.push(
      "2. Convert to first-order logic expressions:\n"
      "- E(A, B)\n");
  extract::ClassifiedContext classified;
  classified.logical_statements = {"A is east of B"};
  const auto result = extract::translate_to_fol(classified, llm, test_config());
  ASSERT_EQ(result.formulas.size(), 1u);
  EXPECT_TRUE(result.demoted.empty());
  EXPECT_EQ(llm.calls(), 2u);
}

TEST(Translate, ExhaustedRetriesDemoteToNaturalLanguage) {
  ScriptedProvider llm;
  for (int i = 0; i < 4; ++i) {
    llm.push(
        "2. Convert to first-order logic expressions:\n"
        "- this is not logic ∧∧\n");
  }
  extract::ClassifiedContext classified;
  classified.logical_statements = {"something"};
  const auto result = extract::translate_to_fol(classified, llm, test_config());
  EXPECT_TRUE(result.formulas.empty());
  ASSERT_EQ(result.demoted.size(), 1u);
  EXPECT_EQ(result.demoted[0], "this is not logic ∧∧");
  EXPECT_EQ(llm.calls(), 4u);
}

TEST(Translate, EmptyStatementsMakeNoCalls) {
  ScriptedProvider llm;
  const auto result = extract::translate_to_fol({}, llm, test_config());
  EXPECT_TRUE(result.formulas.empty());
  EXPECT_EQ(llm.calls(), 0u);
}

TEST(Fuse, ParsesPropositionAndPolarity) {
  ScriptedProvider llm;
  llm.push(
      "Proposition: A is east of C\n"
      "Polarity: Affirming\n");
  const auto h = extract::fuse_question_option("Determine if A is east of C", "true", 0, llm, test_config());
  EXPECT_EQ(h.declarative_text, "A is east of C");
  EXPECT_EQ(h.polarity, extract::Polarity::Affirming);
  EXPECT_FALSE(h.degraded);
}

TEST(Fuse, ExceptQuestionNegatesViaLexiconWhenModelSilent) {
  ScriptedProvider llm;
  llm.push("Proposition: option three fails the condition\n");
  const auto h = extract::fuse_question_option("All of the following are true EXCEPT", "option three", 2,
                                               llm, test_config());
  EXPECT_EQ(h.polarity, extract::Polarity::Negating);
  EXPECT_EQ(h.option_index, 2);
}

TEST(Fuse, ModelPolarityOverridesLexicon) {
  ScriptedProvider llm;
  llm.push(
      "Proposition: the argument cannot be weakened by option one\n"
      "Polarity: Affirming\n");
  // Lexicon sees "cannot" but the model's judgment wins.
  const auto h = extract::fuse_question_option("Which option cannot weaken the argument?", "option one", 0,
                                               llm, test_config());
  EXPECT_EQ(h.polarity, extract::Polarity::Affirming);
}

TEST(Fuse, FormatFailureFallsBackToConcatenation) {
  ScriptedProvider llm;
  for (int i = 0; i < 4; ++i) llm.push("no anchored line here?");
  const auto h = extract::fuse_question_option("Which is true?", "option two", 1, llm, test_config());
  EXPECT_TRUE(h.degraded);
  EXPECT_EQ(h.declarative_text, "Which is true  option two");
  EXPECT_EQ(llm.calls(), 4u);
}

TEST(Extract, FullPipelineEastWest) {
  ScriptedProvider llm;
  llm.push_tagged("classify", classify_reply_east_west());
  llm.push_tagged("translate", translate_reply_east_west());
  llm.push_tagged("hypothesis_fol",
                  "2. Convert to first-order logic expressions:\n- E(A, C)\n");
  extract::RawTask task;
  task.context = kEastWestContext;
  task.question = "A is east of C.";
  task.options = {"True", "False"};
  task.entailment_style = true;

  const auto tuple = extract::extract(task, llm, AblationMode::Full, test_config());
  ASSERT_EQ(tuple.ls.size(), 2u);
  EXPECT_EQ(fol::render_formula(tuple.ls[0]), "E(A, B)");
  EXPECT_EQ(fol::render_formula(tuple.ls[1]), "W(C, B)");
  ASSERT_EQ(tuple.hypotheses.size(), 2u);
  ASSERT_TRUE(tuple.hypotheses[0].fol.has_value());
  EXPECT_EQ(fol::render_formula(*tuple.hypotheses[0].fol), "E(A, C)");
  ASSERT_TRUE(tuple.hypotheses[1].fol.has_value());
  EXPECT_EQ(fol::render_formula(*tuple.hypotheses[1].fol), "¬E(A, C)");
  EXPECT_EQ(tuple.hypotheses[1].declarative_text, "It is not the case that A is east of C.");
  // Predicate glosses live in NL.
  ASSERT_GE(tuple.nl.size(), 2u);
  EXPECT_EQ(tuple.nl[0], "E(x, y): x is east of y");
  EXPECT_TRUE(tuple.coverage.complete);
}

TEST(Extract, NoFolModeKeepsContextVerbatim) {
  ScriptedProvider llm;  // no extraction calls at all for entailment tasks
  extract::RawTask task;
  task.context = kEastWestContext;
  task.question = "A is east of C.";
  task.options = {"True", "False"};
  task.entailment_style = true;
  const auto tuple = extract::extract(task, llm, AblationMode::NoFOL, test_config());
  EXPECT_TRUE(tuple.ls.empty());
  ASSERT_EQ(tuple.nl.size(), 1u);
  EXPECT_EQ(tuple.nl[0], kEastWestContext);
  EXPECT_EQ(tuple.hypotheses.size(), 2u);
  EXPECT_FALSE(tuple.hypotheses[0].fol.has_value());
  EXPECT_EQ(llm.calls(), 0u);
  EXPECT_TRUE(tuple.coverage.complete);
}

TEST(Extract, NoNlModeClearsNaturalLanguage) {
  ScriptedProvider llm;
  llm.push(classify_reply_east_west());
  llm.push(translate_reply_east_west());
  llm.push("2. Convert to first-order logic expressions:\n- E(A, C)\n");
  extract::RawTask task;
  task.context = kEastWestContext;
  task.question = "A is east of C.";
  task.options = {"True", "False"};
  task.entailment_style = true;
  const auto tuple = extract::extract(task, llm, AblationMode::NoNL, test_config());
  EXPECT_EQ(tuple.ls.size(), 2u);
  EXPECT_TRUE(tuple.nl.empty());
  for (const auto& def : tuple.predicate_defs) EXPECT_TRUE(def.gloss.empty());
}

TEST(Extract, NoDeductiveModeExtractsNoHypotheses) {
  ScriptedProvider llm;
  llm.push(classify_reply_east_west());
  llm.push(translate_reply_east_west());
  extract::RawTask task;
  task.context = kEastWestContext;
  task.question = "A is east of C.";
  task.options = {"True", "False"};
  task.entailment_style = true;
  const auto tuple = extract::extract(task, llm, AblationMode::NoDeductive, test_config());
  EXPECT_EQ(tuple.ls.size(), 2u);
  EXPECT_TRUE(tuple.hypotheses.empty());
  EXPECT_EQ(llm.calls(), 2u);
}

TEST(Extract, FourOptionTaskYieldsFourHypothesesInOrder) {
  ScriptedProvider llm;
  llm.push(classify_reply_east_west());
  llm.push(translate_reply_east_west());
  for (int i = 0; i < 4; ++i) {
    llm.push("Proposition: option " + std::to_string(i + 1) + " holds\nPolarity: Affirming\n");
    llm.push("2. Convert to first-order logic expressions:\n- H" + std::to_string(i + 1) + "(a)\n");
  }
  extract::RawTask task;
  task.context = kEastWestContext;
  task.question = "Which option holds?";
  task.options = {"one", "two", "three", "four"};
  const auto tuple = extract::extract(task, llm, AblationMode::Full, test_config());
  ASSERT_EQ(tuple.hypotheses.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(tuple.hypotheses[i].option_index, i);
    EXPECT_EQ(tuple.hypotheses[i].declarative_text, "option " + std::to_string(i + 1) + " holds");
  }
}

TEST(Extract, EveryUsedPredicateGetsAGloss) {
  ScriptedProvider llm;
  llm.push("Logical Statement 1: p implies q\n");
  // Defines nothing but uses two predicates.
  llm.push("2. Convert to first-order logic expressions:\n- P(a) → Q(a)\n");
  llm.push("2. Convert to first-order logic expressions:\n- Q(a)\n");
  extract::RawTask task;
  task.context = "p implies q.";
  task.question = "q holds.";
  task.options = {"True", "False"};
  task.entailment_style = true;
  const auto tuple = extract::extract(task, llm, AblationMode::Full, test_config());
  std::set<std::string> names;
  for (const auto& def : tuple.predicate_defs) {
    EXPECT_FALSE(def.gloss.empty());
    names.insert(def.name);
  }
  EXPECT_TRUE(names.count("P"));
  EXPECT_TRUE(names.count("Q"));
}

TEST(Extract, RejectsInvalidTasks) {
  ScriptedProvider llm;
  extract::RawTask task;
  task.context = "ctx";
  task.question = "q";
  EXPECT_THROW(extract::extract(task, llm, AblationMode::Full, test_config()), std::invalid_argument);
  task.options = std::vector<std::string>(9, "x");
  EXPECT_THROW(extract::extract(task, llm, AblationMode::Full, test_config()), std::invalid_argument);
}
