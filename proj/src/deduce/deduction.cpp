#include "lina/deduce/deduction.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "lina/fol/parser.hpp"

namespace lina::deduce {

const char* to_string(CheckResult r) {
  switch (r) {
    case CheckResult::Contradicts: return "Contradicts";
    case CheckResult::Confirms: return "Confirms";
    case CheckResult::Neither: return "Neither";
  }
  return "?";
}

const char* to_string(VerdictOutcome v) {
  switch (v) {
    case VerdictOutcome::Validated: return "Validated";
    case VerdictOutcome::Disproved: return "Disproved";
    case VerdictOutcome::Inconclusive: return "Inconclusive";
    case VerdictOutcome::Aborted: return "Aborted";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::string lower(const std::string& s) {
  std::string out;
  for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string numbered_block(const std::string& prefix, const std::vector<std::string>& items) {
  if (items.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += prefix + std::to_string(i + 1) + ": " + items[i] + "\n";
  }
  out.pop_back();
  return out;
}

std::string rendered_ls(const ReasoningTuple& tuple) {
  std::vector<std::string> items;
  for (const auto& f : tuple.ls) items.push_back(fol::render_formula(f));
  return numbered_block("LS", items);
}

std::string rendered_nl(const ReasoningTuple& tuple) {
  return numbered_block("NL", tuple.nl);
}

llm::ChatRequest stage_request(const PipelineConfig& cfg, const std::string& tag, int step,
                               const std::string& prompt, int sample_index = 0) {
  llm::ChatRequest req;
  req.model = cfg.model;
  req.temperature = cfg.temperature;
  req.messages = {{"user", prompt}};
  req.tag = tag;
  req.step = step;
  req.sample_index = sample_index;
  return req;
}

std::string transcript(const std::string& prompt, const std::string& response) {
  return "PROMPT:\n" + prompt + "\nRESPONSE:\n" + response;
}

// A conclusion that mentions logical operator syntax is meant to be FOL
// and must parse; anything else is legitimate prose.
bool looks_like_logic(const std::string& text) {
  static const char* ops[] = {"∧", "∨", "→", "¬", "∀",
                              "∃", "->",     "=>",     "&",      "|",
                              "~"};
  for (const char* op : ops) {
    if (text.find(op) != std::string::npos) return true;
  }
  return false;
}

std::optional<std::string> value_after(const std::string& content, const std::string& label) {
  const std::regex line(R"(^\s*)" + label + R"(\s*:\s*(.*)$)", std::regex_constants::icase);
  std::optional<std::string> out;
  for (const auto& raw : lines_of(content)) {
    std::smatch m;
    if (std::regex_match(raw, m, line)) {
      const std::string value = trim(m[1].str());
      if (!value.empty()) out = value;  // last occurrence wins
    }
  }
  return out;
}

std::vector<std::string> premise_refs_of(const std::string& content) {
  static const std::regex ref(R"((LS|NL)\s*#?\s*(\d+))", std::regex_constants::icase);
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(content.begin(), content.end(), ref); it != std::sregex_iterator();
       ++it) {
    std::string token = lower((*it)[1].str()) == "ls" ? "LS" : "NL";
    token += (*it)[2].str();
    if (std::find(out.begin(), out.end(), token) == out.end()) out.push_back(token);
  }
  return out;
}

std::string hypothesis_display(const CurrentHypothesis& h) {
  if (h.fol) return h.text + " [" + fol::render_formula(*h.fol) + "]";
  return h.text;
}

}  // namespace

DeductionStep deduce_step(const ReasoningTuple& tuple, const CurrentHypothesis& hypothesis,
                          int step_index, llm::Provider& llm, const PipelineConfig& cfg) {
  const std::string base = cfg.templates.render(
      "deductive_reasoner", {{"ls", rendered_ls(tuple)},
                             {"nl", rendered_nl(tuple)},
                             {"hypothesis", hypothesis_display(hypothesis)}});

  std::string prompt = base;
  DeductionStep step;
  step.index = step_index;
  std::string last_response;
  for (int attempt = 0; attempt <= cfg.retry_budget; ++attempt) {
    const auto response = llm.complete(stage_request(cfg, "deduce", step_index, prompt, attempt));
    last_response = response.content;
    step.raw_transcript = transcript(prompt, response.content);
    step.premise_refs = premise_refs_of(response.content);
    step.rule_hint = value_after(response.content, "Rule").value_or("");

    const auto conclusion = value_after(response.content, "Conclusion");
    if (conclusion) {
      const auto parsed = fol::parse_formula(*conclusion);
      if (parsed.ok()) {
        step.conclusion_fol = parsed.formula();
        step.conclusion_text = fol::render_formula(parsed.formula());
        return step;
      }
      if (!looks_like_logic(*conclusion)) {
        step.conclusion_text = *conclusion;  // plain-prose conclusion
        return step;
      }
      if (attempt < cfg.retry_budget) {
        prompt = base + "\n\nYour previous conclusion \"" + *conclusion +
                 "\" is not valid first-order logic (" + parsed.error().message() +
                 "). Re-emit your answer with a well-formed Conclusion line.";
        continue;
      }
      // Retries exhausted on a logic-shaped conclusion: keep the text.
      step.conclusion_text = *conclusion;
      step.degraded = true;
      return step;
    }
    if (attempt < cfg.retry_budget) {
      prompt = base + "\n\nYour previous reply had no \"Conclusion:\" line. Follow the reply format exactly.";
      continue;
    }
  }
  step.conclusion_text = trim(last_response);
  step.degraded = true;
  return step;
}

namespace {

CheckOutcome supervisor_check(const ReasoningTuple& tuple, const DeductionStep& step,
                              const CurrentHypothesis& hypothesis, llm::Provider& llm,
                              const PipelineConfig& cfg) {
  const std::string base = cfg.templates.render(
      "supervisor", {{"ls", rendered_ls(tuple)},
                     {"nl", rendered_nl(tuple)},
                     {"hypothesis", hypothesis_display(hypothesis)},
                     {"reasoning", step.conclusion_text}});

  std::string prompt = base;
  for (int attempt = 0; attempt <= cfg.retry_budget; ++attempt) {
    const auto response = llm.complete(stage_request(cfg, "supervise", step.index, prompt, attempt));
    const auto decision = value_after(response.content, "Decision");
    if (decision) {
      const std::string d = lower(*decision);
      CheckOutcome outcome;
      outcome.raw_transcript = transcript(prompt, response.content);
      SupervisorAction action;
      action.rationale = value_after(response.content, "Rationale").value_or("");
      if (d.find("refut") != std::string::npos) {
        action.kind = SupervisorAction::Kind::StopRefuted;
        outcome.result = CheckResult::Contradicts;
      } else if (d.find("prov") != std::string::npos) {
        action.kind = SupervisorAction::Kind::StopProven;
        outcome.result = CheckResult::Confirms;
      } else if (d.find("continue") != std::string::npos) {
        outcome.result = CheckResult::Neither;
        const auto adjusted = value_after(response.content, "Adjusted Conclusion");
        const auto reset = value_after(response.content, "Reset");
        if (adjusted) {
          action.kind = SupervisorAction::Kind::Adjust;
          action.adjusted_conclusion = *adjusted;
        } else if (reset && lower(*reset).find("yes") != std::string::npos) {
          action.kind = SupervisorAction::Kind::Reset;
        } else {
          action.kind = SupervisorAction::Kind::Accept;
        }
      } else {
        goto malformed;
      }
      outcome.supervisor = std::move(action);
      return outcome;
    }
  malformed:
    if (attempt < cfg.retry_budget) {
      prompt = base +
               "\n\nYour previous reply was not in the required format. Reply with a \"Decision:\" line "
               "containing REFUTED, PROVEN, or CONTINUE.";
    }
  }
  // Conservative default: keep reasoning.
  CheckOutcome outcome;
  outcome.result = CheckResult::Neither;
  SupervisorAction action;
  action.kind = SupervisorAction::Kind::Accept;
  action.rationale = "supervisor reply unparseable; continuing";
  outcome.supervisor = std::move(action);
  return outcome;
}

}  // namespace

CheckOutcome check_step(const ReasoningTuple& tuple, const DeductionStep& step,
                        const CurrentHypothesis& hypothesis, llm::Provider& llm,
                        const PipelineConfig& cfg) {
  if (step.conclusion_fol) {
    std::vector<fol::Formula> premises = tuple.ls;
    if (hypothesis.fol) premises.push_back(*hypothesis.fol);
    const fol::Entailment verdict = fol::entails(premises, *step.conclusion_fol);
    if (verdict == fol::Entailment::Contradicted) {
      return {CheckResult::Contradicts, true, std::nullopt, ""};
    }
    if (verdict == fol::Entailment::Entailed) {
      return {CheckResult::Confirms, true, std::nullopt, ""};
    }
  }
  return supervisor_check(tuple, step, hypothesis, llm, cfg);
}

Verdict run_hypothetical_deduction(const ReasoningTuple& tuple, const extract::Hypothesis& hypothesis,
                                   int step_limit, llm::Provider& llm, const PipelineConfig& cfg) {
  if (step_limit < 1) throw std::invalid_argument("step limit must be at least 1");
  const CurrentHypothesis original{hypothesis.declarative_text, hypothesis.fol};
  CurrentHypothesis current = original;
  Verdict verdict;
  try {
    for (int i = 1; i <= step_limit; ++i) {
      DeductionStep step = deduce_step(tuple, current, i, llm, cfg);
      CheckOutcome check = check_step(tuple, step, current, llm, cfg);
      verdict.steps_used = i;

      const CheckResult result = check.result;
      const std::optional<SupervisorAction> action = check.supervisor;
      verdict.trace.push_back({std::move(step), std::move(check)});
      const TraceEvent& event = verdict.trace.back();

      if (result == CheckResult::Contradicts) {
        verdict.outcome = VerdictOutcome::Disproved;
        return verdict;
      }
      if (result == CheckResult::Confirms) {
        verdict.outcome = VerdictOutcome::Validated;
        return verdict;
      }

      // Neither: apply the supervisor directive, then H ← C.
      if (action && action->kind == SupervisorAction::Kind::Reset) {
        current = original;
        continue;
      }
      if (action && action->kind == SupervisorAction::Kind::Adjust) {
        const auto parsed = fol::parse_formula(action->adjusted_conclusion);
        const bool safe =
            parsed.ok() && fol::entails(tuple.ls, parsed.formula()) != fol::Entailment::Contradicted;
        if (event.step.conclusion_fol ? safe : true) {
          if (parsed.ok()) {
            current = {fol::render_formula(parsed.formula()), parsed.formula()};
          } else {
            current = {action->adjusted_conclusion, std::nullopt};
          }
          continue;
        }
        current = original;  // unsafe adjustment is treated as a reset
        continue;
      }
      current = {event.step.conclusion_text, event.step.conclusion_fol};
    }
    verdict.outcome = VerdictOutcome::Inconclusive;
    verdict.steps_used = step_limit;
    return verdict;
  } catch (const llm::TransportError& e) {
    verdict.outcome = VerdictOutcome::Aborted;
    verdict.error = e.what();
    return verdict;
  }
}

bool verdict_supports_option(const extract::Hypothesis& hypothesis, const Verdict& verdict) {
  if (hypothesis.polarity == extract::Polarity::Negating) {
    return verdict.outcome == VerdictOutcome::Disproved;
  }
  return verdict.outcome == VerdictOutcome::Validated;
}

namespace {

std::string trace_summary(const Verdict& verdict) {
  std::string out;
  for (const auto& event : verdict.trace) {
    out += "  step " + std::to_string(event.step.index) + ": " + event.step.conclusion_text;
    if (!event.step.rule_hint.empty()) out += " (" + event.step.rule_hint + ")";
    out += " -> " + std::string(to_string(event.check.result)) + "\n";
  }
  out += "  verdict: " + std::string(to_string(verdict.outcome));
  return out;
}

int match_option(const std::string& reply, const std::vector<std::string>& options) {
  const std::string normalized = lower(trim(reply));
  if (normalized.empty()) return -1;
  // Exact or containing text match first (the prompt asks for the option's
  // content), then the strongest token overlap, then a letter form.
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (normalized == lower(options[i])) return static_cast<int>(i);
  }
  int best = -1;
  double best_overlap = 0.0;
  for (std::size_t i = 0; i < options.size(); ++i) {
    const double o = extract::token_overlap(options[i], reply);
    if (o > best_overlap) {
      best_overlap = o;
      best = static_cast<int>(i);
    }
  }
  if (best_overlap >= 0.5) return best;
  static const std::regex letter(R"(^\(?([a-h])\)?$|^option\s+([a-h1-8])$)", std::regex_constants::icase);
  std::smatch m;
  if (std::regex_match(normalized, m, letter)) {
    const std::string l = m[1].matched ? m[1].str() : m[2].str();
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(l[0])));
    const int idx = std::isdigit(static_cast<unsigned char>(c)) ? c - '1' : c - 'a';
    if (idx >= 0 && idx < static_cast<int>(options.size())) return idx;
  }
  return -1;
}

}  // namespace

FinalSelection judge_processes(const extract::RawTask& task, const std::vector<Verdict>& verdicts,
                               const std::vector<extract::Hypothesis>& hypotheses, llm::Provider& llm,
                               int judge_count, const PipelineConfig& cfg) {
  if (verdicts.empty() || verdicts.size() != hypotheses.size()) {
    throw std::invalid_argument("judge_processes needs one verdict per hypothesis");
  }
  FinalSelection selection;
  selection.per_option_verdicts = verdicts;

  std::vector<int> supported;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    if (verdict_supports_option(hypotheses[i], verdicts[i])) supported.push_back(static_cast<int>(i));
  }
  if (supported.size() == 1) {
    selection.chosen_option = supported[0];
    selection.vote_tally[supported[0]] = 1;
    return selection;
  }

  // Several (or zero) supported options: the judges review each analysis.
  selection.judges_consulted = true;
  std::string analysis;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    analysis += "Option " + std::to_string(i + 1) + ": " + task.options[i] + "\n";
    analysis += "Hypothesis: " + hypotheses[i].declarative_text + "\n";
    analysis += trace_summary(verdicts[i]) + "\n\n";
  }
  const std::string prompt = cfg.templates.render(
      "process_judgment",
      {{"context", task.context}, {"question", task.question}, {"options_analysis", trim(analysis)}});

  for (int j = 0; j < judge_count; ++j) {
    llm::ChatRequest req;
    req.model = cfg.model;
    req.temperature = cfg.temperature;
    req.messages = {{"user", prompt}};
    req.tag = "judge";
    req.sample_index = j;  // independent samples at one temperature
    const auto response = llm.complete(req);
    selection.judge_transcripts.push_back(transcript(prompt, response.content));
    const auto reply = value_after(response.content, "Correct Option");
    if (!reply) continue;
    const int idx = match_option(*reply, task.options);
    if (idx >= 0) ++selection.vote_tally[idx];
  }

  if (selection.vote_tally.empty()) {
    // Every judge reply was unparseable: verdict priority, lowest index.
    selection.fallback_used = true;
    auto rank = [](VerdictOutcome v) {
      switch (v) {
        case VerdictOutcome::Validated: return 0;
        case VerdictOutcome::Inconclusive: return 1;
        case VerdictOutcome::Disproved: return 2;
        case VerdictOutcome::Aborted: return 3;
      }
      return 4;
    };
    int best = 0;
    for (std::size_t i = 1; i < verdicts.size(); ++i) {
      if (rank(verdicts[i].outcome) < rank(verdicts[best].outcome)) best = static_cast<int>(i);
    }
    selection.chosen_option = best;
    return selection;
  }

  // Majority, ties to the lowest option index (map iteration is ordered).
  int best_option = -1, best_votes = -1;
  for (const auto& [option, votes] : selection.vote_tally) {
    if (votes > best_votes) {
      best_option = option;
      best_votes = votes;
    }
  }
  selection.chosen_option = best_option;
  return selection;
}

}  // namespace lina::deduce
