#include "lina/extract/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

#include "lina/fol/parser.hpp"

namespace lina::extract {

std::string PredicateDef::render() const {
  static const char* vars[] = {"x", "y", "z", "u", "v", "w"};
  std::string out = name;
  if (arity > 0) {
    out += '(';
    for (int i = 0; i < arity; ++i) {
      if (i > 0) out += ", ";
      out += i < 6 ? vars[i] : ("x" + std::to_string(i));
    }
    out += ')';
  }
  out += ": ";
  out += gloss;
  return out;
}

void validate_task(const RawTask& task) {
  if (task.context.empty()) throw std::invalid_argument("task context is empty");
  if (task.question.empty()) throw std::invalid_argument("task question is empty");
  if (task.options.empty() || task.options.size() > 8) {
    throw std::invalid_argument("task needs between 1 and 8 options");
  }
  for (const auto& o : task.options) {
    if (o.empty()) throw std::invalid_argument("task option text is empty");
  }
}

AblationMode ablation_from_string(const std::string& s) {
  if (s == "full") return AblationMode::Full;
  if (s == "nofol" || s == "no-fol") return AblationMode::NoFOL;
  if (s == "nonl" || s == "no-nl") return AblationMode::NoNL;
  if (s == "nodeductive" || s == "no-deductive") return AblationMode::NoDeductive;
  throw std::invalid_argument("unknown ablation mode '" + s + "'");
}

const char* to_string(AblationMode mode) {
  switch (mode) {
    case AblationMode::Full: return "full";
    case AblationMode::NoFOL: return "nofol";
    case AblationMode::NoNL: return "nonl";
    case AblationMode::NoDeductive: return "nodeductive";
  }
  return "?";
}

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    current += c;
    const bool boundary = (c == '.' || c == '!' || c == '?' || c == ';') &&
                          (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])));
    const bool newline = c == '\n';
    if (boundary || newline) {
      while (!current.empty() && std::isspace(static_cast<unsigned char>(current.front()))) current.erase(0, 1);
      while (!current.empty() && std::isspace(static_cast<unsigned char>(current.back()))) current.pop_back();
      if (!current.empty()) out.push_back(current);
      current.clear();
    }
  }
  while (!current.empty() && std::isspace(static_cast<unsigned char>(current.front()))) current.erase(0, 1);
  while (!current.empty() && std::isspace(static_cast<unsigned char>(current.back()))) current.pop_back();
  if (!current.empty()) out.push_back(current);
  return out;
}

namespace {

std::vector<std::string> tokens_of(const std::string& text) {
  std::vector<std::string> out;
  std::string tok;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      tok += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!tok.empty()) {
      out.push_back(tok);
      tok.clear();
    }
  }
  if (!tok.empty()) out.push_back(tok);
  return out;
}

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

std::string strip_bullet(const std::string& line) {
  static const std::regex bullet(R"(^\s*(?:[-*]|\(?\d+[.\)])\s*)");
  return trim(std::regex_replace(line, bullet, "", std::regex_constants::format_first_only));
}

// One user message; the pipeline keeps prompts single-turn so replay keys
// depend only on rendered text.
llm::ChatRequest stage_request(const PipelineConfig& cfg, const std::string& tag, const std::string& prompt,
                               int step = 0, int sample_index = 0) {
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

struct ParsedClassification {
  std::vector<std::string> logical;
  std::vector<std::string> other;
  bool any() const { return !logical.empty() || !other.empty(); }
};

ParsedClassification parse_classification(const std::string& content) {
  // Accepts both the prompt's spelling and the common one.
  static const std::regex logical_line(R"(^\s*(?:[-*]\s*)?logical\s+statement\s*\d*\s*:\s*(.+)$)",
                                       std::regex_constants::icase);
  static const std::regex other_line(R"(^\s*(?:[-*]\s*)?other\s+in(?:for|fo)mation\s*\d*\s*:?\s*(.*)$)",
                                     std::regex_constants::icase);
  ParsedClassification out;
  bool in_other = false;
  for (const auto& raw : lines_of(content)) {
    std::smatch m;
    if (std::regex_match(raw, m, logical_line)) {
      out.logical.push_back(trim(m[1].str()));
      in_other = false;
      continue;
    }
    if (std::regex_match(raw, m, other_line)) {
      const std::string value = trim(m[1].str());
      if (!value.empty()) {
        out.other.push_back(value);
      } else {
        in_other = true;  // header form; following bullets belong here
      }
      continue;
    }
    if (in_other) {
      const std::string value = strip_bullet(raw);
      if (!value.empty()) out.other.push_back(value);
    }
  }
  return out;
}

}  // namespace

double token_overlap(const std::string& source, const std::string& candidate) {
  const auto src = tokens_of(source);
  if (src.empty()) return 1.0;
  const auto cand = tokens_of(candidate);
  const std::set<std::string> cand_set(cand.begin(), cand.end());
  std::size_t hit = 0;
  std::set<std::string> seen;
  for (const auto& t : src) {
    if (seen.insert(t).second && cand_set.count(t)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(seen.size());
}

bool question_has_negation_cue(const std::string& question) {
  static const std::set<std::string> cues = {"except", "not", "false", "cannot", "least"};
  for (const auto& tok : tokens_of(question)) {
    if (cues.count(tok)) return true;
  }
  return false;
}

ClassifiedContext classify_context(const std::string& context, llm::Provider& llm,
                                   const PipelineConfig& cfg, CoverageReport* coverage_out) {
  const std::string base = cfg.templates.render("context_classification", {{"context", context}});
  const auto sentences = split_sentences(context);

  std::vector<std::string> transcripts;
  std::string prompt = base;
  ParsedClassification last_parsed;
  bool parsed_anything = false;

  for (int attempt = 0; attempt <= cfg.retry_budget; ++attempt) {
    const auto response = llm.complete(stage_request(cfg, "classify", prompt, attempt));
    transcripts.push_back(transcript(prompt, response.content));
    const ParsedClassification parsed = parse_classification(response.content);
    if (!parsed.any()) {
      if (attempt == cfg.retry_budget) break;
      prompt = base +
               "\n\nYour previous reply did not follow the required output format. Use the labeled "
               "line format exactly (\"Logical Statement k: ...\", \"Other Information: ...\").";
      continue;
    }
    parsed_anything = true;
    last_parsed = parsed;

    // Coverage: every input sentence must align with one output statement.
    CoverageReport coverage;
    std::vector<std::string> uncovered;
    for (const auto& sentence : sentences) {
      double best = 0.0;
      bool best_is_logical = true;
      for (const auto& s : parsed.logical) {
        best = std::max(best, token_overlap(sentence, s));
      }
      for (const auto& s : parsed.other) {
        const double o = token_overlap(sentence, s);
        if (o > best) {
          best = o;
          best_is_logical = false;
        }
      }
      CoverageEntry entry;
      entry.sentence = sentence;
      entry.overlap = best;
      entry.slot = best_is_logical ? CoverageEntry::Slot::LogicalStatement
                                   : CoverageEntry::Slot::OtherInformation;
      if (best < kCoverageThreshold) uncovered.push_back(sentence);
      coverage.entries.push_back(std::move(entry));
    }

    if (uncovered.empty()) {
      coverage.complete = true;
      if (coverage_out) *coverage_out = std::move(coverage);
      return {parsed.logical, parsed.other, false};
    }
    if (attempt == cfg.retry_budget) {
      // Preserve the unmatched sentences verbatim; information is never
      // dropped even when the model keeps ignoring it.
      ClassifiedContext degraded{parsed.logical, parsed.other, true};
      for (auto& entry : coverage.entries) {
        if (entry.overlap < kCoverageThreshold) {
          degraded.other_information.push_back(entry.sentence);
          entry.slot = CoverageEntry::Slot::VerbatimFallback;
          entry.overlap = 1.0;
        }
      }
      coverage.complete = true;
      if (coverage_out) *coverage_out = std::move(coverage);
      return degraded;
    }
    std::string feedback = base + "\n\nYour previous reply did not account for these sentences:";
    for (const auto& s : uncovered) feedback += "\n- " + s;
    feedback += "\nEvery sentence of the problem statement must appear, possibly simplified, in your reply.";
    prompt = std::move(feedback);
  }

  (void)parsed_anything;
  throw ExtractionError("classify", "no parseable classification after " +
                                        std::to_string(cfg.retry_budget + 1) + " attempts",
                        std::move(transcripts));
}

namespace {

struct ParsedTranslation {
  std::vector<std::pair<std::string, fol::ParseError>> failures;  // line text + error
  TranslationResult result;
};

ParsedTranslation parse_translation(const std::string& content) {
  static const std::regex heading(R"(^\s*(?:\*\*)?\s*([123])[\.\)]?\s*(.*)$)");
  static const std::regex def_line(R"(^([A-Za-z_]\w*)\s*\(([^)]*)\)\s*[:-]\s*(.+)$)");
  static const std::regex def_line_0ary(R"(^([A-Za-z_]\w*)\s*:\s*(.+)$)");

  ParsedTranslation out;
  int section = 0;
  for (const auto& raw : lines_of(content)) {
    std::smatch m;
    if (std::regex_match(raw, m, heading)) {
      const std::string rest = m[2].str();
      std::string lower;
      for (char c : rest) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      const int number = m[1].str()[0] - '0';
      if (lower.find("predicate") != std::string::npos) {
        section = 1;
        continue;
      }
      // The third heading mentions "convert to FOL" too, so it must be
      // tested before the second one's keywords.
      if (lower.find("natural language") != std::string::npos) {
        section = 3;
        continue;
      }
      if (lower.find("first-order") != std::string::npos || lower.find("convert") != std::string::npos ||
          lower.find("fol") != std::string::npos) {
        section = 2;
        continue;
      }
      // A bare numbered heading keeps the prompt's section numbering.
      if (rest.empty() || rest == ":") {
        section = number;
        continue;
      }
    }
    const std::string item = strip_bullet(raw);
    if (item.empty() || section == 0) continue;
    switch (section) {
      case 1: {
        std::smatch dm;
        if (std::regex_match(item, dm, def_line)) {
          const std::string params = dm[2].str();
          int arity = 0;
          if (!trim(params).empty()) {
            arity = 1 + static_cast<int>(std::count(params.begin(), params.end(), ','));
          }
          out.result.predicate_defs.push_back({dm[1].str(), arity, trim(dm[3].str())});
        } else if (std::regex_match(item, dm, def_line_0ary) && dm[1].str().find(' ') == std::string::npos) {
          out.result.predicate_defs.push_back({dm[1].str(), 0, trim(dm[2].str())});
        }
        break;
      }
      case 2: {
        const auto parsed = fol::parse_formula(item);
        if (parsed.ok()) {
          out.result.formulas.push_back(parsed.formula());
        } else {
          out.failures.emplace_back(item, parsed.error());
        }
        break;
      }
      case 3:
        out.result.residual_nl.push_back(item);
        break;
      default:
        break;
    }
  }
  return out;
}

std::string numbered(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += std::to_string(i + 1) + ". " + items[i] + "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

}  // namespace

TranslationResult translate_to_fol(const ClassifiedContext& classified, llm::Provider& llm,
                                   const PipelineConfig& cfg) {
  if (classified.logical_statements.empty()) {
    return {};
  }
  const std::string base =
      cfg.templates.render("fol_translation", {{"statements", numbered(classified.logical_statements)}});

  std::string prompt = base;
  ParsedTranslation last;
  for (int attempt = 0; attempt <= cfg.retry_budget; ++attempt) {
    const auto response = llm.complete(stage_request(cfg, "translate", prompt, attempt));
    last = parse_translation(response.content);
    if (last.failures.empty()) {
      return std::move(last.result);
    }
    if (attempt == cfg.retry_budget) break;
    std::string feedback = base + "\n\nThese lines from your previous reply are not valid first-order logic:";
    for (const auto& [text, error] : last.failures) {
      feedback += "\n- \"" + text + "\": " + error.message();
    }
    feedback += "\nPlease re-emit the full answer with corrected expressions.";
    prompt = std::move(feedback);
  }
  // Demote what never parsed; the text is preserved verbatim.
  for (const auto& [text, error] : last.failures) {
    last.result.demoted.push_back(text);
  }
  return std::move(last.result);
}

Hypothesis fuse_question_option(const std::string& question, const std::string& option,
                                int option_index, llm::Provider& llm, const PipelineConfig& cfg) {
  static const std::regex prop_line(R"(^\s*proposition\s*:\s*(.+)$)", std::regex_constants::icase);
  static const std::regex pol_line(R"(^\s*polarity\s*:\s*(\w+)\s*$)", std::regex_constants::icase);

  const std::string base =
      cfg.templates.render("question_option_fusion", {{"question", question}, {"option", option}});
  const bool lexicon_negating = question_has_negation_cue(question);

  std::string prompt = base;
  for (int attempt = 0; attempt <= cfg.retry_budget; ++attempt) {
    const auto response = llm.complete(stage_request(cfg, "fuse", prompt, attempt, option_index));
    std::string proposition;
    std::optional<Polarity> model_polarity;
    for (const auto& raw : lines_of(response.content)) {
      std::smatch m;
      if (proposition.empty() && std::regex_match(raw, m, prop_line)) {
        proposition = trim(m[1].str());
      } else if (std::regex_match(raw, m, pol_line)) {
        std::string p;
        for (char c : m[1].str()) p += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (p == "affirming") model_polarity = Polarity::Affirming;
        if (p == "negating") model_polarity = Polarity::Negating;
      }
    }
    if (!proposition.empty() && proposition.find('?') == std::string::npos) {
      Hypothesis h;
      h.option_index = option_index;
      h.declarative_text = proposition;
      // The model's polarity judgment wins; the lexicon is the guard when
      // the model did not state one.
      h.polarity = model_polarity.value_or(lexicon_negating ? Polarity::Negating : Polarity::Affirming);
      return h;
    }
    if (attempt == cfg.retry_budget) break;
    prompt = base +
             "\n\nYour previous reply was not in the required format. Reply with a \"Proposition:\" line "
             "containing one declarative statement (no question marks) and a \"Polarity:\" line.";
  }

  // Degraded mode: concatenate and strip the interrogative form.
  std::string fallback = question + " " + option;
  std::replace(fallback.begin(), fallback.end(), '?', ' ');
  Hypothesis h;
  h.option_index = option_index;
  h.declarative_text = trim(fallback);
  h.polarity = lexicon_negating ? Polarity::Negating : Polarity::Affirming;
  h.degraded = true;
  return h;
}

std::optional<fol::Formula> translate_hypothesis(const std::string& text,
                                                 const std::vector<PredicateDef>& inventory,
                                                 llm::Provider& llm, const PipelineConfig& cfg,
                                                 std::vector<PredicateDef>* new_defs) {
  std::string input;
  if (!inventory.empty()) {
    input += "Known predicates:\n";
    for (const auto& def : inventory) input += def.render() + "\n";
    input += "\nStatement:\n";
  }
  input += text;
  const std::string base = cfg.templates.render("fol_translation", {{"statements", input}});

  std::string prompt = base;
  for (int attempt = 0; attempt <= cfg.retry_budget; ++attempt) {
    const auto response = llm.complete(stage_request(cfg, "hypothesis_fol", prompt, attempt));
    const ParsedTranslation parsed = parse_translation(response.content);
    if (!parsed.result.formulas.empty()) {
      if (new_defs) {
        for (const auto& def : parsed.result.predicate_defs) {
          const bool known = std::any_of(inventory.begin(), inventory.end(),
                                         [&](const PredicateDef& d) { return d.name == def.name; });
          if (!known) new_defs->push_back(def);
        }
      }
      return parsed.result.formulas.front();
    }
    if (parsed.failures.empty() || attempt == cfg.retry_budget) break;
    std::string feedback = base + "\n\nThese lines from your previous reply are not valid first-order logic:";
    for (const auto& [line, error] : parsed.failures) {
      feedback += "\n- \"" + line + "\": " + error.message();
    }
    prompt = std::move(feedback);
  }
  return std::nullopt;
}

namespace {

void collect_predicates(const fol::Formula& f, std::vector<std::pair<std::string, int>>& out) {
  switch (f.kind()) {
    case fol::Formula::Kind::Predicate:
      out.emplace_back(f.name(), static_cast<int>(f.args().size()));
      return;
    case fol::Formula::Kind::Not:
    case fol::Formula::Kind::Forall:
    case fol::Formula::Kind::Exists:
      collect_predicates(f.body(), out);
      return;
    default:
      collect_predicates(f.lhs(), out);
      collect_predicates(f.rhs(), out);
  }
}

// Every predicate used anywhere in the tuple must carry a gloss.
void ensure_predicate_defs(ReasoningTuple& tuple) {
  std::vector<std::pair<std::string, int>> used;
  for (const auto& f : tuple.ls) collect_predicates(f, used);
  for (const auto& h : tuple.hypotheses) {
    if (h.fol) collect_predicates(*h.fol, used);
  }
  for (const auto& [name, arity] : used) {
    const bool known = std::any_of(tuple.predicate_defs.begin(), tuple.predicate_defs.end(),
                                   [&](const PredicateDef& d) { return d.name == name; });
    if (!known) {
      tuple.predicate_defs.push_back({name, arity, "definition inferred from the predicate name"});
    }
  }
}

void assemble_nl(ReasoningTuple& tuple, const std::vector<std::string>& residual,
                 const std::vector<std::string>& demoted) {
  for (const auto& def : tuple.predicate_defs) tuple.nl.push_back(def.render());
  for (const auto& s : tuple.classified.other_information) tuple.nl.push_back(s);
  for (const auto& s : residual) tuple.nl.push_back(s);
  for (const auto& s : demoted) tuple.nl.push_back(s);
}

}  // namespace

ReasoningTuple extract(const RawTask& task, llm::Provider& llm, AblationMode mode,
                       const PipelineConfig& cfg) {
  validate_task(task);
  ReasoningTuple tuple;

  if (mode == AblationMode::NoFOL) {
    // No logic extraction: the verbatim context is the whole NL side.
    tuple.classified.other_information.push_back(task.context);
    tuple.nl.push_back(task.context);
    for (const auto& sentence : split_sentences(task.context)) {
      tuple.coverage.entries.push_back({sentence, CoverageEntry::Slot::OtherInformation, 1.0});
    }
    tuple.coverage.complete = true;
  } else {
    tuple.classified = classify_context(task.context, llm, cfg, &tuple.coverage);
    TranslationResult translated = translate_to_fol(tuple.classified, llm, cfg);
    tuple.ls = std::move(translated.formulas);
    tuple.predicate_defs = std::move(translated.predicate_defs);

    if (mode == AblationMode::NoDeductive) {
      ensure_predicate_defs(tuple);
      assemble_nl(tuple, translated.residual_nl, translated.demoted);
      return tuple;  // no hypotheses; forward reasoning replaces the loop
    }

    if (task.entailment_style) {
      Hypothesis affirm;
      affirm.option_index = 0;
      affirm.declarative_text = task.question;  // conclusion verbatim; fusion is identity here
      affirm.fol = translate_hypothesis(task.question, tuple.predicate_defs, llm, cfg,
                                        &tuple.predicate_defs);
      Hypothesis refute;
      refute.option_index = 1;
      refute.declarative_text = "It is not the case that " + task.question;
      if (affirm.fol) refute.fol = fol::negate(*affirm.fol);
      tuple.hypotheses.push_back(std::move(affirm));
      tuple.hypotheses.push_back(std::move(refute));
    } else {
      for (std::size_t i = 0; i < task.options.size(); ++i) {
        Hypothesis h = fuse_question_option(task.question, task.options[i], static_cast<int>(i), llm, cfg);
        h.fol = translate_hypothesis(h.declarative_text, tuple.predicate_defs, llm, cfg,
                                     &tuple.predicate_defs);
        tuple.hypotheses.push_back(std::move(h));
      }
    }

    ensure_predicate_defs(tuple);
    assemble_nl(tuple, translated.residual_nl, translated.demoted);
    if (mode == AblationMode::NoNL) {
      // Keep only the logic statements; predicate semantics survive only
      // through the names themselves.
      tuple.nl.clear();
      for (auto& def : tuple.predicate_defs) def.gloss.clear();
    }
    return tuple;
  }

  // NoFOL continues here: hypotheses without any FOL attachment.
  if (task.entailment_style) {
    Hypothesis affirm;
    affirm.option_index = 0;
    affirm.declarative_text = task.question;
    Hypothesis refute;
    refute.option_index = 1;
    refute.declarative_text = "It is not the case that " + task.question;
    tuple.hypotheses.push_back(std::move(affirm));
    tuple.hypotheses.push_back(std::move(refute));
  } else {
    for (std::size_t i = 0; i < task.options.size(); ++i) {
      tuple.hypotheses.push_back(
          fuse_question_option(task.question, task.options[i], static_cast<int>(i), llm, cfg));
    }
  }
  return tuple;
}

}  // namespace lina::extract
