#include "lina/harness/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <regex>
#include <set>
#include <thread>

#include "lina/deduce/deduction.hpp"
#include "lina/extract/extraction.hpp"
#include "lina/llm/cache.hpp"
#include "lina/llm/fixture.hpp"

namespace lina::harness {

namespace fs = std::filesystem;
using nlohmann::json;

Method method_from_string(const std::string& s) {
  std::string k;
  for (char c : s) {
    if (c == '_') c = '-';
    k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (k == "direct") return Method::Direct;
  if (k == "cot") return Method::CoT;
  if (k == "cotsc" || k == "cot-sc") return Method::CoTSC;
  if (k == "lina") return Method::LINA;
  if (k == "lina-nofol" || k == "lina-no-fol") return Method::LINA_NoFOL;
  if (k == "lina-nonl" || k == "lina-no-nl") return Method::LINA_NoNL;
  if (k == "lina-nodeductive" || k == "lina-no-deductive") return Method::LINA_NoDeductive;
  throw std::invalid_argument("unknown method '" + s + "'");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Direct: return "direct";
    case Method::CoT: return "cot";
    case Method::CoTSC: return "cotsc";
    case Method::LINA: return "lina";
    case Method::LINA_NoFOL: return "lina-nofol";
    case Method::LINA_NoNL: return "lina-nonl";
    case Method::LINA_NoDeductive: return "lina-nodeductive";
  }
  return "?";
}

bool is_lina_method(Method m) {
  return m == Method::LINA || m == Method::LINA_NoFOL || m == Method::LINA_NoNL ||
         m == Method::LINA_NoDeductive;
}

json config_to_json(const RunConfig& config) {
  return {
      {"method", to_string(config.method)},
      {"cotsc_samples", config.cotsc_samples},
      {"dataset", data::to_string(config.dataset)},
      {"dataset_path", config.dataset_path},
      {"sample_size", config.sample_size},
      {"seed", config.seed},
      {"backend", llm::to_string(config.provider.backend)},
      {"model", config.model},
      {"temperature", config.temperature},
      {"cotsc_temperature", config.cotsc_temperature},
      {"step_limit", config.step_limit},
      {"judges", config.judges},
  };
}

double round2(double value) {
  return std::floor(value * 100.0 + 0.5) / 100.0;
}

ScoreResult score(const std::vector<std::string>& predictions, const std::vector<std::string>& golds) {
  if (predictions.size() != golds.size()) {
    throw std::invalid_argument("predictions and golds must have equal length");
  }
  ScoreResult result;
  if (golds.empty()) return result;
  std::size_t correct = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_class;  // gold -> (correct, total)
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const bool hit = predictions[i] == golds[i];
    if (hit) ++correct;
    const bool truth_label = golds[i] == "True" || golds[i] == "False" || golds[i] == "Unknown";
    if (truth_label) {
      auto& [c, t] = per_class[golds[i]];
      ++t;
      if (hit) ++c;
    }
  }
  result.accuracy = round2(100.0 * static_cast<double>(correct) / static_cast<double>(golds.size()));
  for (const auto& [label, ct] : per_class) {
    result.per_class_recall[label] =
        round2(100.0 * static_cast<double>(ct.first) / static_cast<double>(ct.second));
  }
  return result;
}

namespace {

// Per-problem token/latency accounting around the shared provider chain.
class AccountingProvider : public llm::Provider {
 public:
  explicit AccountingProvider(llm::Provider& inner) : inner_(inner) {}
  llm::ChatResponse complete(const llm::ChatRequest& request) override {
    llm::ChatResponse r = inner_.complete(request);
    prompt_tokens += r.usage.prompt;
    completion_tokens += r.usage.completion;
    wall_ms += r.latency.count();
    return r;
  }
  std::string name() const override { return inner_.name(); }
  long prompt_tokens = 0;
  long completion_tokens = 0;
  long wall_ms = 0;

 private:
  llm::Provider& inner_;
};

std::string letter(int index) {
  return std::string(1, static_cast<char>('A' + index));
}

// Entailment prompts present truth values as lettered options; RuleTaker
// is two-way, the other entailment sets are three-way.
std::vector<std::string> effective_options(const data::Problem& problem) {
  if (data::is_mcq(problem.dataset)) return problem.options;
  if (problem.dataset == data::DatasetKind::RuleTaker) return {"True", "False"};
  return {"True", "False", "Unknown"};
}

std::string options_block(const std::vector<std::string>& options) {
  std::string out;
  for (std::size_t i = 0; i < options.size(); ++i) {
    out += letter(static_cast<int>(i)) + ". " + options[i] + "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

// Anchored answer extraction: the last "Answer:" line wins; accepts a
// letter or a literal True/False/Unknown. Returns -1 when unparseable.
int parse_answer_index(const std::string& content, const std::vector<std::string>& options) {
  static const std::regex answer_line(R"(^.*\banswer\b\s*[:=]?\s*[\("']*([A-Za-z]+)[\)."']*\s*$)",
                                      std::regex_constants::icase);
  std::string value;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_match(line, m, answer_line)) value = m[1].str();
  }
  if (value.empty()) return -1;
  if (value.size() == 1) {
    const int idx = std::toupper(static_cast<unsigned char>(value[0])) - 'A';
    if (idx >= 0 && idx < static_cast<int>(options.size())) return idx;
    return -1;
  }
  for (std::size_t i = 0; i < options.size(); ++i) {
    std::string lower_value, lower_option;
    for (char c : value) lower_value += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (char c : options[i]) lower_option += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower_value == lower_option) return static_cast<int>(i);
  }
  return -1;
}

struct Pipeline {
  const RunConfig& config;
  extract::PipelineConfig extract_cfg;

  std::string prompt_answer(llm::Provider& llm, const data::Problem& problem, const std::string& tpl,
                            const std::string& tag, double temperature, int sample_index,
                            const std::map<std::string, std::string>& extra_vars = {}) const {
    const auto options = effective_options(problem);
    std::map<std::string, std::string> vars = {
        {"context", problem.context},
        {"question", problem.question},
        {"options", options_block(options)},
    };
    for (const auto& [k, v] : extra_vars) vars[k] = v;
    llm::ChatRequest req;
    req.model = config.model;
    req.temperature = temperature;
    req.messages = {{"user", extract_cfg.templates.render(tpl, vars)}};
    req.tag = tag;
    req.sample_index = sample_index;
    const auto response = llm.complete(req);
    const int idx = parse_answer_index(response.content, options);
    if (idx < 0) return "";
    return data::is_mcq(problem.dataset) ? letter(idx) : options[idx];
  }

  std::string solve_direct(llm::Provider& llm, const data::Problem& problem, bool chain_of_thought) const {
    const std::string prediction = prompt_answer(
        llm, problem, chain_of_thought ? "cot_answer" : "direct_answer",
        chain_of_thought ? "cot" : "direct", config.temperature, 0);
    if (prediction.empty()) throw std::runtime_error("no parseable answer in the reply");
    return prediction;
  }

  std::string solve_cotsc(llm::Provider& llm, const data::Problem& problem) const {
    std::map<std::string, int> votes;
    int parseable = 0;
    for (int s = 0; s < config.cotsc_samples; ++s) {
      const std::string answer =
          prompt_answer(llm, problem, "cot_answer", "cotsc", config.cotsc_temperature, s);
      if (answer.empty()) continue;  // discarded from the vote
      ++parseable;
      ++votes[answer];
    }
    if (parseable == 0) throw std::runtime_error("no parseable answer in any sample");
    // Majority; ties break to the lowest option index.
    const auto options = effective_options(problem);
    std::string best;
    int best_votes = -1;
    for (std::size_t i = 0; i < options.size(); ++i) {
      const std::string key = data::is_mcq(problem.dataset) ? letter(static_cast<int>(i)) : options[i];
      const auto it = votes.find(key);
      const int v = it == votes.end() ? 0 : it->second;
      if (v > best_votes) {
        best = key;
        best_votes = v;
      }
    }
    return best;
  }

  extract::RawTask task_for(const data::Problem& problem) const {
    extract::RawTask task;
    task.context = problem.context;
    task.question = problem.question;
    task.entailment_style = !data::is_mcq(problem.dataset);
    task.options = effective_options(problem);
    return task;
  }

  std::string solve_lina(llm::Provider& llm, const data::Problem& problem,
                         extract::AblationMode mode) const {
    const extract::RawTask task = task_for(problem);
    const extract::ReasoningTuple tuple = extract::extract(task, llm, mode, extract_cfg);

    if (mode == extract::AblationMode::NoDeductive) {
      return solve_forward(llm, problem, tuple);
    }

    std::vector<deduce::Verdict> verdicts;
    for (const auto& hypothesis : tuple.hypotheses) {
      verdicts.push_back(
          deduce::run_hypothetical_deduction(tuple, hypothesis, config.step_limit, llm, extract_cfg));
      if (verdicts.back().outcome == deduce::VerdictOutcome::Aborted) {
        throw std::runtime_error("deduction aborted: " + verdicts.back().error);
      }
    }

    if (task.entailment_style) {
      return entailment_prediction(llm, task, tuple, verdicts);
    }
    const deduce::FinalSelection selection =
        deduce::judge_processes(task, verdicts, tuple.hypotheses, llm, config.judges, extract_cfg);
    return letter(selection.chosen_option);
  }

  // Dual-hypothesis entailment outcome: the conclusion hypothesis and its
  // negation vote through their verdicts; both Inconclusive means Unknown.
  std::string entailment_prediction(llm::Provider& llm, const extract::RawTask& task,
                                    const extract::ReasoningTuple& tuple,
                                    const std::vector<deduce::Verdict>& verdicts) const {
    using deduce::VerdictOutcome;
    const VerdictOutcome affirm = verdicts[0].outcome;
    const VerdictOutcome negate = verdicts[1].outcome;
    const bool affirm_true = affirm == VerdictOutcome::Validated || negate == VerdictOutcome::Disproved;
    const bool affirm_false = negate == VerdictOutcome::Validated || affirm == VerdictOutcome::Disproved;
    if (affirm_true && !affirm_false) return "True";
    if (affirm_false && !affirm_true) return "False";
    if (!affirm_true && !affirm_false) return "Unknown";
    // Conflicting evidence: the judges arbitrate between True and False.
    const deduce::FinalSelection selection =
        deduce::judge_processes(task, verdicts, tuple.hypotheses, llm, config.judges, extract_cfg);
    return selection.chosen_option == 0 ? "True" : "False";
  }

  // Fixed-step forward reasoning: exactly step_limit forward inferences,
  // then one answer prompt that sees the derived chain. Never touches the
  // hypothesis loop.
  std::string solve_forward(llm::Provider& llm, const data::Problem& problem,
                            const extract::ReasoningTuple& tuple) const {
    std::vector<std::string> ls_items;
    for (const auto& f : tuple.ls) ls_items.push_back(fol::render_formula(f));
    std::string ls_block;
    for (std::size_t i = 0; i < ls_items.size(); ++i) {
      ls_block += "LS" + std::to_string(i + 1) + ": " + ls_items[i] + "\n";
    }
    if (ls_block.empty()) ls_block = "(none)";
    std::string nl_block;
    for (std::size_t i = 0; i < tuple.nl.size(); ++i) {
      nl_block += "NL" + std::to_string(i + 1) + ": " + tuple.nl[i] + "\n";
    }
    if (nl_block.empty()) nl_block = "(none)";

    std::vector<std::string> derived;
    for (int i = 1; i <= config.step_limit; ++i) {
      std::string derived_block = derived.empty() ? "(none yet)" : "";
      for (std::size_t d = 0; d < derived.size(); ++d) {
        derived_block += std::to_string(d + 1) + ". " + derived[d] + "\n";
      }
      llm::ChatRequest req;
      req.model = config.model;
      req.temperature = config.temperature;
      req.messages = {{"user", extract_cfg.templates.render("forward_reasoner",
                                                            {{"ls", ls_block},
                                                             {"nl", nl_block},
                                                             {"derived", derived_block}})}};
      req.tag = "forward";
      req.step = i;
      const auto response = llm.complete(req);
      static const std::regex conclusion_line(R"(^\s*conclusion\s*:\s*(.+)$)", std::regex_constants::icase);
      std::string conclusion;
      std::istringstream in(response.content);
      std::string line;
      while (std::getline(in, line)) {
        std::smatch m;
        if (std::regex_match(line, m, conclusion_line)) conclusion = m[1].str();
      }
      derived.push_back(conclusion.empty() ? response.content : conclusion);
    }

    std::string derived_block;
    for (std::size_t d = 0; d < derived.size(); ++d) {
      derived_block += std::to_string(d + 1) + ". " + derived[d] + "\n";
    }
    const std::string prediction = prompt_answer(llm, problem, "forward_final_answer", "forward_answer",
                                                 config.temperature, 0, {{"derived", derived_block}});
    if (prediction.empty()) throw std::runtime_error("no parseable answer in the forward reply");
    return prediction;
  }

  std::string solve(llm::Provider& llm, const data::Problem& problem) const {
    switch (config.method) {
      case Method::Direct: return solve_direct(llm, problem, false);
      case Method::CoT: return solve_direct(llm, problem, true);
      case Method::CoTSC: return solve_cotsc(llm, problem);
      case Method::LINA: return solve_lina(llm, problem, extract::AblationMode::Full);
      case Method::LINA_NoFOL: return solve_lina(llm, problem, extract::AblationMode::NoFOL);
      case Method::LINA_NoNL: return solve_lina(llm, problem, extract::AblationMode::NoNL);
      case Method::LINA_NoDeductive:
        return solve_lina(llm, problem, extract::AblationMode::NoDeductive);
    }
    throw std::logic_error("unreachable method");
  }
};

json record_to_json(const ProblemRecord& r) {
  return {
      {"id", r.id},
      {"prediction", r.prediction},
      {"gold", r.gold},
      {"correct", r.correct},
      {"prompt_tokens", r.prompt_tokens},
      {"completion_tokens", r.completion_tokens},
      {"wall_ms", r.wall_ms},
      {"error", r.error},
  };
}

ProblemRecord record_from_json(const json& j) {
  ProblemRecord r;
  r.id = j.at("id").get<std::string>();
  r.prediction = j.at("prediction").get<std::string>();
  r.gold = j.at("gold").get<std::string>();
  r.correct = j.at("correct").get<bool>();
  r.prompt_tokens = j.at("prompt_tokens").get<long>();
  r.completion_tokens = j.at("completion_tokens").get<long>();
  r.wall_ms = j.at("wall_ms").get<long>();
  r.error = j.at("error").get<std::string>();
  return r;
}

}  // namespace

Report run_problems(const RunConfig& config, const std::vector<data::Problem>& problems,
                    llm::Provider* provider_override, llm::TraceLog* trace) {
  std::unique_ptr<llm::Provider> owned;
  llm::Provider* base = provider_override;
  if (!base) {
    owned = llm::make_provider(config.provider);
    base = owned.get();
  }
  std::unique_ptr<llm::TracingProvider> traced;
  if (trace) {
    traced = std::make_unique<llm::TracingProvider>(*trace, *base);
    base = traced.get();
  }
  std::unique_ptr<llm::ResponseCache> cache;
  std::unique_ptr<llm::CachingProvider> cached;
  if (!config.cache_dir.empty()) {
    cache = std::make_unique<llm::ResponseCache>(config.cache_dir);
    cached = std::make_unique<llm::CachingProvider>(*cache, *base);
    base = cached.get();
  }

  Pipeline pipeline{config, {}};
  pipeline.extract_cfg.model = config.model;
  pipeline.extract_cfg.temperature = config.temperature;
  if (!config.templates_dir.empty()) {
    pipeline.extract_cfg.templates = prompt::TemplateStore::with_overrides(config.templates_dir);
  }

  // Resumability: reuse finished records, recompute nothing behind them.
  std::map<std::string, ProblemRecord> records;
  fs::path records_path;
  if (!config.output_dir.empty()) {
    fs::create_directories(config.output_dir);
    records_path = fs::path(config.output_dir) / "records.jsonl";
    if (config.resume && fs::exists(records_path)) {
      std::ifstream in(records_path);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        ProblemRecord r = record_from_json(json::parse(line));
        records.emplace(r.id, std::move(r));
      }
    } else if (fs::exists(records_path)) {
      fs::remove(records_path);
    }
  }

  std::vector<const data::Problem*> pending;
  for (const auto& p : problems) {
    if (!records.count(p.id)) pending.push_back(&p);
  }

  std::mutex sink_mutex;
  std::ofstream sink;
  if (!records_path.empty()) {
    sink.open(records_path, std::ios::app);
  }
  auto emit_record = [&](ProblemRecord record) {
    std::lock_guard lock(sink_mutex);
    if (sink.is_open()) {
      sink << record_to_json(record).dump() << '\n';
      sink.flush();
    }
    records.emplace(record.id, std::move(record));
  };

  auto work = [&](const data::Problem& problem) {
    AccountingProvider accounting(*base);
    ProblemRecord record;
    record.id = problem.id;
    record.gold = problem.gold.text();
    try {
      record.prediction = pipeline.solve(accounting, problem);
      record.correct = record.prediction == record.gold;
    } catch (const std::exception& e) {
      record.error = e.what();
    }
    record.prompt_tokens = accounting.prompt_tokens;
    record.completion_tokens = accounting.completion_tokens;
    record.wall_ms = accounting.wall_ms;
    emit_record(std::move(record));
  };

  const int workers = std::max(1, std::min<int>(config.concurrency, static_cast<int>(pending.size())));
  if (workers <= 1) {
    for (const auto* p : pending) work(*p);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= pending.size()) return;
          work(*pending[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  Report report;
  report.method = to_string(config.method);
  report.dataset = data::to_string(config.dataset);
  report.config_echo = config_to_json(config);
  if (config.provider.backend == llm::Backend::Replay && !config.provider.fixture_path.empty()) {
    report.fixture_digest = llm::fixture_digest(config.provider.fixture_path);
  }
  std::vector<std::string> predictions, golds;
  for (const auto& p : problems) {
    const auto it = records.find(p.id);
    if (it == records.end()) continue;
    report.records.push_back(it->second);
    if (it->second.error.empty()) {
      predictions.push_back(it->second.prediction);
    } else {
      predictions.push_back("");  // failed problems never score as correct
      ++report.failures;
    }
    golds.push_back(it->second.gold);
  }
  const ScoreResult s = score(predictions, golds);
  report.accuracy = s.accuracy;
  report.per_class_recall = s.per_class_recall;
  return report;
}

Report run(const RunConfig& config) {
  auto loaded = data::load(config.dataset_path, config.dataset);
  if (!loaded.errors.empty() && loaded.problems.empty()) {
    throw std::runtime_error("no loadable records in " + config.dataset_path);
  }
  std::vector<data::Problem> problems = std::move(loaded.problems);
  if (config.sample_size >= 0) {
    problems = data::sample(std::move(problems), static_cast<std::size_t>(config.sample_size), config.seed);
  }
  std::unique_ptr<llm::TraceLog> trace;
  if (!config.run_log.empty()) {
    trace = std::make_unique<llm::TraceLog>(config.run_log);
  }
  Report report = run_problems(config, problems, nullptr, trace.get());
  if (!config.output_dir.empty()) {
    emit_report(report, config.output_dir);
  }
  return report;
}

std::string report_to_json(const Report& report) {
  json records = json::array();
  for (const auto& r : report.records) records.push_back(record_to_json(r));
  const json j = {
      {"report_version", 1},
      {"method", report.method},
      {"dataset", report.dataset},
      {"config", report.config_echo},
      {"fixture_digest", report.fixture_digest},
      {"accuracy", report.accuracy},
      {"per_class_recall", report.per_class_recall},
      {"failures", report.failures},
      {"records", std::move(records)},
  };
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("report_version").get<int>() != 1) {
    throw std::runtime_error("unsupported report version");
  }
  Report report;
  report.method = j.at("method").get<std::string>();
  report.dataset = j.at("dataset").get<std::string>();
  report.config_echo = j.at("config");
  report.fixture_digest = j.at("fixture_digest").get<std::string>();
  report.accuracy = j.at("accuracy").get<double>();
  report.failures = j.at("failures").get<int>();
  for (const auto& [k, v] : j.at("per_class_recall").items()) {
    report.per_class_recall[k] = v.get<double>();
  }
  for (const auto& r : j.at("records")) report.records.push_back(record_from_json(r));
  return report;
}

Report load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

std::string render_table(const std::vector<Report>& reports) {
  static const std::vector<std::string> method_order = {
      "direct", "cot", "cotsc", "lina-nofol", "lina-nonl", "lina-nodeductive", "lina"};
  std::vector<std::string> datasets;
  for (const auto& r : reports) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) {
      datasets.push_back(r.dataset);
    }
  }
  std::vector<std::string> methods;
  for (const auto& m : method_order) {
    for (const auto& r : reports) {
      if (r.method == m && std::find(methods.begin(), methods.end(), m) == methods.end()) {
        methods.push_back(m);
      }
    }
  }
  for (const auto& r : reports) {  // methods outside the known order go last
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }

  auto cell = [&](const std::string& method, const std::string& dataset) -> std::string {
    for (const auto& r : reports) {
      if (r.method == method && r.dataset == dataset) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", r.accuracy);
        return buf;
      }
    }
    return "-";
  };

  const int method_width = 18, col_width = 13;
  std::ostringstream out;
  out << std::left << std::setw(method_width) << "Method";
  for (const auto& d : datasets) out << std::right << std::setw(col_width) << d;
  out << '\n';
  for (const auto& m : methods) {
    out << std::left << std::setw(method_width) << m;
    for (const auto& d : datasets) out << std::right << std::setw(col_width) << cell(m, d);
    out << '\n';
  }
  return out.str();
}

void emit_report(const Report& report, const std::string& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "report.json");
    out << report_to_json(report);
  }
  {
    std::ofstream out(fs::path(dir) / "report.txt");
    out << render_table({report});
  }
}

}  // namespace lina::harness
