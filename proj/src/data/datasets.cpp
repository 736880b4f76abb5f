#include "lina/data/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace lina::data {

using nlohmann::json;

DatasetKind kind_from_string(const std::string& s) {
  std::string k;
  for (char c : s) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (k == "reclor") return DatasetKind::ReClor;
  if (k == "logiqa") return DatasetKind::LogiQA;
  if (k == "ruletaker") return DatasetKind::RuleTaker;
  if (k == "proofwriter") return DatasetKind::ProofWriter;
  if (k == "folio") return DatasetKind::FOLIO;
  throw std::invalid_argument("unknown dataset kind '" + s + "'");
}

const char* to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::ReClor: return "reclor";
    case DatasetKind::LogiQA: return "logiqa";
    case DatasetKind::RuleTaker: return "ruletaker";
    case DatasetKind::ProofWriter: return "proofwriter";
    case DatasetKind::FOLIO: return "folio";
  }
  return "?";
}

bool is_mcq(DatasetKind kind) {
  return kind == DatasetKind::ReClor || kind == DatasetKind::LogiQA;
}

const char* to_string(Truth t) {
  switch (t) {
    case Truth::True: return "True";
    case Truth::False: return "False";
    case Truth::Unknown: return "Unknown";
  }
  return "?";
}

Truth truth_from_string(const std::string& s) {
  std::string k;
  for (char c : s) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (k == "true") return Truth::True;
  if (k == "false") return Truth::False;
  if (k == "unknown" || k == "uncertain") return Truth::Unknown;
  throw std::invalid_argument("unknown truth label '" + s + "'");
}

std::string GoldLabel::text() const {
  if (family == Family::OptionIndex) {
    return std::string(1, static_cast<char>('A' + option_index));
  }
  return to_string(truth);
}

namespace {

std::string id_from(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  throw std::runtime_error(std::string("field '") + key + "' must be a string or integer");
}

Truth truth_from(const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? Truth::True : Truth::False;
  if (v.is_string()) return truth_from_string(v.get<std::string>());
  throw std::runtime_error("truth label must be a boolean or string");
}

Problem parse_record(const json& j, DatasetKind kind) {
  Problem p;
  p.dataset = kind;
  switch (kind) {
    case DatasetKind::ReClor: {
      p.id = id_from(j, "id_string");
      p.context = j.at("context").get<std::string>();
      p.question = j.at("question").get<std::string>();
      p.options = j.at("answers").get<std::vector<std::string>>();
      p.gold = GoldLabel::option(j.at("label").get<int>());
      break;
    }
    case DatasetKind::LogiQA: {
      p.id = id_from(j, "id");
      p.context = j.at("context").get<std::string>();
      p.question = j.at("query").get<std::string>();
      p.options = j.at("options").get<std::vector<std::string>>();
      p.gold = GoldLabel::option(j.at("correct_option").get<int>());
      break;
    }
    case DatasetKind::RuleTaker: {
      p.id = id_from(j, "id");
      p.context = j.at("context").get<std::string>();
      p.question = j.at("question").get<std::string>();
      p.gold = GoldLabel::truth_label(truth_from(j.at("answer")));
      break;
    }
    case DatasetKind::ProofWriter: {
      p.id = id_from(j, "id");
      p.context = j.at("theory").get<std::string>();
      p.question = j.at("question").get<std::string>();
      p.gold = GoldLabel::truth_label(truth_from(j.at("answer")));
      break;
    }
    case DatasetKind::FOLIO: {
      p.id = id_from(j, "example_id");
      p.context = j.at("premises").get<std::string>();
      p.question = j.at("conclusion").get<std::string>();
      p.gold = GoldLabel::truth_label(truth_from(j.at("label")));
      break;
    }
  }
  if (p.context.empty()) throw std::runtime_error("context is empty");
  if (p.question.empty()) throw std::runtime_error("question is empty");
  if (is_mcq(kind)) {
    if (p.options.size() < 2) throw std::runtime_error("multiple-choice record needs at least 2 options");
    if (p.gold.option_index < 0 || p.gold.option_index >= static_cast<int>(p.options.size())) {
      throw std::runtime_error("gold label is outside the option range");
    }
  } else if (!p.options.empty()) {
    throw std::runtime_error("entailment record must not carry options");
  }
  return p;
}

const json* find_alias(const json& j, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    if (j.contains(name)) return &j.at(name);
  }
  return nullptr;
}

}  // namespace

LoadResult load(const std::string& path, DatasetKind kind) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  LoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      result.problems.push_back(parse_record(json::parse(line), kind));
    } catch (const std::exception& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

std::optional<std::string> convert_record(const std::string& json_line, DatasetKind kind, std::string& error) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const std::exception& e) {
    error = e.what();
    return std::nullopt;
  }

  const json* id = find_alias(j, {"id_string", "id", "example_id", "story_id"});
  const json* context = find_alias(j, {"context", "passage", "theory", "premises", "text"});
  const json* question = find_alias(j, {"question", "query", "conclusion", "hypothesis"});
  const json* options = find_alias(j, {"answers", "options", "choices"});
  const json* label = find_alias(j, {"label", "answer", "correct_option", "gold_label"});
  if (!context || !question || !label) {
    error = "record lacks a recognizable context/question/label field";
    return std::nullopt;
  }

  json out;
  try {
    const std::string rid = id ? (id->is_string() ? id->get<std::string>() : std::to_string(id->get<long>()))
                               : "record";
    switch (kind) {
      case DatasetKind::ReClor:
        out = {{"id_string", rid},
               {"context", *context},
               {"question", *question},
               {"answers", options ? *options : json::array()},
               {"label", label->is_number() ? label->get<int>() : std::stoi(label->get<std::string>())}};
        break;
      case DatasetKind::LogiQA:
        out = {{"id", rid},
               {"context", *context},
               {"query", *question},
               {"options", options ? *options : json::array()},
               {"correct_option",
                label->is_number() ? label->get<int>() : std::stoi(label->get<std::string>())}};
        break;
      case DatasetKind::RuleTaker:
        out = {{"id", rid}, {"context", *context}, {"question", *question}, {"answer", *label}};
        break;
      case DatasetKind::ProofWriter:
        out = {{"id", rid}, {"theory", *context}, {"question", *question}, {"answer", *label}};
        break;
      case DatasetKind::FOLIO:
        out = {{"example_id", rid}, {"premises", *context}, {"conclusion", *question}, {"label", *label}};
        break;
    }
  } catch (const std::exception& e) {
    error = e.what();
    return std::nullopt;
  }
  return out.dump();
}

std::vector<Problem> sample(std::vector<Problem> problems, std::size_t n, std::uint64_t seed) {
  if (n > problems.size()) {
    throw std::invalid_argument("sample size " + std::to_string(n) + " exceeds population " +
                                std::to_string(problems.size()));
  }
  std::sort(problems.begin(), problems.end(), [](const Problem& a, const Problem& b) { return a.id < b.id; });
  // Explicit Fisher-Yates; std::shuffle's draw sequence is
  // implementation-defined and would break cross-platform determinism.
  std::mt19937_64 rng(seed);
  for (std::size_t i = problems.size(); i > 1; --i) {
    const std::size_t j = rng() % i;
    std::swap(problems[i - 1], problems[j]);
  }
  problems.resize(n);
  std::sort(problems.begin(), problems.end(), [](const Problem& a, const Problem& b) { return a.id < b.id; });
  return problems;
}

}  // namespace lina::data
