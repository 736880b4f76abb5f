#include "lina/prompt/templates.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lina::prompt {

namespace detail {
const std::map<std::string, std::string>& embedded_templates();
}

TemplateStore TemplateStore::embedded() {
  TemplateStore store;
  store.templates_ = detail::embedded_templates();
  return store;
}

TemplateStore TemplateStore::with_overrides(const std::string& dir) {
  TemplateStore store = embedded();
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("template directory not found: " + dir);
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path());
    std::ostringstream buf;
    buf << in.rdbuf();
    store.templates_[entry.path().stem().string()] = buf.str();
  }
  return store;
}

bool TemplateStore::has(const std::string& name) const {
  return templates_.count(name) != 0;
}

std::vector<std::string> TemplateStore::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : templates_) out.push_back(name);
  return out;
}

std::string TemplateStore::render(const std::string& name, const std::map<std::string, std::string>& vars) const {
  const auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw std::runtime_error("unknown prompt template: " + name);
  }
  const std::string& text = it->second;
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '{') {
      out += c;
      ++i;
      continue;
    }
    // Placeholders are {lower_snake_case}; anything else passes through.
    std::size_t j = i + 1;
    while (j < text.size() && (std::islower(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
    if (j > i + 1 && j < text.size() && text[j] == '}') {
      const std::string key = text.substr(i + 1, j - i - 1);
      const auto var = vars.find(key);
      if (var == vars.end()) {
        throw std::runtime_error("template '" + name + "' placeholder {" + key + "} was not supplied");
      }
      out += var->second;
      i = j + 1;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

}  // namespace lina::prompt
