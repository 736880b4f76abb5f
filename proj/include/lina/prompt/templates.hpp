#pragma once

#include <map>
#include <string>
#include <vector>

namespace lina::prompt {

// Prompt templates with {name} placeholders. The compiled-in set comes
// from prompts/*.txt; a directory can override any template by file name
// (<name>.txt).
class TemplateStore {
 public:
  // Built-in templates only.
  static TemplateStore embedded();
  // Built-in templates with per-file overrides from `dir`.
  static TemplateStore with_overrides(const std::string& dir);

  bool has(const std::string& name) const;
  std::vector<std::string> names() const;

  // Substitutes every placeholder; throws std::runtime_error on an unknown
  // template or a placeholder left unresolved.
  std::string render(const std::string& name, const std::map<std::string, std::string>& vars) const;

 private:
  std::map<std::string, std::string> templates_;
};

}  // namespace lina::prompt
