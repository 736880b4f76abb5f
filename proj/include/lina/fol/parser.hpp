#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "lina/fol/ast.hpp"

namespace lina::fol {

// Parse failure as recoverable data; language-model output is untrusted
// and a bad formula is an expected event, not a fault.
struct ParseError {
  std::size_t position = 0;  // byte offset into the input
  std::string expected;
  std::string found;

  std::string message() const;
};

class ParseResult {
 public:
  ParseResult(Formula f) : value_(std::move(f)) {}
  ParseResult(ParseError e) : value_(std::move(e)) {}

  bool ok() const { return std::holds_alternative<Formula>(value_); }
  explicit operator bool() const { return ok(); }

  const Formula& formula() const { return std::get<Formula>(value_); }
  const ParseError& error() const { return std::get<ParseError>(value_); }

 private:
  std::variant<Formula, ParseError> value_;
};

// Parses the surface grammar documented in docs/grammar.md: connectives
// ∧ ∨ → ¬ and quantifiers ∀ ∃, plus the ASCII aliases & && | || -> => ~ !
// and the keywords forall/exists. Precedence ¬ > ∧ > ∨ > →, with → right
// associative. Identifiers bound by an enclosing quantifier parse as
// variables; all other identifiers in term position parse as constants.
ParseResult parse_formula(std::string_view text);

}  // namespace lina::fol
