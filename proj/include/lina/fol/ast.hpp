#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace lina::fol {

// True for names matching [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view s);

// First-order term: constant, variable, or function application.
// Immutable; copies share structure.
class Term {
 public:
  enum class Kind { Constant, Variable, Function };

  static Term constant(std::string name);
  static Term variable(std::string name);
  static Term function(std::string name, std::vector<Term> args);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// First-order formula over predicates, the usual connectives, and
// quantifiers. Immutable value type; structural equality.
class Formula {
 public:
  enum class Kind { Predicate, Not, And, Or, Implies, Forall, Exists };

  // A predicate with no arguments doubles as a propositional atom.
  static Formula predicate(std::string name, std::vector<Term> args = {});
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  Kind kind() const { return node_->kind; }
  // Predicate name, or the bound variable of a quantifier.
  const std::string& name() const;
  const std::vector<Term>& args() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  // Operand of Not, or the scope of a quantifier.
  const Formula& body() const;

  bool is_binary() const;
  bool is_quantifier() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node {
    Kind kind;
    std::string name;              // Predicate name / quantified variable
    std::vector<Term> args;        // Predicate only
    std::vector<Formula> children; // 1 for Not/quantifiers, 2 for binaries
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Negation with double-negation collapse: negate(¬g) = g.
Formula negate(const Formula& f);

// Canonical surface rendering. parse_formula(render_formula(f)) == f for
// every well-formed closed formula.
std::string render_formula(const Formula& f);
std::string render_term(const Term& t);

}  // namespace lina::fol
