#include "lina/fol/ast.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace lina::fol {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

namespace {

void require_identifier(const std::string& name, const char* what) {
  if (!is_identifier(name)) {
    throw std::invalid_argument(std::string(what) + " name is not a valid identifier: '" + name + "'");
  }
}

}  // namespace

Term Term::constant(std::string name) {
  require_identifier(name, "constant");
  return Term(std::make_shared<const Node>(Node{Kind::Constant, std::move(name), {}}));
}

Term Term::variable(std::string name) {
  require_identifier(name, "variable");
  return Term(std::make_shared<const Node>(Node{Kind::Variable, std::move(name), {}}));
}

Term Term::function(std::string name, std::vector<Term> args) {
  require_identifier(name, "function");
  if (args.empty()) {
    throw std::invalid_argument("function term '" + name + "' requires at least one argument");
  }
  return Term(std::make_shared<const Node>(Node{Kind::Function, std::move(name), std::move(args)}));
}

bool Term::operator==(const Term& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind || node_->name != other.node_->name) return false;
  if (node_->args.size() != other.node_->args.size()) return false;
  for (std::size_t i = 0; i < node_->args.size(); ++i) {
    if (node_->args[i] != other.node_->args[i]) return false;
  }
  return true;
}

Formula Formula::predicate(std::string name, std::vector<Term> args) {
  require_identifier(name, "predicate");
  return Formula(std::make_shared<const Node>(Node{Kind::Predicate, std::move(name), std::move(args), {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, "", {}, {std::move(f)}}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::And, "", {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::Or, "", {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::Implies, "", {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::forall(std::string var, Formula body) {
  require_identifier(var, "variable");
  return Formula(std::make_shared<const Node>(Node{Kind::Forall, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::exists(std::string var, Formula body) {
  require_identifier(var, "variable");
  return Formula(std::make_shared<const Node>(Node{Kind::Exists, std::move(var), {}, {std::move(body)}}));
}

const std::string& Formula::name() const {
  if (node_->kind != Kind::Predicate && !is_quantifier()) {
    throw std::logic_error("name() called on a connective formula");
  }
  return node_->name;
}

const std::vector<Term>& Formula::args() const {
  if (node_->kind != Kind::Predicate) throw std::logic_error("args() called on a non-predicate formula");
  return node_->args;
}

const Formula& Formula::lhs() const {
  if (!is_binary()) throw std::logic_error("lhs() called on a non-binary formula");
  return node_->children[0];
}

const Formula& Formula::rhs() const {
  if (!is_binary()) throw std::logic_error("rhs() called on a non-binary formula");
  return node_->children[1];
}

const Formula& Formula::body() const {
  if (node_->kind != Kind::Not && !is_quantifier()) {
    throw std::logic_error("body() called on a formula without a single operand");
  }
  return node_->children[0];
}

bool Formula::is_binary() const {
  return node_->kind == Kind::And || node_->kind == Kind::Or || node_->kind == Kind::Implies;
}

bool Formula::is_quantifier() const {
  return node_->kind == Kind::Forall || node_->kind == Kind::Exists;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind || node_->name != other.node_->name) return false;
  if (node_->args.size() != other.node_->args.size()) return false;
  for (std::size_t i = 0; i < node_->args.size(); ++i) {
    if (node_->args[i] != other.node_->args[i]) return false;
  }
  if (node_->children.size() != other.node_->children.size()) return false;
  for (std::size_t i = 0; i < node_->children.size(); ++i) {
    if (node_->children[i] != other.node_->children[i]) return false;
  }
  return true;
}

Formula negate(const Formula& f) {
  if (f.kind() == Formula::Kind::Not) return f.body();
  return Formula::negation(f);
}

namespace {

// Binding strength, loosest first. Used to decide where parentheses are
// required when rendering.
int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return 4;
    case Formula::Kind::Predicate: return 5;
  }
  return 5;
}

void render(const Formula& f, int min_precedence, std::string& out);

void render_binary(const Formula& f, const char* op, bool right_assoc, int min_precedence, std::string& out) {
  const int prec = precedence(f.kind());
  const bool parens = prec < min_precedence;
  if (parens) out += '(';
  // The associative side may repeat the operator without parentheses; the
  // other side must bind strictly tighter.
  render(f.lhs(), right_assoc ? prec + 1 : prec, out);
  out += ' ';
  out += op;
  out += ' ';
  render(f.rhs(), right_assoc ? prec : prec + 1, out);
  if (parens) out += ')';
}

void render(const Formula& f, int min_precedence, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Predicate: {
      out += f.name();
      if (!f.args().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i > 0) out += ", ";
          out += render_term(f.args()[i]);
        }
        out += ')';
      }
      return;
    }
    case Formula::Kind::Not:
      out += "¬";  // ¬
      render(f.body(), precedence(Formula::Kind::Not), out);
      return;
    case Formula::Kind::And:
      render_binary(f, "∧", /*right_assoc=*/false, min_precedence, out);
      return;
    case Formula::Kind::Or:
      render_binary(f, "∨", /*right_assoc=*/false, min_precedence, out);
      return;
    case Formula::Kind::Implies:
      render_binary(f, "→", /*right_assoc=*/true, min_precedence, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out += f.kind() == Formula::Kind::Forall ? "∀" : "∃";
      out += f.name();
      out += " (";
      render(f.body(), 1, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string render_term(const Term& t) {
  std::string out = t.name();
  if (t.kind() == Term::Kind::Function) {
    out += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i > 0) out += ", ";
      out += render_term(t.args()[i]);
    }
    out += ')';
  }
  return out;
}

std::string render_formula(const Formula& f) {
  std::string out;
  render(f, 1, out);
  return out;
}

}  // namespace lina::fol
