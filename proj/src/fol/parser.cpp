#include "lina/fol/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

namespace lina::fol {

std::string ParseError::message() const {
  std::ostringstream os;
  os << "expected " << expected << " at offset " << position << ", found " << found;
  return os.str();
}

namespace {

enum class Tok {
  End,
  LParen,
  RParen,
  Comma,
  Dot,
  Ident,
  Not,
  And,
  Or,
  Implies,
  Forall,
  Exists,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;       // identifier spelling, or the operator lexeme
  std::size_t position = 0;
};

const char* describe(Tok k) {
  switch (k) {
    case Tok::End: return "end of input";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Ident: return "identifier";
    case Tok::Not: return "negation";
    case Tok::And: return "conjunction";
    case Tok::Or: return "disjunction";
    case Tok::Implies: return "implication";
    case Tok::Forall: return "universal quantifier";
    case Tok::Exists: return "existential quantifier";
  }
  return "token";
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  }
  return true;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  // Tokenizes the whole input; returns nullopt and fills `error` on an
  // unrecognized byte sequence.
  std::optional<std::vector<Token>> run(ParseError& error) {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      const std::size_t start = pos_;
      // Multi-byte logical symbols first.
      if (match_symbol("∧")) { out.push_back({Tok::And, "∧", start}); continue; }
      if (match_symbol("∨")) { out.push_back({Tok::Or, "∨", start}); continue; }
      if (match_symbol("→")) { out.push_back({Tok::Implies, "→", start}); continue; }
      if (match_symbol("⇒")) { out.push_back({Tok::Implies, "⇒", start}); continue; }
      if (match_symbol("¬")) { out.push_back({Tok::Not, "¬", start}); continue; }
      if (match_symbol("∀")) { out.push_back({Tok::Forall, "∀", start}); continue; }
      if (match_symbol("∃")) { out.push_back({Tok::Exists, "∃", start}); continue; }
      if (match_symbol("->") || match_symbol("=>")) { out.push_back({Tok::Implies, "->", start}); continue; }
      if (match_symbol("&&") || match_symbol("&")) { out.push_back({Tok::And, "&", start}); continue; }
      if (match_symbol("||") || match_symbol("|")) { out.push_back({Tok::Or, "|", start}); continue; }
      const char c = text_[pos_];
      if (c == '~' || c == '!') { ++pos_; out.push_back({Tok::Not, std::string(1, c), start}); continue; }
      if (c == '(') { ++pos_; out.push_back({Tok::LParen, "(", start}); continue; }
      if (c == ')') { ++pos_; out.push_back({Tok::RParen, ")", start}); continue; }
      if (c == ',') { ++pos_; out.push_back({Tok::Comma, ",", start}); continue; }
      if (c == '.') { ++pos_; out.push_back({Tok::Dot, ".", start}); continue; }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
          ++end;
        }
        std::string word(text_.substr(pos_, end - pos_));
        pos_ = end;
        if (iequals(word, "forall")) {
          out.push_back({Tok::Forall, word, start});
        } else if (iequals(word, "exists")) {
          out.push_back({Tok::Exists, word, start});
        } else {
          out.push_back({Tok::Ident, word, start});
        }
        continue;
      }
      // Report the whole UTF-8 code point, not a lone continuation byte.
      std::size_t len = 1;
      while (pos_ + len < text_.size() && (static_cast<unsigned char>(text_[pos_ + len]) & 0xc0) == 0x80) ++len;
      error = ParseError{start, "a formula token", "'" + std::string(text_.substr(pos_, len)) + "'"};
      return std::nullopt;
    }
    out.push_back({Tok::End, "", text_.size()});
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool match_symbol(std::string_view sym) {
    if (text_.substr(pos_, sym.size()) == sym) {
      pos_ += sym.size();
      return true;
    }
    return false;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Recursive descent over the token stream. Errors unwind via a stored
// ParseError rather than exceptions so arbitrary input can never throw.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ParseResult run() {
    auto f = parse_implication();
    if (!f) return *error_;
    if (peek().kind != Tok::End) {
      return fail("end of input", peek());
    }
    return *f;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  const Token& advance() { return tokens_[index_++]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++index_;
      return true;
    }
    return false;
  }

  ParseError fail(std::string expected, const Token& at) {
    std::string found = at.kind == Tok::End ? "end of input" : "'" + at.text + "'";
    error_ = ParseError{at.position, std::move(expected), std::move(found)};
    return *error_;
  }

  std::optional<Formula> parse_implication() {
    auto lhs = parse_disjunction();
    if (!lhs) return std::nullopt;
    if (accept(Tok::Implies)) {
      auto rhs = parse_implication();  // right associative
      if (!rhs) return std::nullopt;
      return Formula::implication(std::move(*lhs), std::move(*rhs));
    }
    return lhs;
  }

  std::optional<Formula> parse_disjunction() {
    auto acc = parse_conjunction();
    if (!acc) return std::nullopt;
    while (accept(Tok::Or)) {
      auto rhs = parse_conjunction();
      if (!rhs) return std::nullopt;
      acc = Formula::disjunction(std::move(*acc), std::move(*rhs));
    }
    return acc;
  }

  std::optional<Formula> parse_conjunction() {
    auto acc = parse_unary();
    if (!acc) return std::nullopt;
    while (accept(Tok::And)) {
      auto rhs = parse_unary();
      if (!rhs) return std::nullopt;
      acc = Formula::conjunction(std::move(*acc), std::move(*rhs));
    }
    return acc;
  }

  std::optional<Formula> parse_unary() {
    if (accept(Tok::Not)) {
      auto body = parse_unary();
      if (!body) return std::nullopt;
      return Formula::negation(std::move(*body));
    }
    if (peek().kind == Tok::Forall || peek().kind == Tok::Exists) {
      return parse_quantifier();
    }
    return parse_atom();
  }

  // One or more bound variables, an optional '.' or ',' separator, then
  // the scope. Canonical form parenthesizes the scope; an unparenthesized
  // scope is accepted at unary level (¬, a nested quantifier, or an atom).
  std::optional<Formula> parse_quantifier() {
    const bool universal = advance().kind == Tok::Forall;
    std::vector<std::string> vars;
    while (peek().kind == Tok::Ident) {
      vars.push_back(advance().text);
    }
    if (vars.empty()) {
      fail("a bound variable name", peek());
      return std::nullopt;
    }
    accept(Tok::Dot) || accept(Tok::Comma);
    for (const auto& v : vars) bound_.push_back(v);
    auto body = parse_unary();
    bound_.resize(bound_.size() - vars.size());
    if (!body) return std::nullopt;
    Formula f = std::move(*body);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      f = universal ? Formula::forall(*it, std::move(f)) : Formula::exists(*it, std::move(f));
    }
    return f;
  }

  std::optional<Formula> parse_atom() {
    if (accept(Tok::LParen)) {
      auto inner = parse_implication();
      if (!inner) return std::nullopt;
      if (!accept(Tok::RParen)) {
        fail("')'", peek());
        return std::nullopt;
      }
      return inner;
    }
    if (peek().kind != Tok::Ident) {
      fail("a predicate or '('", peek());
      return std::nullopt;
    }
    const Token name = advance();
    std::vector<Term> args;
    if (accept(Tok::LParen)) {
      do {
        auto t = parse_term();
        if (!t) return std::nullopt;
        args.push_back(std::move(*t));
      } while (accept(Tok::Comma));
      if (!accept(Tok::RParen)) {
        fail("',' or ')'", peek());
        return std::nullopt;
      }
    }
    return Formula::predicate(name.text, std::move(args));
  }

  std::optional<Term> parse_term() {
    if (peek().kind != Tok::Ident) {
      fail("a term", peek());
      return std::nullopt;
    }
    const Token name = advance();
    if (accept(Tok::LParen)) {
      std::vector<Term> args;
      do {
        auto t = parse_term();
        if (!t) return std::nullopt;
        args.push_back(std::move(*t));
      } while (accept(Tok::Comma));
      if (!accept(Tok::RParen)) {
        fail("',' or ')'", peek());
        return std::nullopt;
      }
      return Term::function(name.text, std::move(args));
    }
    if (std::find(bound_.begin(), bound_.end(), name.text) != bound_.end()) {
      return Term::variable(name.text);
    }
    return Term::constant(name.text);
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
  std::vector<std::string> bound_;
  std::optional<ParseError> error_;
};

}  // namespace

ParseResult parse_formula(std::string_view text) {
  ParseError lex_error;
  auto tokens = Lexer(text).run(lex_error);
  if (!tokens) return lex_error;
  if (tokens->size() == 1) {
    return ParseError{0, "a formula", "end of input"};
  }
  return Parser(std::move(*tokens)).run();
}

}  // namespace lina::fol
