#include <gtest/gtest.h>

#include <random>

#include "lina/fol/ast.hpp"
#include "lina/fol/parser.hpp"
#include "lina/fol/prop.hpp"
#include "lina/fol/skeleton.hpp"
#include "formula_gen.hpp"
#include "oracles.hpp"

using namespace lina;
using fol::Formula;
using fol::Term;

namespace {

Formula parsed(const std::string& text) {
  auto r = fol::parse_formula(text);
  EXPECT_TRUE(r.ok()) << text << ": " << (r.ok() ? "" : r.error().message());
  return r.formula();
}

Formula pred(const std::string& name, std::vector<std::string> constants = {}) {
  std::vector<Term> args;
  for (auto& c : constants) args.push_back(Term::constant(c));
  return Formula::predicate(name, std::move(args));
}

}  // namespace

TEST(Parser, ConjunctionOfBinaryPredicates) {
  const Formula f = parsed("E(A, B) ∧ W(C, B)");
  ASSERT_EQ(f.kind(), Formula::Kind::And);
  EXPECT_EQ(f.lhs(), pred("E", {"A", "B"}));
  EXPECT_EQ(f.rhs(), pred("W", {"C", "B"}));
}

TEST(Parser, DoubleNegationIsPreserved) {
  const Formula f = parsed("¬¬P(a)");
  ASSERT_EQ(f.kind(), Formula::Kind::Not);
  ASSERT_EQ(f.body().kind(), Formula::Kind::Not);
  EXPECT_EQ(f.body().body(), pred("P", {"a"}));
}

TEST(Parser, QuantifiedImplication) {
  const Formula f = parsed("∀x (P(x) → Q(x))");
  ASSERT_EQ(f.kind(), Formula::Kind::Forall);
  EXPECT_EQ(f.name(), "x");
  const Formula& body = f.body();
  ASSERT_EQ(body.kind(), Formula::Kind::Implies);
  EXPECT_EQ(body.lhs().args()[0].kind(), Term::Kind::Variable);
}

TEST(Parser, AsciiAliases) {
  EXPECT_EQ(parsed("P(a) & Q(a)"), parsed("P(a) ∧ Q(a)"));
  EXPECT_EQ(parsed("P(a) | Q(a)"), parsed("P(a) ∨ Q(a)"));
  EXPECT_EQ(parsed("P(a) -> Q(a)"), parsed("P(a) → Q(a)"));
  EXPECT_EQ(parsed("~P(a)"), parsed("¬P(a)"));
  EXPECT_EQ(parsed("!P(a)"), parsed("¬P(a)"));
  EXPECT_EQ(parsed("forall x (P(x))"), parsed("∀x (P(x))"));
  EXPECT_EQ(parsed("exists y (P(y))"), parsed("∃y (P(y))"));
}

TEST(Parser, PrecedenceAndAssociativity) {
  // ¬ > ∧ > ∨ > →, with → right associative.
  EXPECT_EQ(parsed("~p & q | r -> s"), parsed("(((~p) & q) | r) -> s"));
  EXPECT_EQ(parsed("p -> q -> r"), parsed("p -> (q -> r)"));
  EXPECT_EQ(parsed("p & q & r"), parsed("(p & q) & r"));
}

TEST(Parser, MultiVariableQuantifierDesugarsToNesting) {
  EXPECT_EQ(parsed("∀x y (P(x, y))"), parsed("∀x (∀y (P(x, y)))"));
}

TEST(Parser, FunctionTerms) {
  const Formula f = parsed("P(f(a, b), g(c))");
  const auto& args = f.args();
  ASSERT_EQ(args.size(), 2u);
  EXPECT_EQ(args[0].kind(), Term::Kind::Function);
  ASSERT_EQ(args[0].args().size(), 2u);
}

TEST(Parser, ReportsPositionExpectedAndFound) {
  const auto r = fol::parse_formula("P(a) ∧");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().position, std::string("P(a) ∧").size());
  EXPECT_EQ(r.error().found, "end of input");

  const auto r2 = fol::parse_formula("P(a))");
  ASSERT_FALSE(r2.ok());
  EXPECT_EQ(r2.error().position, 4u);
  EXPECT_EQ(r2.error().found, "')'");
}

TEST(Parser, NeverThrowsOnArbitraryBytes) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    std::string junk;
    const std::size_t len = rng() % 40;
    for (std::size_t j = 0; j < len; ++j) junk.push_back(static_cast<char>(rng() % 256));
    EXPECT_NO_THROW({ auto r = fol::parse_formula(junk); (void)r; });
  }
}

TEST(Render, CanonicalForms) {
  EXPECT_EQ(fol::render_formula(Formula::conjunction(pred("P", {"a"}), pred("Q", {"a"}))), "P(a) ∧ Q(a)");
  EXPECT_EQ(fol::render_formula(Formula::negation(pred("P", {"a"}))), "¬P(a)");
  EXPECT_EQ(fol::render_formula(Formula::forall("x", Formula::predicate("P", {Term::variable("x")}))),
            "∀x (P(x))");
}

TEST(Render, ParenthesizesOnlyWhereNeeded) {
  const Formula right_and = Formula::conjunction(pred("p"), Formula::conjunction(pred("q"), pred("r")));
  EXPECT_EQ(fol::render_formula(right_and), "p ∧ (q ∧ r)");
  const Formula impl_left = Formula::implication(Formula::implication(pred("p"), pred("q")), pred("r"));
  EXPECT_EQ(fol::render_formula(impl_left), "(p → q) → r");
  const Formula neg_binary = Formula::negation(Formula::conjunction(pred("p"), pred("q")));
  EXPECT_EQ(fol::render_formula(neg_binary), "¬(p ∧ q)");
}

TEST(Render, RoundTripProperty) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = testutil::random_formula(rng, 6);
    const std::string text = fol::render_formula(f);
    const auto back = fol::parse_formula(text);
    ASSERT_TRUE(back.ok()) << text << ": " << back.error().message();
    ASSERT_EQ(back.formula(), f) << text;
  }
}

TEST(Negate, BasicAndInvolution) {
  const Formula p = pred("P", {"a"});
  EXPECT_EQ(fol::negate(p), Formula::negation(p));
  EXPECT_EQ(fol::negate(Formula::negation(p)), p);
  // No De Morgan rewriting at this layer.
  const Formula conj = Formula::conjunction(pred("P", {"a"}), pred("Q", {"a"}));
  EXPECT_EQ(fol::render_formula(fol::negate(conj)), "¬(P(a) ∧ Q(a))");

  // Involution holds exactly on formulas without a ¬¬ prefix; a collapsing
  // negate maps ¬¬h and h to the same formula, so no pure function can
  // invert both.
  auto strip_double_negation = [](Formula g) {
    while (g.kind() == Formula::Kind::Not && g.body().kind() == Formula::Kind::Not) {
      g = g.body().body();
    }
    return g;
  };
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const Formula f = strip_double_negation(testutil::random_formula(rng, 5));
    EXPECT_EQ(fol::negate(fol::negate(f)), f);
  }
}

TEST(Skeleton, SharedLettersAcrossList) {
  const Formula p = pred("P", {"a"});
  const auto sk = fol::propositional_skeleton({p, fol::negate(p)});
  ASSERT_EQ(sk.atoms.size(), 1u);
  EXPECT_EQ(sk.atoms[0], p);
  EXPECT_EQ(fol::render_formula(sk.letters[0]), "p0");
  EXPECT_EQ(fol::render_formula(sk.letters[1]), "¬p0");
}

TEST(Skeleton, FirstAppearanceOrder) {
  const Formula p = pred("P", {"a"});
  const Formula q = pred("Q", {"a"});
  const auto sk = fol::propositional_skeleton({Formula::implication(p, q), p});
  ASSERT_EQ(sk.atoms.size(), 2u);
  EXPECT_EQ(sk.atoms[0], p);
  EXPECT_EQ(sk.atoms[1], q);
  EXPECT_EQ(fol::render_formula(sk.letters[0]), "p0 → p1");
  EXPECT_EQ(fol::render_formula(sk.letters[1]), "p0");
}

TEST(Skeleton, QuantifiedSubformulaIsOpaque) {
  const Formula quant = parsed("∀x (P(x))");
  const auto sk = fol::propositional_skeleton({quant, pred("R", {"b"})});
  ASSERT_EQ(sk.atoms.size(), 2u);
  EXPECT_EQ(sk.atoms[0], quant);
  EXPECT_EQ(fol::render_formula(sk.letters[0]), "p0");
}

TEST(Entails, ModusPonensIsEntailed) {
  const Formula p = pred("P", {"a"});
  const Formula q = pred("Q", {"a"});
  const std::vector<Formula> premises = {Formula::implication(p, q), p};
  EXPECT_EQ(fol::entails(premises, q), fol::Entailment::Entailed);
  EXPECT_EQ(testutil::brute_force_entails(premises, q), fol::Entailment::Entailed);
}

TEST(Entails, DirectContradiction) {
  const Formula p = pred("P", {"a"});
  EXPECT_EQ(fol::entails({p}, fol::negate(p)), fol::Entailment::Contradicted);
}

TEST(Entails, IndependentAtomsAreUnknown) {
  EXPECT_EQ(fol::entails({pred("P", {"a"})}, pred("Q", {"b"})), fol::Entailment::Unknown);
}

TEST(Entails, InconsistentPremisesReportContradicted) {
  const Formula p = pred("P", {"a"});
  const std::vector<Formula> premises = {p, fol::negate(p)};
  EXPECT_EQ(fol::entails(premises, pred("Q", {"b"})), fol::Entailment::Contradicted);
  EXPECT_EQ(testutil::brute_force_entails(premises, pred("Q", {"b"})), fol::Entailment::Contradicted);
}

TEST(Entails, AtomBudgetOverflowsToUnknown) {
  std::vector<Formula> premises;
  for (int i = 0; i < 21; ++i) {
    premises.push_back(pred("P" + std::to_string(i)));
  }
  EXPECT_EQ(fol::entails(premises, pred("P0")), fol::Entailment::Unknown);
  // At the cap it still decides.
  premises.erase(premises.begin() + 19, premises.end());
  EXPECT_EQ(fol::entails(premises, pred("P0")), fol::Entailment::Entailed);
}

TEST(Entails, AgreesWithBruteForceOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1500; ++i) {
    std::vector<Formula> premises;
    const int count = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < count; ++j) {
      premises.push_back(testutil::random_propositional(rng, 3, 4));
    }
    const Formula goal = testutil::random_propositional(rng, 3, 4);
    EXPECT_EQ(fol::entails(premises, goal), testutil::brute_force_entails(premises, goal))
        << "premises[0]=" << fol::render_formula(premises[0]) << " goal=" << fol::render_formula(goal);
  }
}

TEST(Prop, TruthTableBasics) {
  const auto atoms = std::vector<std::string>{"p", "q"};
  const auto tp = fol::truth_table(parsed("p"), atoms);
  const auto tpq = fol::truth_table(parsed("p | q"), atoms);
  EXPECT_TRUE(tp.entails(tpq));
  EXPECT_FALSE(tpq.entails(tp));
  EXPECT_TRUE(tp.satisfiable());
  EXPECT_TRUE(fol::truth_table(parsed("p"), atoms).mutually_exclusive(fol::truth_table(parsed("~p"), atoms)));
  EXPECT_TRUE(fol::truth_table(parsed("p -> q"), atoms).equivalent(fol::truth_table(parsed("~p | q"), atoms)));
}

TEST(Ast, InvalidConstructionsThrow) {
  EXPECT_THROW(Term::function("f", {}), std::invalid_argument);
  EXPECT_THROW(Term::constant("9bad"), std::invalid_argument);
  EXPECT_THROW(Formula::predicate(""), std::invalid_argument);
}
