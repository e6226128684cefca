#include <random>

#include "doctest.h"
#include "jl/syntax.hpp"
#include "jl/unify.hpp"
#include "random_formulas.hpp"

using namespace jl;

TEST_CASE("parse atomic and justification formulas") {
  CHECK(parse_formula("p1") == Formula::atom(1));
  CHECK(parse_formula("[x1]_2 (p1 -> false)") ==
        Formula::just(Term::variable(1), 2, Formula::implies(Formula::atom(1), Formula::falsum())));
  Formula f = parse_formula("[(c1 . x1) + !x2]_1 p3");
  Term t = Term::sum(Term::app(Term::constant(1), Term::variable(1)), Term::bang(Term::variable(2)));
  CHECK(f == Formula::just(t, 1, Formula::atom(3)));
  CHECK(parse_formula(print_formula(f)) == f);
}

TEST_CASE("print formulas") {
  CHECK(print_formula(Formula::atom(1)) == "p1");
  CHECK(print_formula(Formula::falsum()) == "false");
  Formula f = Formula::just(Term::bang(Term::variable(1)), 2, Formula::just(Term::variable(1), 1, Formula::atom(1)));
  CHECK(print_formula(f) == "[!x1]_2 [x1]_1 p1");
  CHECK(parse_formula(print_formula(f)) == f);
}

TEST_CASE("implication is right associative and binds loosest") {
  Formula f = parse_formula("[x1]_1 p1 -> p2 -> p3");
  CHECK(f.is_implies());
  CHECK(f.ant().is_just());
  CHECK(f.cons() == parse_formula("(p2 -> p3)"));
  CHECK(parse_formula("~p1") == Formula::neg(Formula::atom(1)));
  CHECK(parse_formula("p1 & p2") == Formula::conj(Formula::atom(1), Formula::atom(2)));
  CHECK(parse_formula("p1 | p2") == Formula::disj(Formula::atom(1), Formula::atom(2)));
}

TEST_CASE("term printing keeps grouping") {
  for (const char* s : {"c1 . (x1 . x2)", "(c1 + x1) . x2", "x1 + (x2 + x3)", "!(x1 . x2)", "!!c1 . x1"}) {
    Term t = parse_term(s);
    CHECK(parse_term(print_term(t)) == t);
  }
  CHECK(print_term(parse_term("c1 . (x1 . x2)")) == "c1 . (x1 . x2)");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_formula("p1 -> ");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
  }
  CHECK_THROWS_AS(parse_formula("[x1]_ p1"), ParseError);
  CHECK_THROWS_AS(parse_formula("p0"), ParseError);
  CHECK_THROWS_AS(parse_formula("p1 p2"), ParseError);
  CHECK_THROWS_AS(parse_formula("?A1"), ParseError);
  CHECK(parse_formula("?A1", true) == Formula::meta(1));
}

TEST_CASE("subformulas") {
  Formula p1 = Formula::atom(1);
  CHECK(subformulas(p1) == std::vector<Formula>{p1});
  Formula imp = Formula::implies(p1, Formula::falsum());
  auto subs = subformulas(imp);
  CHECK(std::set<Formula>(subs.begin(), subs.end()) == std::set<Formula>{imp, p1, Formula::falsum()});
  Formula j = Formula::just(Term::variable(1), 1, p1);
  auto js = subformulas(j);
  CHECK(std::set<Formula>(js.begin(), js.end()) == std::set<Formula>{j, p1});
}

TEST_CASE("property: print then parse is the identity, subformula count bounded by size") {
  std::mt19937 rng(7);
  testing::FormulaGen gen(rng, 3, 3, 3);
  for (int k = 0; k < 2000; ++k) {
    Formula f = gen.formula(4);
    REQUIRE(parse_formula(print_formula(f)) == f);
    CHECK(subformulas(f).size() <= f.size());
  }
}

TEST_CASE("unify schemes") {
  Formula a = parse_formula("?A1 -> (?A2 -> ?A1)", true);
  Formula b = parse_formula("p1 -> ?A3", true);
  auto s = unify_schemes(a, b);
  REQUIRE(s.has_value());
  CHECK(s->apply(Formula::meta(1)) == Formula::atom(1));
  CHECK(s->apply(Formula::meta(3)) == parse_formula("?A2 -> p1", true));
  CHECK(s->apply(a) == s->apply(b));

  auto vv = unify_schemes(Formula::meta(1), Formula::meta(2));
  REQUIRE(vv.has_value());
  CHECK(vv->apply(Formula::meta(1)) == vv->apply(Formula::meta(2)));

  CHECK_FALSE(unify_schemes(Formula::falsum(), Formula::atom(1)).has_value());
  // occurs check
  CHECK_FALSE(unify_schemes(Formula::meta(1), parse_formula("?A1 -> p1", true)).has_value());
}

TEST_CASE("unification handles agent metas and term metas") {
  Formula a = Formula::just(Term::app(Term::meta(1), Term::meta(2)), -1, Formula::meta(1));
  Formula b = parse_formula("[c1 . x1]_2 p1");
  auto s = unify_schemes(a, b);
  REQUIRE(s.has_value());
  CHECK(s->resolve_agent(-1) == 2);
  CHECK(s->apply(a) == b);
  CHECK_FALSE(unify_schemes(Formula::just(Term::meta(1), 1, Formula::meta(1)), parse_formula("[x1]_2 p1")).has_value());
}

TEST_CASE("canonical forms and instances") {
  Formula a = parse_formula("?A5 -> (?A9 -> ?A5)", true);
  Formula b = parse_formula("?A2 -> (?A1 -> ?A2)", true);
  CHECK(canonical(a) == canonical(b));
  CHECK(is_instance(parse_formula("p1 -> (p2 -> p1)"), a));
  CHECK_FALSE(is_instance(parse_formula("p1 -> (p2 -> p2)"), a));
  CHECK(is_instance(parse_formula("?A1 -> (p2 -> ?A1)", true), a));
  CHECK_FALSE(is_instance(a, parse_formula("?A1 -> (p2 -> ?A1)", true)));
}

TEST_CASE("property: unifiers are most general") {
  // Build two schemes with a known common instance by abstracting different
  // positions of one ground formula; the mgu must subsume that instance.
  std::mt19937 rng(11);
  testing::FormulaGen gen(rng, 2, 2, 2);
  for (int k = 0; k < 500; ++k) {
    Formula ground = gen.formula(4);
    Formula a = testing::abstract_randomly(ground, rng, 1);
    Formula b = testing::abstract_randomly(ground, rng, 100);
    auto s = unify_schemes(a, b);
    REQUIRE(s.has_value());
    Formula u = s->apply(a);
    CHECK(u == s->apply(b));
    CHECK(is_instance(ground, u));
  }
}
