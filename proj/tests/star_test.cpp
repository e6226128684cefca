#include <random>

#include "doctest.h"
#include "jl/star.hpp"
#include "jl/syntax.hpp"
#include "star_generators.hpp"

using namespace jl;

namespace {

PrefixedStar star(int w, int agent, const char* term, const char* body) {
  return {w, {agent, parse_term(term), parse_formula(body)}};
}

LogicSpec plain(int n) {
  LogicSpec s;
  s.n = n;
  return s;
}

}  // namespace

TEST_CASE("application and sum") {
  LogicSpec spec = plain(1);
  FiniteFrame frame(1, 1);
  std::vector<PrefixedStar> as = {star(0, 1, "x1", "p1 -> p2"), star(0, 1, "x2", "p1")};
  CHECK(derivable(spec, frame, as, star(0, 1, "x1 . x2", "p2")));
  CHECK_FALSE(derivable(spec, frame, as, star(0, 1, "x2 . x1", "p2")));
  CHECK_FALSE(derivable(spec, frame, as, star(0, 1, "x1 . x2", "p1")));

  std::vector<PrefixedStar> one = {star(0, 1, "x1", "p1")};
  CHECK(derivable(spec, frame, one, star(0, 1, "x1 + x2", "p1")));
  CHECK(derivable(spec, frame, one, star(0, 1, "x2 + x1", "p1")));
  CHECK_FALSE(derivable(spec, frame, one, star(0, 1, "x2 + x3", "p1")));
}

TEST_CASE("distribution along V and agent change along C") {
  LogicSpec spec = plain(2);
  spec.V = {{1, 2}};
  FiniteFrame frame(2, 2);
  frame.add_edge(2, 0, 1);
  std::vector<PrefixedStar> as = {star(0, 1, "x1", "p1")};
  CHECK(derivable(spec, frame, as, star(1, 1, "x1", "p1")));
  CHECK_FALSE(derivable(spec, frame, {star(1, 1, "x1", "p1")}, star(0, 1, "x1", "p1")));
  CHECK(derivable(spec, frame, as, star(0, 2, "!x1", "[x1]_1 p1")));

  LogicSpec c = plain(2);
  c.C = {{1, 2}};
  FiniteFrame single(2, 1);
  CHECK(derivable(c, single, {star(0, 1, "x1", "p1")}, star(0, 2, "x1", "p1")));
  CHECK_FALSE(derivable(c, single, {star(0, 2, "x1", "p1")}, star(0, 1, "x1", "p1")));
}

TEST_CASE("constant specification leaves") {
  LogicSpec spec = load_logic("agents 2\nD 1\nCS TOTAL\n");
  int p1 = spec.total_constant(1, {AxiomSchemeId::Kind::P1});
  Term c = Term::constant(p1);
  FiniteFrame frame(2, 1);
  CHECK(derivable(spec, frame, {}, {0, {1, c, parse_formula("p1 -> (p2 -> p1)")}}));
  CHECK_FALSE(derivable(spec, frame, {}, {0, {2, c, parse_formula("p1 -> (p2 -> p1)")}}));
  CHECK(derivable(spec, frame, {}, {0, {2, Term::bang(c), Formula::just(c, 1, parse_formula("p1 -> (p2 -> p1)"))}}));
  CHECK(prove_justified(spec, 1, c, parse_formula("p1 -> (p2 -> p1)")));

  LogicSpec empty = load_logic("agents 1\nCS EMPTY\n");
  CHECK_FALSE(prove_justified(empty, 1, Term::constant(1), parse_formula("p1 -> (p2 -> p1)")));
}

TEST_CASE("application of P2 to P1 instances") {
  LogicSpec spec = load_logic("agents 1\nCS TOTAL\n");
  using K = AxiomSchemeId::Kind;
  Term c2 = Term::constant(spec.total_constant(1, {K::P2}));
  Term c1 = Term::constant(spec.total_constant(1, {K::P1}));
  // P2 with A=p1, B=p2->p1, C=p1 applied to P1's instance p1 -> ((p2 -> p1) -> p1).
  Formula psi = parse_formula("(p1 -> (p2 -> p1)) -> (p1 -> p1)");
  CHECK(prove_justified(spec, 1, Term::app(c2, c1), psi));
  CHECK(prove_plus_free(spec, 1, Term::app(c2, c1), psi));
  Formula full = parse_formula("p1 -> p1");
  Term identity = Term::app(Term::app(c2, c1), c1);
  CHECK(prove_justified(spec, 1, identity, full));
  CHECK(prove_plus_free(spec, 1, identity, full));
  CHECK_FALSE(prove_justified(spec, 1, identity, parse_formula("p1 -> p2")));
}

TEST_CASE("plus-free preconditions") {
  LogicSpec spec = load_logic("agents 1\nCS TOTAL\n");
  CHECK_THROWS_AS(prove_plus_free(spec, 1, parse_term("c1 + c2"), parse_formula("p1")), PreconditionError);
  LogicSpec twice = load_logic("agents 1\nCS c1 1 P1\nCS c1 1 P2\n");
  CHECK_THROWS_AS(prove_plus_free(twice, 1, parse_term("c1"), parse_formula("p1")), PreconditionError);
}

TEST_CASE("derives_any") {
  LogicSpec spec = plain(2);
  spec.C = {{1, 2}};
  FiniteFrame frame(2, 1);
  std::vector<PrefixedStar> as = {star(0, 1, "x1", "p1")};
  CHECK_FALSE(derives_any(spec, frame, as, {}).has_value());
  CHECK(*derives_any(spec, frame, as, {star(0, 1, "x1", "p1")}) == star(0, 1, "x1", "p1"));
  CHECK(*derives_any(spec, frame, as, {star(0, 1, "x1", "p2"), star(0, 2, "x1", "p1")}) == star(0, 2, "x1", "p1"));
}

TEST_CASE("saturation examples") {
  LogicSpec spec = plain(1);
  FiniteFrame frame(1, 1);
  std::vector<PrefixedStar> as = {star(0, 1, "x1", "p1 -> p2"), star(0, 1, "x2", "p1")};
  std::set<PrefixedStar> universe(as.begin(), as.end());
  universe.insert(star(0, 1, "x1 . x2", "p2"));
  CHECK(saturate_naive(spec, frame, as, universe) == universe);
}

TEST_CASE("property: derivable agrees with naive saturation") {
  std::mt19937 rng(17);
  int instances = 0, nontrivial = 0, compound = 0;
  while (instances < 150) {
    auto in = testing::random_star_instance(rng);
    if (!in) continue;
    ++instances;
    auto closed = saturate_naive(in->spec, in->frame, in->assumptions, in->universe);
    Deriver d(in->spec, in->frame, in->assumptions);
    for (const auto& u : in->universe) {
      bool fast = d.derivable(u);
      bool slow = closed.count(u) > 0;
      if (slow && std::find(in->assumptions.begin(), in->assumptions.end(), u) == in->assumptions.end()) {
        ++nontrivial;
        if (u.star.term.kind() != Kind::Var) ++compound;
      }
      if (fast != slow) {
        INFO(in->spec.to_text() << "goal " << u.world << " " << print_star(u.star));
        CHECK(fast == slow);
      }
    }
  }
  MESSAGE("derived beyond assumptions: " << nontrivial << ", at compound terms: " << compound);
  CHECK(compound > 100);
}

TEST_CASE("property: monotone in assumptions and frame edges") {
  std::mt19937 rng(23);
  for (int k = 0; k < 100; ++k) {
    auto in = testing::random_star_instance(rng);
    if (!in || in->assumptions.size() < 2) continue;
    std::vector<PrefixedStar> fewer(in->assumptions.begin() + 1, in->assumptions.end());
    FiniteFrame more = in->frame;
    more.add_edge(1, 0, in->frame.worlds() - 1);
    Deriver small(in->spec, in->frame, fewer), big(in->spec, more, in->assumptions);
    for (const auto& u : in->universe)
      if (small.derivable(u)) CHECK(big.derivable(u));
  }
}

TEST_CASE("property: plus-free path matches the general search on constructed theorems") {
  std::mt19937 rng(31);
  LogicSpec spec = load_logic("agents 2\nD 1\nV 1 2\nV 2 2\nC 1 2\nCS TOTAL\n");
  testing::TheoremBuilder builder(spec, rng);
  for (int k = 0; k < 60; ++k) {
    auto th = builder.build(3, false);
    int branches = -1;
    CHECK(prove_justified(spec, th.agent, th.term, th.body));
    CHECK(prove_plus_free(spec, th.agent, th.term, th.body, &branches) == true);
    CHECK(branches == 0);
    CHECK_FALSE(prove_justified(spec, th.agent, th.term, th.broken));
    CHECK_FALSE(prove_plus_free(spec, th.agent, th.term, th.broken));
  }
}

TEST_CASE("property: certificate size stays within |t| + |S'|") {
  reset_star_instrumentation();
  std::mt19937 rng(41);
  for (int k = 0; k < 100; ++k) {
    auto in = testing::random_star_instance(rng);
    if (!in) continue;
    Deriver d(in->spec, in->frame, in->assumptions);
    for (const auto& u : in->universe) {
      StarStats stats;
      if (d.derivable(u, &stats)) CHECK(stats.choices <= stats.term_size + stats.distinct_assumptions);
    }
  }
  CHECK(star_instrumentation().bound_violations == 0);
}
