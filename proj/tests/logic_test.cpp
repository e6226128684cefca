#include <random>

#include "doctest.h"
#include "jl/logic.hpp"
#include "jl/syntax.hpp"
#include "jl/unify.hpp"

using namespace jl;

namespace {

const char* kJ1 = R"(# J1
agents 3
D 1 2
F
C 3 1
C 3 2
CS TOTAL
)";

const char* kJ2 = R"(agents 3
D 1 2
F
V 3 3
C 3 1
C 3 2
CS TOTAL
)";

using SK = AxiomSchemeId::Kind;

}  // namespace

TEST_CASE("load J1 and J2") {
  LogicSpec j1 = load_logic(kJ1);
  CHECK(j1.n == 3);
  CHECK(j1.D == std::set<int>{1, 2});
  CHECK(j1.F.empty());
  CHECK(j1.V.empty());
  CHECK(j1.C == std::set<AgentPair>{{3, 1}, {3, 2}});
  CHECK(j1.cs.total());
  CHECK(j1.cs.schematically_injective());
  CHECK(j1.appropriate_for() == std::set<int>{1, 2, 3});

  LogicSpec j2 = load_logic(kJ2);
  CHECK(j2.V == std::set<AgentPair>{{3, 3}});
  CHECK(j2.warnings().empty());
}

TEST_CASE("load an LP-style logic") {
  LogicSpec lp = load_logic("agents 1\nF 1\nV 1 1\nCS TOTAL\n");
  CHECK(lp.F == std::set<int>{1});
  CHECK(lp.V == std::set<AgentPair>{{1, 1}});
  CHECK(lp.D.empty());
}

TEST_CASE("logic file errors") {
  CHECK_THROWS_AS(load_logic("agents 2\nD 3\n"), LogicError);
  CHECK_THROWS_AS(load_logic("D 1\n"), LogicError);
  CHECK_THROWS_AS(load_logic("agents 2\nV 1\n"), LogicError);
  CHECK_THROWS_AS(load_logic("agents 2\nCS c1 1 P9\n"), LogicError);
  CHECK_THROWS_AS(load_logic("agents 2\nCS c1 1 Fact(1)\n"), LogicError);
  CHECK_THROWS_AS(load_logic("agents 2\nCS 1 1 P1\n"), LogicError);
  CHECK_THROWS_AS(load_logic("agents 2\nbogus\n"), LogicError);
}

TEST_CASE("round trip through the text format") {
  LogicSpec j2 = load_logic(kJ2);
  LogicSpec again = load_logic(j2.to_text());
  CHECK(again.n == j2.n);
  CHECK(again.V == j2.V);
  CHECK(again.cs.entries() == j2.cs.entries());
  LogicSpec partial = load_logic("agents 2\nD 1\nCS c1 1 P1\nCS c4 2 Cons(1)\n");
  CHECK(load_logic(partial.to_text()).cs.entries() == partial.cs.entries());
  CHECK_FALSE(partial.warnings().empty());
}

TEST_CASE("schemes") {
  CHECK(scheme_of({SK::Consistency, 1, 0}) == parse_formula("[?T2]_1 false -> false", true));
  CHECK(scheme_of({SK::Verification, 3, 3}) == parse_formula("[?T2]_3 ?A1 -> [!?T2]_3 [?T2]_3 ?A1", true));
  Formula app = scheme_of({SK::Application});
  CHECK(is_instance(parse_formula("[x1]_2 (p1 -> p2) -> ([x2]_2 p1 -> [x1 . x2]_2 p2)"), app));
  CHECK_FALSE(is_instance(parse_formula("[x1]_2 (p1 -> p2) -> ([x2]_1 p1 -> [x1 . x2]_2 p2)"), app));
}

TEST_CASE("membership in the closure of the constant specification") {
  LogicSpec total = load_logic("agents 2\nD 1\nCS TOTAL\n");
  int c = total.total_constant(1, {SK::P1});
  CHECK(in_cl(total, 1, Term::constant(c), parse_formula("p1 -> (p2 -> p1)")));
  CHECK_FALSE(in_cl(total, 2, Term::constant(c), parse_formula("p1 -> (p2 -> p1)")));

  LogicSpec one = load_logic("agents 2\nCS c1 1 P1\n");
  Term c1 = Term::constant(1);
  CHECK(in_cl(one, 2, Term::bang(c1), parse_formula("[c1]_1 (p1 -> (p2 -> p1))")));
  CHECK(in_cl(one, 1, Term::bang(Term::bang(c1)), parse_formula("[!c1]_2 [c1]_1 (p1 -> (p2 -> p1))")));
  CHECK_FALSE(in_cl(one, 1, c1, parse_formula("p1 -> false")));
  CHECK_FALSE(in_cl(one, 2, Term::bang(c1), parse_formula("[c1]_2 (p1 -> (p2 -> p1))")));
}

TEST_CASE("property: in_cl is monotone in the constant specification") {
  std::mt19937 rng(3);
  std::vector<std::string> schemes = {"P1", "P2", "P3", "App", "SumL", "SumR", "Cons(1)"};
  std::vector<Formula> probes = {
      parse_formula("p1 -> (p2 -> p1)"), parse_formula("((p1 -> false) -> false) -> p1"),
      parse_formula("[x1]_1 false -> false"), parse_formula("[x1]_2 p1 -> [x1 + x2]_2 p1"),
      parse_formula("[c1]_1 (p1 -> (p1 -> p1))"), parse_formula("[c2]_2 ([x1]_1 false -> false)")};
  for (int round = 0; round < 100; ++round) {
    std::string text = "agents 2\nD 1\n";
    std::vector<std::string> lines;
    for (int k = 0; k < 4; ++k)
      lines.push_back("CS c" + std::to_string(1 + rng() % 2) + " " + std::to_string(1 + rng() % 2) + " " +
                      schemes[rng() % schemes.size()] + "\n");
    std::string small = text, big = text;
    for (std::size_t k = 0; k < lines.size(); ++k) {
      big += lines[k];
      if (k % 2 == 0) small += lines[k];
    }
    LogicSpec a = load_logic(small), b = load_logic(big);
    for (Formula f : probes)
      for (int agent = 1; agent <= 2; ++agent)
        for (Term t : {Term::constant(1), Term::constant(2), Term::bang(Term::constant(1)), Term::bang(Term::constant(2))})
          if (in_cl(a, agent, t, f)) CHECK(in_cl(b, agent, t, f));
  }
}
