// Random generators shared by the test suites.

#ifndef JL_TESTS_RANDOM_FORMULAS_HPP_
#define JL_TESTS_RANDOM_FORMULAS_HPP_

#include <random>

#include "jl/expr.hpp"

namespace jl::testing {

class FormulaGen {
 public:
  FormulaGen(std::mt19937& rng, int atoms, int agents, int vars, int consts = 0)
      : rng_(rng), atoms_(atoms), agents_(agents), vars_(vars), consts_(consts) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Term term(int depth) {
    int leaves = consts_ > 0 ? 2 : 1;
    int choice = depth <= 0 ? pick(0, leaves - 1) : pick(0, leaves + 2);
    switch (choice) {
      case 0: return Term::variable(pick(1, vars_));
      case 1:
        if (consts_ > 0) return Term::constant(pick(1, consts_));
        [[fallthrough]];
      case 2: return Term::app(term(depth - 1), term(depth - 1));
      case 3: return Term::sum(term(depth - 1), term(depth - 1));
      default: return Term::bang(term(depth - 1));
    }
  }

  Formula formula(int depth, int term_depth = 2) {
    int choice = depth <= 0 ? pick(0, 3) : pick(0, 7);
    if (choice <= 2) return Formula::atom(pick(1, atoms_));
    if (choice == 3) return Formula::falsum();
    if (choice <= 5) return Formula::implies(formula(depth - 1, term_depth), formula(depth - 1, term_depth));
    return Formula::just(term(pick(0, term_depth)), pick(1, agents_), formula(depth - 1, term_depth));
  }

 private:
  std::mt19937& rng_;
  int atoms_, agents_, vars_, consts_;
};

// Replaces random subformula occurrences of f by fresh formula metas numbered
// from `meta_base` upwards.
inline Formula abstract_randomly(Formula f, std::mt19937& rng, int meta_base) {
  int next = meta_base;
  auto go = [&](auto&& self, Formula g) -> Formula {
    if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) return Formula::meta(next++);
    if (g.is_implies()) return Formula::implies(self(self, g.ant()), self(self, g.cons()));
    if (g.is_just()) return Formula::just(g.term(), g.agent(), self(self, g.body()));
    return g;
  };
  return go(go, f);
}

}  // namespace jl::testing

#endif  // JL_TESTS_RANDOM_FORMULAS_HPP_
