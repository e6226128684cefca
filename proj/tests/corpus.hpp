// The logics and random formulas shared by the tableau tests and the
// acceptance suite.

#ifndef JL_TESTS_CORPUS_HPP_
#define JL_TESTS_CORPUS_HPP_

#include <random>
#include <string>
#include <vector>

#include "jl/logic.hpp"

#ifndef JL_LOGIC_DIR
#error "JL_LOGIC_DIR must point at the logics directory"
#endif

namespace jl::testing {

struct CorpusLogic {
  std::string name;
  LogicSpec spec;
};

inline LogicSpec corpus_logic(const std::string& name) {
  return load_logic_file(std::string(JL_LOGIC_DIR) + "/" + name + ".logic");
}

inline std::vector<CorpusLogic> corpus_logics() {
  std::vector<CorpusLogic> out;
  for (const char* name : {"lp", "two_agent_pspace", "two_agent_sigma2p", "j1", "j2", "three_agent_f", "jd4"})
    out.push_back({name, corpus_logic(name)});
  return out;
}

// Formulas over p1..p3 with connective depth at most `depth` and terms of
// depth at most 2 built from x1, x2 and the constants c1..c4.
class CorpusGen {
 public:
  CorpusGen(std::mt19937& rng, int agents) : rng_(rng), agents_(agents) {}

  Formula formula(int depth) {
    int r = pick(0, 99);
    if (depth <= 0 || r < 12) return r % 10 == 0 ? Formula::falsum() : Formula::atom(pick(1, 3));
    if (r < 60) return Formula::implies(formula(depth - 1), formula(depth - 1));
    return Formula::just(term(pick(0, 2)), pick(1, agents_), formula(depth - 1));
  }

  Term term(int depth) {
    int r = pick(0, 9);
    if (depth <= 0 || r < 4) return r % 3 == 0 ? Term::constant(pick(1, 4)) : Term::variable(pick(1, 2));
    if (r < 6) return Term::app(term(depth - 1), term(depth - 1));
    if (r < 8) return Term::sum(term(depth - 1), term(depth - 1));
    return Term::bang(term(depth - 1));
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937& rng_;
  int agents_;
};

}  // namespace jl::testing

#endif  // JL_TESTS_CORPUS_HPP_
