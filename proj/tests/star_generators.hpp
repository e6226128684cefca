// Random derivability instances and constructed theorems for the star
// calculus tests and the acceptance suite.

#ifndef JL_TESTS_STAR_GENERATORS_HPP_
#define JL_TESTS_STAR_GENERATORS_HPP_

#include <map>
#include <optional>
#include <random>
#include <set>

#include "jl/star.hpp"
#include "jl/unify.hpp"
#include "random_formulas.hpp"

namespace jl::testing {

struct StarInstance {
  LogicSpec spec;
  FiniteFrame frame;
  std::vector<PrefixedStar> assumptions;
  Term term;
  std::set<PrefixedStar> universe;
};

// Formulas that can occur at subterm s in any derivation from the assumptions:
// the universe built from these is closed under the rules, so saturation
// inside it is exact. Only variable-leaf terms are used.
inline std::set<PrefixedStar> closed_universe(const StarInstance& in, std::size_t cap) {
  std::map<Term, std::set<Formula>> phi;
  std::set<PrefixedStar> out;
  auto visit = [&](auto&& self, Term s) -> const std::set<Formula>& {
    if (auto it = phi.find(s); it != phi.end()) return it->second;
    std::set<Formula> f;
    for (const auto& a : in.assumptions)
      if (a.star.term == s) f.insert(a.star.body);
    if (s.kind() == Kind::App) {
      const auto& l = self(self, s.left());
      const auto& r = self(self, s.right());
      for (Formula g : l)
        if (g.is_implies() && r.count(g.ant())) f.insert(g.cons());
    } else if (s.kind() == Kind::Sum) {
      for (Formula g : self(self, s.left())) f.insert(g);
      for (Formula g : self(self, s.right())) f.insert(g);
    } else if (s.kind() == Kind::Bang) {
      for (Formula g : self(self, s.inner()))
        for (int i = 1; i <= in.spec.n; ++i) f.insert(Formula::just(s.inner(), i, g));
    }
    return phi[s] = std::move(f);
  };
  visit(visit, in.term);
  for (const auto& [s, fs] : phi)
    for (Formula f : fs)
      for (int j = 1; j <= in.spec.n; ++j)
        for (int w = 0; w < in.frame.worlds(); ++w) {
          out.insert({w, {j, s, f}});
          if (out.size() > cap) return {};
        }
  return out;
}

// Builds assumptions along a planted derivation of some goal at term t, plus
// noise, and a random frame. Returns nothing when the universe exceeds `cap`.
inline std::optional<StarInstance> random_star_instance(std::mt19937& rng, std::size_t cap = 200) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  StarInstance in;
  in.spec.n = pick(1, 3);
  for (int i = 1; i <= in.spec.n; ++i)
    for (int j = 1; j <= in.spec.n; ++j) {
      if (pick(0, 3) == 0) in.spec.V.insert({i, j});
      if (i != j && pick(0, 3) == 0) in.spec.C.insert({i, j});
    }
  int worlds = pick(1, 3);
  in.frame = FiniteFrame(in.spec.n, worlds);
  for (int i = 1; i <= in.spec.n; ++i)
    for (int a = 0; a < worlds; ++a)
      for (int b = 0; b < worlds; ++b)
        if (pick(0, 3) == 0) in.frame.add_edge(i, a, b);

  FormulaGen gen(rng, 2, in.spec.n, 3);
  in.term = gen.term(2);

  auto plant = [&](auto&& self, Term s, int j, int w, Formula psi) -> void {
    if (pick(0, 5) == 0) return;  // leave a gap now and then
    int agent = j;
    if (pick(0, 3) == 0)
      for (auto [i, jj] : in.spec.C)
        if (jj == j) agent = i;
    switch (s.kind()) {
      case Kind::Var:
        in.assumptions.push_back({w, {agent, s, psi}});
        break;
      case Kind::App: {
        Formula phi = gen.formula(1);
        self(self, s.left(), agent, w, Formula::implies(phi, psi));
        self(self, s.right(), agent, w, phi);
        break;
      }
      case Kind::Sum:
        self(self, pick(0, 1) ? s.left() : s.right(), agent, w, psi);
        break;
      case Kind::Bang:
        if (psi.is_just() && psi.term() == s.inner()) self(self, s.inner(), psi.agent(), w, psi.body());
        break;
      default:
        break;
    }
  };
  for (int k = 0; k < 2; ++k) {
    Formula root = in.term.kind() == Kind::Bang ? Formula::just(in.term.inner(), pick(1, in.spec.n), gen.formula(1))
                                                : gen.formula(2);
    plant(plant, in.term, pick(1, in.spec.n), pick(0, worlds - 1), root);
  }
  for (int k = pick(0, 2); k > 0; --k)
    in.assumptions.push_back({pick(0, worlds - 1), {pick(1, in.spec.n), Term::variable(pick(1, 3)), gen.formula(1)}});

  in.universe = closed_universe(in, cap);
  if (in.universe.empty()) return std::nullopt;
  return in;
}

// A theorem [term]_agent body of a TOTAL logic together with a broken variant
// that is not a theorem.
struct ConstructedTheorem {
  int agent = 0;
  Term term;
  Formula body;
  Formula broken;
};

class TheoremBuilder {
 public:
  TheoremBuilder(const LogicSpec& spec, std::mt19937& rng) : spec_(spec), rng_(rng), gen_(rng, 3, spec.n, 2) {}

  // depth bounds the number of combination steps above the axiom leaf.
  ConstructedTheorem build(int depth, bool allow_sum) {
    if (depth == 0 || pick(0, 3) == 0) return leaf();
    ConstructedTheorem sub = build(depth - 1, allow_sum);
    int choice = pick(0, allow_sum ? 2 : 1);
    if (choice == 1) {
      std::vector<int> targets;
      for (auto [i, j] : spec_.V)
        if (i == sub.agent) targets.push_back(j);
      if (!targets.empty()) {
        int j = targets[pick(0, static_cast<int>(targets.size()) - 1)];
        return {j, Term::bang(sub.term), Formula::just(sub.term, sub.agent, sub.body),
                Formula::just(sub.term, sub.agent, sub.broken)};
      }
    }
    if (choice == 2) {
      Term other = Term::variable(9);
      return {sub.agent, pick(0, 1) ? Term::sum(sub.term, other) : Term::sum(other, sub.term), sub.body, sub.broken};
    }
    // *App with a P1 instance: c_P1 . t proves psi -> body.
    int c = spec_.total_constant(sub.agent, {AxiomSchemeId::Kind::P1});
    Formula psi = gen_.formula(1);
    return {sub.agent, Term::app(Term::constant(c), sub.term), Formula::implies(psi, sub.body),
            Formula::implies(psi, sub.broken)};
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  ConstructedTheorem leaf() {
    auto ids = spec_.axiom_ids();
    AxiomSchemeId id = ids[pick(0, static_cast<int>(ids.size()) - 1)];
    int agent = pick(1, spec_.n);
    Formula scheme = scheme_of(id);
    Formula body = instantiate(scheme);
    // A broken instance keeps the top shape but is no instance of the scheme.
    Formula broken;
    for (int tries = 0; tries < 50 && !broken.valid(); ++tries) {
      Formula cand = instantiate(scheme);
      cand = replace_one_atom(cand);
      if (!is_instance(cand, scheme)) broken = cand;
    }
    if (!broken.valid()) broken = Formula::atom(9);
    return {agent, Term::constant(spec_.total_constant(agent, id)), body, broken};
  }

  Formula instantiate(Formula scheme) {
    Substitution s;
    bind_all(scheme.expr(), s);
    return s.apply(scheme);
  }

  void bind_all(const Expr* e, Substitution& s) {
    if (!e || !e->has_meta) return;
    if (e->kind == Kind::FormulaMeta) {
      if (s.resolve(e) == e) s.bind(e, gen_.formula(1).expr());
      return;
    }
    if (e->kind == Kind::TermMeta) {
      if (s.resolve(e) == e) s.bind(e, gen_.term(1).expr());
      return;
    }
    if (e->kind == Kind::Just && is_agent_meta(e->index) && is_agent_meta(s.resolve_agent(e->index)))
      s.bind_agent(-e->index, pick(1, spec_.n));
    bind_all(e->left, s);
    bind_all(e->right, s);
  }

  // Replaces the leftmost atom (or falsum) occurrence by a fresh atom p7.
  Formula replace_one_atom(Formula f) {
    if (f.is_atom() || f.is_falsum()) return Formula::atom(7);
    if (f.is_implies()) {
      if (pick(0, 1)) return Formula::implies(replace_one_atom(f.ant()), f.cons());
      return Formula::implies(f.ant(), replace_one_atom(f.cons()));
    }
    if (f.is_just()) return Formula::just(f.term(), f.agent(), replace_one_atom(f.body()));
    return f;
  }

  const LogicSpec& spec_;
  std::mt19937& rng_;
  FormulaGen gen_;
};

}  // namespace jl::testing

#endif  // JL_TESTS_STAR_GENERATORS_HPP_
