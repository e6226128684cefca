// Robinson unification over hash-consed scheme DAGs.
//
// Metavariables come in three sorts: formula metas, term metas and agent
// metas. A substitution is kept in triangular form and resolved lazily, so a
// shared subtree is visited once per resolution.

#ifndef JL_UNIFY_HPP_
#define JL_UNIFY_HPP_

#include <optional>
#include <unordered_map>

#include "jl/expr.hpp"

namespace jl {

class Substitution {
 public:
  // Metas whose index is below `bindable_from` are treated as rigid symbols.
  explicit Substitution(int bindable_from = 0) : bindable_from_(bindable_from) {}

  bool bindable(int meta_index) const { return meta_index >= bindable_from_; }

  Formula apply(Formula f) const { return Formula(apply_expr(f.expr())); }
  Term apply(Term t) const { return Term(apply_expr(t.expr())); }
  AgentRef resolve_agent(AgentRef a) const;

  // Follows bindings of a meta node until an unbound meta or a non-meta.
  const Expr* resolve(const Expr* e) const;

  void bind(const Expr* meta, const Expr* value) {
    bindings_[meta] = value;
    memo_.clear();
  }
  void bind_agent(int meta_index, AgentRef value) {
    agent_bindings_[meta_index] = value;
    memo_.clear();
  }

  bool empty() const { return bindings_.empty() && agent_bindings_.empty(); }
  const std::unordered_map<const Expr*, const Expr*>& bindings() const { return bindings_; }
  const std::unordered_map<int, AgentRef>& agent_bindings() const { return agent_bindings_; }

 private:
  const Expr* apply_expr(const Expr* e) const;

  int bindable_from_;
  std::unordered_map<const Expr*, const Expr*> bindings_;
  std::unordered_map<int, AgentRef> agent_bindings_;
  mutable std::unordered_map<const Expr*, const Expr*> memo_;
};

// Extends `s` to a most general unifier of a and b. On failure `s` is left in
// an unspecified state and false is returned.
bool unify(Formula a, Formula b, Substitution& s);
bool unify(Term a, Term b, Substitution& s);

// Most general unifier of two schemes with disjoint metavariables.
std::optional<Substitution> unify_schemes(Formula a, Formula b);

// Largest meta index (any sort, agent metas included) occurring in e; 0 if none.
int max_meta_index(const Expr* e);

// Renames every meta of f by adding `offset` to its index.
Formula shift_metas(Formula f, int offset);

// Renames metas to 1..k in first-occurrence order, so two schemes equal up to
// renaming have the same canonical form.
Formula canonical(Formula f);

// True iff `target` is an instance of `pattern` (metas of target are rigid).
bool is_instance(Formula target, Formula pattern);

// Most general unifier of two schemes whose metas are renamed apart first;
// returns the unified scheme, or an invalid Formula on failure.
Formula unify_apart(Formula a, Formula b);

}  // namespace jl

#endif  // JL_UNIFY_HPP_
