// Hash-consed expression nodes shared by terms, formulas and schemes.
//
// Every node is interned, so two structurally equal expressions are the same
// pointer. Schemes are ordinary formulas that happen to contain metavariables
// (formula metas, term metas, or agent metas in a justification node).

#ifndef JL_EXPR_HPP_
#define JL_EXPR_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace jl {

enum class Kind : std::uint8_t {
  // terms
  Const,
  Var,
  Sum,
  App,
  Bang,
  TermMeta,
  // formulas
  Atom,
  Falsum,
  Implies,
  Just,
  FormulaMeta,
};

// Agent references inside a justification node: positive values are agent
// ids, negative values -k stand for the agent metavariable k.
using AgentRef = int;

inline bool is_agent_meta(AgentRef a) { return a < 0; }

struct Expr {
  Kind kind;
  // Const/Var/Atom/metas: index. Just: agent reference.
  int index;
  const Expr* left;   // Sum/App: left; Bang: inner; Implies: antecedent; Just: term
  const Expr* right;  // Sum/App: right; Implies: consequent; Just: body
  std::size_t hash;
  std::uint64_t id;   // creation order; gives a deterministic total order
  std::uint32_t size; // node count of the tree (not the DAG)
  bool has_meta;

  bool is_term() const { return kind <= Kind::TermMeta; }
  bool is_formula() const { return !is_term(); }
};

// Returns the unique interned node. Thread-safe.
const Expr* intern(Kind kind, int index, const Expr* left, const Expr* right);

class Term {
 public:
  Term() = default;
  explicit Term(const Expr* e) : e_(e) {}

  static Term constant(int k);
  static Term variable(int k);
  static Term sum(Term l, Term r);
  static Term app(Term l, Term r);
  static Term bang(Term t);
  static Term meta(int k);

  Kind kind() const { return e_->kind; }
  int index() const { return e_->index; }
  Term left() const { return Term(e_->left); }
  Term right() const { return Term(e_->right); }
  Term inner() const { return Term(e_->left); }
  std::uint32_t size() const { return e_->size; }
  bool has_meta() const { return e_->has_meta; }
  bool valid() const { return e_ != nullptr; }
  const Expr* expr() const { return e_; }

  bool has_sum() const;
  // Number of leading `!`, and the constant below them when the term is
  // !...!c; otherwise returns -1.
  int ladder_depth() const;

  friend bool operator==(Term a, Term b) { return a.e_ == b.e_; }
  friend bool operator!=(Term a, Term b) { return a.e_ != b.e_; }
  friend bool operator<(Term a, Term b) { return a.e_->id < b.e_->id; }

 private:
  const Expr* e_ = nullptr;
};

class Formula {
 public:
  Formula() = default;
  explicit Formula(const Expr* e) : e_(e) {}

  static Formula atom(int k);
  static Formula falsum();
  static Formula implies(Formula a, Formula b);
  static Formula just(Term t, AgentRef agent, Formula body);
  static Formula meta(int k);
  // Sugar.
  static Formula neg(Formula a) { return implies(a, falsum()); }
  static Formula conj(Formula a, Formula b) { return neg(implies(a, neg(b))); }
  static Formula disj(Formula a, Formula b) { return implies(neg(a), b); }

  Kind kind() const { return e_->kind; }
  int index() const { return e_->index; }
  AgentRef agent() const { return e_->index; }
  Formula ant() const { return Formula(e_->left); }
  Formula cons() const { return Formula(e_->right); }
  Term term() const { return Term(e_->left); }
  Formula body() const { return Formula(e_->right); }
  std::uint32_t size() const { return e_->size; }
  bool has_meta() const { return e_->has_meta; }
  bool valid() const { return e_ != nullptr; }
  const Expr* expr() const { return e_; }

  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_falsum() const { return kind() == Kind::Falsum; }
  bool is_implies() const { return kind() == Kind::Implies; }
  bool is_just() const { return kind() == Kind::Just; }

  friend bool operator==(Formula a, Formula b) { return a.e_ == b.e_; }
  friend bool operator!=(Formula a, Formula b) { return a.e_ != b.e_; }
  friend bool operator<(Formula a, Formula b) { return a.e_->id < b.e_->id; }

 private:
  const Expr* e_ = nullptr;
};

// *_agent(term, body)
struct StarExpression {
  int agent = 0;
  Term term;
  Formula body;

  friend bool operator==(const StarExpression& a, const StarExpression& b) {
    return a.agent == b.agent && a.term == b.term && a.body == b.body;
  }
  friend auto operator<=>(const StarExpression& a, const StarExpression& b) {
    if (a.agent != b.agent) return a.agent <=> b.agent;
    if (a.term != b.term) return a.term.expr()->id <=> b.term.expr()->id;
    return a.body.expr()->id <=> b.body.expr()->id;
  }
};

}  // namespace jl

template <>
struct std::hash<jl::Term> {
  std::size_t operator()(jl::Term t) const noexcept { return t.expr()->hash; }
};
template <>
struct std::hash<jl::Formula> {
  std::size_t operator()(jl::Formula f) const noexcept { return f.expr()->hash; }
};
template <>
struct std::hash<jl::StarExpression> {
  std::size_t operator()(const jl::StarExpression& s) const noexcept {
    return s.term.expr()->hash * 31 + s.body.expr()->hash * 7 + static_cast<std::size_t>(s.agent);
  }
};

#endif  // JL_EXPR_HPP_
