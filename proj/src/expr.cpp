#include "jl/expr.hpp"

#include <mutex>
#include <stdexcept>
#include <unordered_set>

namespace jl {

namespace {

struct NodeKey {
  Kind kind;
  int index;
  const Expr* left;
  const Expr* right;
};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t key_hash(const NodeKey& k) {
  std::size_t h = static_cast<std::size_t>(k.kind) * 1000003u;
  h = mix(h, static_cast<std::size_t>(k.index));
  h = mix(h, k.left ? k.left->hash : 17);
  h = mix(h, k.right ? k.right->hash : 29);
  return h;
}

struct PtrHash {
  using is_transparent = void;
  std::size_t operator()(const Expr* e) const { return e->hash; }
};

struct PtrEq {
  bool operator()(const Expr* a, const Expr* b) const {
    return a->kind == b->kind && a->index == b->index && a->left == b->left && a->right == b->right;
  }
};

class InternTable {
 public:
  const Expr* get(const NodeKey& k) {
    Expr probe{k.kind, k.index, k.left, k.right, key_hash(k), 0, 0, false};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = nodes_.find(&probe);
    if (it != nodes_.end()) return *it;
    auto* e = new Expr(probe);
    e->id = next_id_++;
    e->size = 1 + (k.left ? k.left->size : 0) + (k.right ? k.right->size : 0);
    e->has_meta = k.kind == Kind::TermMeta || k.kind == Kind::FormulaMeta ||
                  (k.kind == Kind::Just && is_agent_meta(k.index)) ||
                  (k.left && k.left->has_meta) || (k.right && k.right->has_meta);
    nodes_.insert(e);
    return e;
  }

 private:
  std::mutex mu_;
  // Nodes live for the whole process; handles are plain pointers.
  std::unordered_set<const Expr*, PtrHash, PtrEq> nodes_;
  std::uint64_t next_id_ = 1;
};

InternTable& table() {
  static InternTable t;
  return t;
}

}  // namespace

const Expr* intern(Kind kind, int index, const Expr* left, const Expr* right) {
  return table().get(NodeKey{kind, index, left, right});
}

Term Term::constant(int k) {
  if (k < 1) throw std::invalid_argument("constant index must be positive");
  return Term(intern(Kind::Const, k, nullptr, nullptr));
}
Term Term::variable(int k) {
  if (k < 1) throw std::invalid_argument("variable index must be positive");
  return Term(intern(Kind::Var, k, nullptr, nullptr));
}
Term Term::sum(Term l, Term r) { return Term(intern(Kind::Sum, 0, l.expr(), r.expr())); }
Term Term::app(Term l, Term r) { return Term(intern(Kind::App, 0, l.expr(), r.expr())); }
Term Term::bang(Term t) { return Term(intern(Kind::Bang, 0, t.expr(), nullptr)); }
Term Term::meta(int k) { return Term(intern(Kind::TermMeta, k, nullptr, nullptr)); }

bool Term::has_sum() const {
  switch (kind()) {
    case Kind::Sum: return true;
    case Kind::App: return left().has_sum() || right().has_sum();
    case Kind::Bang: return inner().has_sum();
    default: return false;
  }
}

int Term::ladder_depth() const {
  int k = 0;
  const Expr* e = e_;
  while (e->kind == Kind::Bang) {
    ++k;
    e = e->left;
  }
  return e->kind == Kind::Const ? k : -1;
}

Formula Formula::atom(int k) {
  if (k < 1) throw std::invalid_argument("atom index must be positive");
  return Formula(intern(Kind::Atom, k, nullptr, nullptr));
}
Formula Formula::falsum() { return Formula(intern(Kind::Falsum, 0, nullptr, nullptr)); }
Formula Formula::implies(Formula a, Formula b) {
  return Formula(intern(Kind::Implies, 0, a.expr(), b.expr()));
}
Formula Formula::just(Term t, AgentRef agent, Formula body) {
  if (agent == 0) throw std::invalid_argument("agent 0 is not an agent");
  return Formula(intern(Kind::Just, agent, t.expr(), body.expr()));
}
Formula Formula::meta(int k) { return Formula(intern(Kind::FormulaMeta, k, nullptr, nullptr)); }

}  // namespace jl
