#include "jl/unify.hpp"

#include <unordered_set>
#include <utility>
#include <vector>

namespace jl {

namespace {

bool is_meta_node(const Expr* e) { return e->kind == Kind::TermMeta || e->kind == Kind::FormulaMeta; }

bool occurs(const Expr* meta, const Expr* e, const Substitution& s) {
  std::vector<const Expr*> stack{e};
  std::unordered_set<const Expr*> seen;
  while (!stack.empty()) {
    const Expr* x = s.resolve(stack.back());
    stack.pop_back();
    if (x == meta) return true;
    if (!x->has_meta || !seen.insert(x).second) continue;
    if (x->left) stack.push_back(x->left);
    if (x->right) stack.push_back(x->right);
  }
  return false;
}

bool unify_agents(AgentRef a, AgentRef b, Substitution& s) {
  a = s.resolve_agent(a);
  b = s.resolve_agent(b);
  if (a == b) return true;
  if (is_agent_meta(a) && s.bindable(-a)) {
    s.bind_agent(-a, b);
    return true;
  }
  if (is_agent_meta(b) && s.bindable(-b)) {
    s.bind_agent(-b, a);
    return true;
  }
  return false;
}

bool unify_expr(const Expr* a, const Expr* b, Substitution& s) {
  std::vector<std::pair<const Expr*, const Expr*>> stack{{a, b}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    x = s.resolve(x);
    y = s.resolve(y);
    if (x == y) continue;
    if (is_meta_node(x) && s.bindable(x->index)) {
      if (occurs(x, y, s)) return false;
      s.bind(x, y);
      continue;
    }
    if (is_meta_node(y) && s.bindable(y->index)) {
      if (occurs(y, x, s)) return false;
      s.bind(y, x);
      continue;
    }
    if (x->kind != y->kind) return false;
    switch (x->kind) {
      case Kind::Sum:
      case Kind::App:
      case Kind::Implies:
        stack.emplace_back(x->left, y->left);
        stack.emplace_back(x->right, y->right);
        break;
      case Kind::Bang: stack.emplace_back(x->left, y->left); break;
      case Kind::Just:
        if (!unify_agents(x->index, y->index, s)) return false;
        stack.emplace_back(x->left, y->left);
        stack.emplace_back(x->right, y->right);
        break;
      default:
        // Distinct leaves (constants, atoms, rigid metas) never unify.
        return false;
    }
  }
  return true;
}

void max_meta_walk(const Expr* e, int& best, std::unordered_set<const Expr*>& seen) {
  if (!e || !e->has_meta || !seen.insert(e).second) return;
  if (is_meta_node(e)) best = std::max(best, e->index);
  if (e->kind == Kind::Just && is_agent_meta(e->index)) best = std::max(best, -e->index);
  max_meta_walk(e->left, best, seen);
  max_meta_walk(e->right, best, seen);
}

template <typename Fn>
const Expr* rebuild(const Expr* e, Fn&& rename_leaf, std::unordered_map<const Expr*, const Expr*>& memo) {
  if (!e->has_meta) return e;
  if (auto it = memo.find(e); it != memo.end()) return it->second;
  const Expr* out;
  if (is_meta_node(e)) {
    out = intern(e->kind, rename_leaf(e->kind, e->index), nullptr, nullptr);
  } else {
    int idx = e->index;
    if (e->kind == Kind::Just && is_agent_meta(idx)) idx = -rename_leaf(Kind::Just, -idx);
    const Expr* l = e->left ? rebuild(e->left, rename_leaf, memo) : nullptr;
    const Expr* r = e->right ? rebuild(e->right, rename_leaf, memo) : nullptr;
    out = intern(e->kind, idx, l, r);
  }
  memo.emplace(e, out);
  return out;
}

}  // namespace

AgentRef Substitution::resolve_agent(AgentRef a) const {
  while (is_agent_meta(a)) {
    auto it = agent_bindings_.find(-a);
    if (it == agent_bindings_.end()) break;
    a = it->second;
  }
  return a;
}

const Expr* Substitution::resolve(const Expr* e) const {
  while (is_meta_node(e)) {
    auto it = bindings_.find(e);
    if (it == bindings_.end()) break;
    e = it->second;
  }
  return e;
}

const Expr* Substitution::apply_expr(const Expr* e) const {
  if (!e->has_meta) return e;
  if (auto it = memo_.find(e); it != memo_.end()) return it->second;
  const Expr* out;
  if (is_meta_node(e)) {
    const Expr* r = resolve(e);
    out = r == e ? e : apply_expr(r);
  } else {
    int idx = e->index;
    if (e->kind == Kind::Just) idx = resolve_agent(idx);
    const Expr* l = e->left ? apply_expr(e->left) : nullptr;
    const Expr* r = e->right ? apply_expr(e->right) : nullptr;
    out = intern(e->kind, idx, l, r);
  }
  memo_.emplace(e, out);
  return out;
}

bool unify(Formula a, Formula b, Substitution& s) { return unify_expr(a.expr(), b.expr(), s); }
bool unify(Term a, Term b, Substitution& s) { return unify_expr(a.expr(), b.expr(), s); }

std::optional<Substitution> unify_schemes(Formula a, Formula b) {
  Substitution s;
  if (!unify(a, b, s)) return std::nullopt;
  return s;
}

int max_meta_index(const Expr* e) {
  int best = 0;
  std::unordered_set<const Expr*> seen;
  max_meta_walk(e, best, seen);
  return best;
}

Formula shift_metas(Formula f, int offset) {
  if (!f.has_meta() || offset == 0) return f;
  std::unordered_map<const Expr*, const Expr*> memo;
  return Formula(rebuild(f.expr(), [offset](Kind, int idx) { return idx + offset; }, memo));
}

Formula canonical(Formula f) {
  if (!f.has_meta()) return f;
  // Separate counters per sort keep the three namespaces independent.
  std::unordered_map<int, int> fm, tm, am;
  std::unordered_map<const Expr*, const Expr*> memo;
  auto rename = [&](Kind k, int idx) {
    auto& m = k == Kind::FormulaMeta ? fm : k == Kind::TermMeta ? tm : am;
    auto [it, fresh] = m.emplace(idx, static_cast<int>(m.size()) + 1);
    return it->second;
  };
  // rebuild visits children left to right, which fixes first-occurrence order.
  return Formula(rebuild(f.expr(), rename, memo));
}

bool is_instance(Formula target, Formula pattern) {
  if (!pattern.has_meta()) return target == pattern;
  int offset = max_meta_index(target.expr());
  Formula p = shift_metas(pattern, offset);
  Substitution s(offset + 1);
  return unify(p, target, s);
}

Formula unify_apart(Formula a, Formula b) {
  int offset = max_meta_index(a.expr());
  Formula b2 = shift_metas(b, offset);
  Substitution s;
  if (!unify(a, b2, s)) return Formula();
  return s.apply(a);
}

}  // namespace jl
