#include "jl/star.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <climits>
#include <deque>
#include <unordered_map>

#include "jl/unify.hpp"

namespace jl {

WorldSet::WorldSet(int size, bool full) : size_(size), bits_((static_cast<std::size_t>(size) + 63) / 64, 0) {
  if (full)
    for (int w = 0; w < size; ++w) insert(w);
}

bool WorldSet::empty() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t b) { return b == 0; });
}

int WorldSet::count() const {
  int c = 0;
  for (auto b : bits_) c += std::popcount(b);
  return c;
}

bool WorldSet::subset_of(const WorldSet& o) const {
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] & ~o.bits_[k]) return false;
  return true;
}

WorldSet& WorldSet::operator|=(const WorldSet& o) {
  for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] |= o.bits_[k];
  return *this;
}

WorldSet& WorldSet::operator&=(const WorldSet& o) {
  for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] &= o.bits_[k];
  return *this;
}

std::vector<int> WorldSet::members() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    std::uint64_t b = bits_[k];
    while (b) {
      out.push_back(static_cast<int>(k * 64) + std::countr_zero(b));
      b &= b - 1;
    }
  }
  return out;
}

FiniteFrame::FiniteFrame(int agents, int worlds)
    : agents_(agents), worlds_(worlds), succ_(agents + 1, std::vector<WorldSet>(worlds, WorldSet(worlds))) {}

void FiniteFrame::add_edge(int agent, int from, int to) {
  if (agent < 1 || agent > agents_ || from < 0 || from >= worlds_ || to < 0 || to >= worlds_)
    throw std::out_of_range("frame edge out of range");
  succ_[agent][from].insert(to);
}

int FiniteFrame::add_world() {
  int w = worlds_++;
  for (auto& per_agent : succ_) {
    std::vector<WorldSet> grown(worlds_, WorldSet(worlds_));
    for (int a = 0; a < w; ++a)
      for (int b : per_agent[a].members()) grown[a].insert(b);
    per_agent = std::move(grown);
  }
  return w;
}

namespace {

// !^(level) c for level >= 0.
Term bangs(Term c, int level) {
  for (int k = 0; k < level; ++k) c = Term::bang(c);
  return c;
}

// [!^{k-1}c]_{i_k} ... [c]_{i_1} A with i_1 fixed and i_2..i_k fresh agent metas
// numbered above `first_free`.
Formula ladder_scheme(Term c, int depth, int agent, Formula axiom, int first_free) {
  Formula f = axiom;
  for (int level = 1; level <= depth; ++level) {
    AgentRef who = level == 1 ? agent : -(first_free + level - 2);
    f = Formula::just(bangs(c, level - 1), who, f);
  }
  return f;
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

struct Deriver::Impl {
  struct Entry {
    Formula scheme;
    WorldSet worlds;
    int nodes = 1;
    std::vector<int> used;
  };
  using Cell = std::vector<Entry>;
  using Row = std::vector<Cell>;  // indexed by agent

  LogicSpec spec;
  FiniteFrame frame;
  std::vector<PrefixedStar> assumptions;
  std::vector<std::vector<int>> v_targets;  // agent -> {j' | (agent, j') in V}
  // (agent, term) -> formula -> assumption indices
  std::map<std::pair<int, const Expr*>, std::map<Formula, std::vector<int>>> given;
  std::unordered_map<Term, Row> table;
  std::size_t entry_count = 0;

  Impl(const LogicSpec& s, const FiniteFrame& f, std::vector<PrefixedStar> as)
      : spec(s), frame(f), v_targets(s.n + 1) {
    std::sort(as.begin(), as.end());
    as.erase(std::unique(as.begin(), as.end()), as.end());
    assumptions = std::move(as);
    for (auto [i, j] : spec.V) v_targets[i].push_back(j);
    for (std::size_t k = 0; k < assumptions.size(); ++k) {
      const auto& a = assumptions[k];
      given[{a.star.agent, a.star.term.expr()}][a.star.body].push_back(static_cast<int>(k));
    }
  }

  WorldSet close(int j, WorldSet x) const {
    std::vector<int> queue = x.members();
    while (!queue.empty()) {
      int a = queue.back();
      queue.pop_back();
      for (int k : v_targets[j])
        for (int b : frame.successors(k, a).members())
          if (!x.contains(b)) {
            x.insert(b);
            queue.push_back(b);
          }
    }
    return x;
  }

  // Returns true if the cell changed.
  bool add(Cell& cell, Entry e) {
    if (e.worlds.empty()) return false;
    e.scheme = canonical(e.scheme);
    for (auto& old : cell)
      if (old.scheme == e.scheme) {
        if (e.worlds.subset_of(old.worlds)) return false;
        old.worlds |= e.worlds;
        old.nodes = std::max(old.nodes, e.nodes);
        old.used = sorted_union(old.used, e.used);
        return true;
      }
    for (const auto& old : cell)
      if (e.worlds.subset_of(old.worlds) && is_instance(e.scheme, old.scheme)) return false;
    std::erase_if(cell, [&](const Entry& old) {
      return old.worlds.subset_of(e.worlds) && is_instance(old.scheme, e.scheme);
    });
    cell.push_back(std::move(e));
    ++entry_count;
    return true;
  }

  const Row& row(Term s) {
    if (auto it = table.find(s); it != table.end()) return it->second;
    const int n = spec.n;
    const int W = frame.worlds();
    Row out(n + 1);

    // Children first; references into the table stay valid across rehashing.
    const Row* left = nullptr;
    const Row* right = nullptr;
    if (s.kind() == Kind::App || s.kind() == Kind::Sum) {
      left = &row(s.left());
      right = &row(s.right());
    } else if (s.kind() == Kind::Bang) {
      left = &row(s.inner());
    }

    for (int j = 1; j <= n; ++j) {
      Cell& cell = out[j];
      if (auto it = given.find({j, s.expr()}); it != given.end())
        for (const auto& [body, idx] : it->second) {
          WorldSet x(W);
          for (int k : idx) x.insert(assumptions[k].world);
          add(cell, {body, close(j, x), 1, idx});
        }

      if (int depth = s.ladder_depth(); depth >= 0) {
        Term c = s;
        while (c.kind() == Kind::Bang) c = c.inner();
        for (const auto& e : spec.cs.entries_for(c.index())) {
          if (depth == 0 && e.agent != j) continue;
          Formula axiom = scheme_of(e.scheme);
          Formula f = ladder_scheme(c, depth, e.agent, axiom, max_meta_index(axiom.expr()) + 1);
          add(cell, {f, WorldSet(W, true), 1, {}});
        }
      }

      if (s.kind() == Kind::App) {
        for (const auto& e1 : (*left)[j])
          for (const auto& e2 : (*right)[j]) {
            if (!e1.scheme.is_implies() && e1.scheme.kind() != Kind::FormulaMeta) continue;
            WorldSet x = e1.worlds;
            x &= e2.worlds;
            if (x.empty()) continue;
            int m1 = max_meta_index(e1.scheme.expr());
            Formula p2 = shift_metas(e2.scheme, m1);
            int m = std::max(m1, max_meta_index(p2.expr()));
            Formula M = Formula::meta(m + 1), N = Formula::meta(m + 2);
            Substitution sub;
            if (!unify(e1.scheme, Formula::implies(M, N), sub) || !unify(M, p2, sub)) continue;
            add(cell, {sub.apply(N), close(j, x), 1 + e1.nodes + e2.nodes, sorted_union(e1.used, e2.used)});
          }
      } else if (s.kind() == Kind::Sum) {
        for (const Row* side : {left, right})
          for (const auto& e : (*side)[j]) add(cell, {e.scheme, e.worlds, 1 + e.nodes, e.used});
      } else if (s.kind() == Kind::Bang) {
        for (auto [i, jj] : spec.V) {
          if (jj != j) continue;
          for (const auto& e : (*left)[i])
            add(cell, {Formula::just(s.inner(), i, e.scheme), close(j, e.worlds), 1 + e.nodes, e.used});
        }
      }
    }

    for (bool changed = true; changed;) {
      changed = false;
      for (auto [i, j] : spec.C) {
        if (i == j) continue;
        Cell copy = out[i];
        for (auto& e : copy) {
          e.worlds = close(j, e.worlds);
          changed |= add(out[j], std::move(e));
        }
      }
    }
    return table.emplace(s, std::move(out)).first->second;
  }

  const Entry* witness(const PrefixedStar& goal) {
    if (goal.star.agent < 1 || goal.star.agent > spec.n) return nullptr;
    if (goal.world < 0 || goal.world >= frame.worlds()) return nullptr;
    const Entry* best = nullptr;
    for (const auto& e : row(goal.star.term)[goal.star.agent])
      if (e.worlds.contains(goal.world) && is_instance(goal.star.body, e.scheme))
        if (!best || e.nodes + e.used.size() < best->nodes + best->used.size()) best = &e;
    return best;
  }
};

namespace {

std::atomic<std::uint64_t> g_queries{0};
std::atomic<std::uint64_t> g_violations{0};
std::atomic<int> g_worst_slack{INT_MAX};

}  // namespace

StarInstrumentation star_instrumentation() {
  int slack = g_worst_slack.load();
  return {g_queries.load(), g_violations.load(), slack == INT_MAX ? 0 : slack};
}

void reset_star_instrumentation() {
  g_queries = 0;
  g_violations = 0;
  g_worst_slack = INT_MAX;
}

Deriver::Deriver(const LogicSpec& spec, const FiniteFrame& frame, std::vector<PrefixedStar> assumptions)
    : impl_(std::make_unique<Impl>(spec, frame, std::move(assumptions))) {}

Deriver::~Deriver() = default;

bool Deriver::derivable(const PrefixedStar& goal, StarStats* stats) {
  const Impl::Entry* e = impl_->witness(goal);
  ++g_queries;
  if (e) {
    int bound = static_cast<int>(goal.star.term.size() + impl_->assumptions.size());
    int slack = bound - e->nodes - static_cast<int>(e->used.size());
    if (slack < 0) ++g_violations;
    int prev = g_worst_slack.load();
    while (slack < prev && !g_worst_slack.compare_exchange_weak(prev, slack)) {
    }
  }
  if (stats) {
    stats->term_size = static_cast<int>(goal.star.term.size());
    stats->distinct_assumptions = static_cast<int>(impl_->assumptions.size());
    stats->choices = e ? e->nodes + static_cast<int>(e->used.size()) : 0;
    stats->table_entries = impl_->entry_count;
  }
  return e != nullptr;
}

WorldSet Deriver::worlds_for(int agent, Term term, Formula body) {
  WorldSet out(impl_->frame.worlds());
  if (agent < 1 || agent > impl_->spec.n) return out;
  for (const auto& e : impl_->row(term)[agent])
    if (!e.worlds.subset_of(out) && is_instance(body, e.scheme)) out |= e.worlds;
  return out;
}

bool derivable(const LogicSpec& spec, const FiniteFrame& frame, const std::vector<PrefixedStar>& assumptions,
               const PrefixedStar& goal, StarStats* stats) {
  Deriver d(spec, frame, assumptions);
  return d.derivable(goal, stats);
}

std::optional<PrefixedStar> derives_any(const LogicSpec& spec, const FiniteFrame& frame,
                                        const std::vector<PrefixedStar>& assumptions,
                                        const std::vector<PrefixedStar>& targets) {
  if (targets.empty()) return std::nullopt;
  Deriver d(spec, frame, assumptions);
  for (const auto& t : targets)
    if (d.derivable(t)) return t;
  return std::nullopt;
}

bool prove_justified(const LogicSpec& spec, int agent, Term term, Formula body, StarStats* stats) {
  FiniteFrame frame(spec.n, 1);
  return derivable(spec, frame, {}, {0, {agent, term, body}}, stats);
}

namespace {

class PlusFreeSolver {
 public:
  explicit PlusFreeSolver(const LogicSpec& spec) : spec_(spec), reach_(spec.n + 1, std::vector<bool>(spec.n + 1)) {
    for (int i = 1; i <= spec.n; ++i) reach_[i][i] = true;
    for (auto [i, j] : spec.C) reach_[i][j] = true;
    for (int k = 1; k <= spec.n; ++k)
      for (int i = 1; i <= spec.n; ++i)
        if (reach_[i][k])
          for (int j = 1; j <= spec.n; ++j)
            if (reach_[k][j]) reach_[i][j] = true;
  }

  // Solutions for "*_i(t, G) is derivable", each extending s.
  std::vector<Substitution> solve(int i, Term t, Formula G, const Substitution& s) {
    std::vector<Substitution> out;
    auto try_scheme = [&](Formula scheme) {
      Substitution s2 = s;
      if (unify(G, fresh(scheme), s2)) out.push_back(std::move(s2));
    };
    switch (t.kind()) {
      case Kind::Const:
        for (const auto& e : spec_.cs.entries_for(t.index()))
          if (reach_[e.agent][i]) try_scheme(scheme_of(e.scheme));
        break;
      case Kind::Bang: {
        if (int depth = t.ladder_depth(); depth >= 1) {
          Term c = t;
          while (c.kind() == Kind::Bang) c = c.inner();
          for (const auto& e : spec_.cs.entries_for(c.index())) {
            Formula axiom = scheme_of(e.scheme);
            try_scheme(ladder_scheme(c, depth, e.agent, axiom, max_meta_index(axiom.expr()) + 1));
          }
        }
        for (auto [k, j] : spec_.V) {
          if (!reach_[j][i]) continue;
          Formula B = Formula::meta(next_++);
          Substitution s2 = s;
          if (!unify(G, Formula::just(t.inner(), k, B), s2)) continue;
          for (auto& r : solve(k, t.inner(), B, s2)) out.push_back(std::move(r));
        }
        break;
      }
      case Kind::App:
        for (int j = 1; j <= spec_.n; ++j) {
          if (!reach_[j][i]) continue;
          Formula M = Formula::meta(next_++);
          for (auto& r1 : solve(j, t.left(), Formula::implies(M, G), s))
            for (auto& r2 : solve(j, t.right(), M, r1)) out.push_back(std::move(r2));
        }
        break;
      default:
        break;
    }
    // Keep one solution per image of the goal.
    std::vector<Substitution> unique;
    std::set<Formula> seen;
    for (auto& r : out)
      if (seen.insert(r.apply(G)).second) unique.push_back(std::move(r));
    if (unique.size() > 1) ++branch_points;
    return unique;
  }

  int branch_points = 0;

 private:
  Formula fresh(Formula scheme) {
    Formula f = shift_metas(scheme, next_);
    next_ += max_meta_index(scheme.expr()) + 1;
    return f;
  }

  const LogicSpec& spec_;
  std::vector<std::vector<bool>> reach_;  // reach_[i][j]: i C* j
  int next_ = 1;
};

}  // namespace

bool prove_plus_free(const LogicSpec& spec, int agent, Term term, Formula body, int* branch_points) {
  if (term.has_sum()) throw PreconditionError("term contains '+'");
  if (!spec.cs.schematically_injective()) throw PreconditionError("constant specification is not schematically injective");
  if (agent < 1 || agent > spec.n) return false;
  PlusFreeSolver solver(spec);
  Formula goal = shift_metas(body, 0);
  bool ok = !solver.solve(agent, term, goal, Substitution()).empty();
  if (branch_points) *branch_points = solver.branch_points;
  return ok;
}

std::set<PrefixedStar> saturate_naive(const LogicSpec& spec, const FiniteFrame& frame,
                                      const std::vector<PrefixedStar>& assumptions,
                                      const std::set<PrefixedStar>& universe) {
  std::set<PrefixedStar> d(assumptions.begin(), assumptions.end());
  auto has = [&](int w, int agent, Term t, Formula f) { return d.count({w, {agent, t, f}}) > 0; };
  auto one_step = [&](const PrefixedStar& u) {
    const auto& [j, t, phi] = u.star;
    const int w = u.world;
    if (in_cl(spec, j, t, phi)) return true;
    if (t.kind() == Kind::App)
      for (const auto& p : d)
        if (p.world == w && p.star.agent == j && p.star.term == t.left() && p.star.body.is_implies() &&
            p.star.body.cons() == phi && has(w, j, t.right(), p.star.body.ant()))
          return true;
    if (t.kind() == Kind::Sum && (has(w, j, t.left(), phi) || has(w, j, t.right(), phi))) return true;
    if (t.kind() == Kind::Bang && phi.is_just() && phi.term() == t.inner() && !is_agent_meta(phi.agent()) &&
        spec.V.count({phi.agent(), j}) && has(w, phi.agent(), t.inner(), phi.body()))
      return true;
    for (auto [i, jj] : spec.C)
      if (jj == j && has(w, i, t, phi)) return true;
    for (auto [i, k] : spec.V)
      if (i == j)
        for (int a = 0; a < frame.worlds(); ++a)
          if (frame.has_edge(k, a, w) && has(a, j, t, phi)) return true;
    return false;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& u : universe)
      if (!d.count(u) && one_step(u)) {
        d.insert(u);
        changed = true;
      }
  }
  std::set<PrefixedStar> out;
  for (const auto& u : d)
    if (universe.count(u)) out.insert(u);
  return out;
}

}  // namespace jl
