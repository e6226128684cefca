#include "jl/models.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "jl/syntax.hpp"

namespace jl {

bool FModel::holds(int atom, int world) const {
  auto it = valuation.find(atom);
  return it != valuation.end() && it->second.contains(world);
}

std::string FModel::to_text() const {
  std::ostringstream os;
  os << "worlds " << frame.worlds() << "\nroot " << root << "\n";
  for (int i = 1; i <= frame.agents(); ++i)
    for (int a = 0; a < frame.worlds(); ++a)
      for (int b : frame.successors(i, a).members()) os << "edge " << i << " " << a << " " << b << "\n";
  for (const auto& [atom, ws] : valuation) {
    if (ws.empty()) continue;
    os << "true p" << atom;
    for (int w : ws.members()) os << " " << w;
    os << "\n";
  }
  for (const auto& s : seeds)
    os << "seed " << s.world << " " << s.star.agent << " " << print_term(s.star.term) << " : "
       << print_formula(s.star.body) << "\n";
  return os.str();
}

FModel parse_model(const std::string& text, const LogicSpec& spec) {
  FModel m;
  m.spec = spec;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_worlds = false;
  auto fail = [&](const std::string& msg) { throw ModelError("model line " + std::to_string(line_no) + ": " + msg); };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    if (key == "worlds") {
      int n = 0;
      if (!(ls >> n) || n < 1) fail("expected a positive world count");
      m.frame = FiniteFrame(spec.n, n);
      have_worlds = true;
      continue;
    }
    if (!have_worlds) fail("'worlds' must come first");
    if (key == "root") {
      if (!(ls >> m.root) || m.root < 0 || m.root >= m.frame.worlds()) fail("bad root");
    } else if (key == "edge") {
      int i, a, b;
      if (!(ls >> i >> a >> b)) fail("expected 'edge AGENT FROM TO'");
      try {
        m.frame.add_edge(i, a, b);
      } catch (const std::out_of_range&) {
        fail("edge out of range");
      }
    } else if (key == "true") {
      std::string atom;
      ls >> atom;
      Formula p = parse_formula(atom);
      if (!p.is_atom()) fail("expected an atom");
      WorldSet& ws = m.valuation.try_emplace(p.index(), m.frame.worlds()).first->second;
      int w;
      while (ls >> w) {
        if (w < 0 || w >= m.frame.worlds()) fail("world out of range");
        ws.insert(w);
      }
    } else if (key == "seed") {
      int w, i;
      if (!(ls >> w >> i)) fail("expected 'seed WORLD AGENT TERM : FORMULA'");
      std::string rest;
      std::getline(ls, rest);
      auto colon = rest.find(':');
      if (colon == std::string::npos) fail("missing ':' in seed");
      if (w < 0 || w >= m.frame.worlds() || i < 1 || i > spec.n) fail("seed out of range");
      m.seeds.push_back({w, {i, parse_term(rest.substr(0, colon)), parse_formula(rest.substr(colon + 1))}});
    } else {
      fail("unknown keyword '" + key + "'");
    }
  }
  if (!have_worlds) throw ModelError("model has no 'worlds' line");
  return m;
}

Evaluator::Evaluator(const FModel& model)
    : model_(model), deriver_(std::make_unique<Deriver>(model.spec, model.frame, model.seeds)) {}

Evaluator::~Evaluator() = default;

const WorldSet& Evaluator::evidence(int agent, Term t, Formula f) {
  auto key = std::make_tuple(agent, t.expr(), f.expr());
  auto it = evidence_.find(key);
  if (it == evidence_.end()) it = evidence_.emplace(key, deriver_->worlds_for(agent, t, f)).first;
  return it->second;
}

bool Evaluator::evaluate(int world, Formula f) {
  const int W = model_.frame.worlds();
  if (world < 0 || world >= W) throw ModelError("unknown world " + std::to_string(world));
  std::function<const WorldSet&(Formula)> truth = [&](Formula g) -> const WorldSet& {
    if (auto it = truth_.find(g.expr()); it != truth_.end()) return it->second;
    WorldSet out(W);
    switch (g.kind()) {
      case Kind::Atom:
        for (int w = 0; w < W; ++w)
          if (model_.holds(g.index(), w)) out.insert(w);
        break;
      case Kind::Falsum:
        break;
      case Kind::Implies: {
        WorldSet a = truth(g.ant());
        const WorldSet& b = truth(g.cons());
        for (int w = 0; w < W; ++w)
          if (!a.contains(w) || b.contains(w)) out.insert(w);
        break;
      }
      case Kind::Just: {
        WorldSet ev = evidence(g.agent(), g.term(), g.body());
        const WorldSet& body = truth(g.body());
        for (int w : ev.members())
          if (model_.frame.successors(g.agent(), w).subset_of(body)) out.insert(w);
        break;
      }
      default:
        throw ModelError("cannot evaluate a scheme");
    }
    return truth_.emplace(g.expr(), std::move(out)).first->second;
  };
  return truth(f).contains(world);
}

bool evaluate(const FModel& model, int world, Formula f) {
  Evaluator ev(model);
  return ev.evaluate(world, f);
}

std::vector<FrameViolation> validate_frame(const FiniteFrame& frame, const LogicSpec& spec) {
  std::vector<FrameViolation> out;
  const int W = frame.worlds();
  auto name = [](int i, int a, int b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ") in R_" + std::to_string(i);
  };
  for (int i : spec.F)
    for (int a = 0; a < W; ++a)
      if (!frame.has_edge(i, a, a)) out.push_back({"reflexivity", "missing " + name(i, a, a)});
  for (int i : spec.D)
    for (int a = 0; a < W; ++a)
      if (frame.successors(i, a).empty())
        out.push_back({"seriality", "world " + std::to_string(a) + " has no R_" + std::to_string(i) + " successor"});
  for (auto [i, j] : spec.V)
    for (int a = 0; a < W; ++a)
      for (int b : frame.successors(j, a).members())
        for (int c : frame.successors(i, b).members())
          if (!frame.has_edge(i, a, c))
            out.push_back({"V-transitivity", name(j, a, b) + " and " + name(i, b, c) + " but not " + name(i, a, c)});
  for (auto [i, j] : spec.C)
    for (int a = 0; a < W; ++a)
      for (int b : frame.successors(j, a).members())
        if (!frame.has_edge(i, a, b)) out.push_back({"C-inclusion", name(j, a, b) + " but not " + name(i, a, b)});
  return out;
}

namespace {

std::vector<Formula> justification_subformulas(Formula f) {
  std::vector<Formula> out;
  for (Formula g : subformulas(f))
    if (g.is_just()) out.push_back(g);
  return out;
}

}  // namespace

std::vector<PrefixedStar> relevant_expressions(const FModel& model, Formula f) {
  std::vector<PrefixedStar> out;
  for (Formula g : justification_subformulas(f))
    for (int w = 0; w < model.frame.worlds(); ++w) out.push_back({w, {g.agent(), g.term(), g.body()}});
  return out;
}

bool check_strong_evidence(const FModel& model, const std::vector<PrefixedStar>& relevant) {
  Evaluator ev(model);
  for (const auto& r : relevant) {
    if (!ev.evidence(r.star.agent, r.star.term, r.star.body).contains(r.world)) continue;
    for (int b : model.frame.successors(r.star.agent, r.world).members())
      if (!ev.evaluate(b, r.star.body)) return false;
  }
  return true;
}

namespace {

enum class T3 : std::uint8_t { False, Unknown, True };

T3 and3(T3 a, T3 b) {
  if (a == T3::False || b == T3::False) return T3::False;
  if (a == T3::True && b == T3::True) return T3::True;
  return T3::Unknown;
}

T3 implies3(T3 a, T3 b) {
  if (a == T3::False || b == T3::True) return T3::True;
  if (a == T3::True && b == T3::False) return T3::False;
  return T3::Unknown;
}

class OracleSearch {
 public:
  OracleSearch(const LogicSpec& spec, Formula f, const FiniteFrame& frame, std::size_t& nodes, std::size_t max_nodes)
      : spec_(spec), f_(f), frame_(frame), nodes_(nodes), max_nodes_(max_nodes) {
    for (Formula g : justification_subformulas(f)) triples_.push_back(g);
    for (int a : atoms_of(f)) atoms_.push_back(a);
    const int W = frame.worlds();
    seed_state_.assign(triples_.size() * W, T3::Unknown);
    atom_state_.assign(atoms_.size() * W, T3::Unknown);
  }

  // True: model found; false: none on this frame. Sets exhausted_ on budget.
  bool run() { return seeds(0); }
  bool exhausted() const { return exhausted_; }

  FModel model() const {
    FModel m;
    m.spec = spec_;
    m.frame = frame_;
    const int W = frame_.worlds();
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      WorldSet ws(W);
      for (int w = 0; w < W; ++w)
        if (atom_state_[a * W + w] == T3::True) ws.insert(w);
      m.valuation.emplace(atoms_[a], ws);
    }
    m.seeds = seed_list(false);
    return m;
  }

 private:
  std::vector<PrefixedStar> seed_list(bool include_unknown) const {
    std::vector<PrefixedStar> out;
    const int W = frame_.worlds();
    for (std::size_t r = 0; r < triples_.size(); ++r)
      for (int w = 0; w < W; ++w) {
        T3 s = seed_state_[r * W + w];
        if (s == T3::True || (include_unknown && s == T3::Unknown))
          out.push_back({w, {triples_[r].agent(), triples_[r].term(), triples_[r].body()}});
      }
    return out;
  }

  void compute_evidence(bool exact) {
    Deriver lo(spec_, frame_, seed_list(false));
    lo_.clear();
    for (Formula g : triples_) lo_.push_back(lo.worlds_for(g.agent(), g.term(), g.body()));
    if (exact) {
      hi_ = lo_;
      return;
    }
    Deriver hi(spec_, frame_, seed_list(true));
    hi_.clear();
    for (Formula g : triples_) hi_.push_back(hi.worlds_for(g.agent(), g.term(), g.body()));
  }

  T3 eval(int w, Formula g) {
    auto key = std::make_pair(w, g.expr());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    T3 out = T3::Unknown;
    switch (g.kind()) {
      case Kind::Atom: {
        auto pos = std::find(atoms_.begin(), atoms_.end(), g.index()) - atoms_.begin();
        out = atom_state_[pos * frame_.worlds() + w];
        break;
      }
      case Kind::Falsum:
        out = T3::False;
        break;
      case Kind::Implies:
        out = implies3(eval(w, g.ant()), eval(w, g.cons()));
        break;
      case Kind::Just: {
        auto r = std::find(triples_.begin(), triples_.end(), g) - triples_.begin();
        T3 ev = lo_[r].contains(w) ? T3::True : hi_[r].contains(w) ? T3::Unknown : T3::False;
        out = ev;
        for (int b : frame_.successors(g.agent(), w).members()) out = and3(out, eval(b, g.body()));
        break;
      }
      default:
        break;
    }
    memo_.emplace(key, out);
    return out;
  }

  // False when the current partial assignment is already refuted.
  T3 status() {
    memo_.clear();
    T3 root = eval(0, f_);
    if (root == T3::False) return T3::False;
    T3 all = root;
    for (std::size_t r = 0; r < triples_.size(); ++r)
      for (int w = 0; w < frame_.worlds(); ++w) {
        if (!hi_[r].contains(w)) continue;
        T3 succ = T3::True;
        for (int b : frame_.successors(triples_[r].agent(), w).members())
          succ = and3(succ, eval(b, triples_[r].body()));
        if (lo_[r].contains(w)) {
          if (succ == T3::False) return T3::False;
          all = and3(all, succ);
        } else {
          all = and3(all, T3::Unknown);
        }
      }
    return all;
  }

  bool budget() {
    if (++nodes_ > max_nodes_) exhausted_ = true;
    return !exhausted_;
  }

  bool seeds(std::size_t k) {
    if (!budget()) return false;
    bool complete = k == seed_state_.size();
    compute_evidence(complete);
    if (status() == T3::False) return false;
    if (complete) return atoms(0);
    const int W = frame_.worlds();
    bool already = lo_[k / W].contains(static_cast<int>(k % W));
    if (!already) {
      seed_state_[k] = T3::True;
      if (seeds(k + 1)) return true;
      if (exhausted_) return false;
    }
    seed_state_[k] = T3::False;
    if (seeds(k + 1)) return true;
    seed_state_[k] = T3::Unknown;
    return false;
  }

  bool atoms(std::size_t k) {
    if (!budget()) return false;
    T3 s = status();
    if (s == T3::False) return false;
    if (k == atom_state_.size()) return s == T3::True;
    for (T3 v : {T3::True, T3::False}) {
      atom_state_[k] = v;
      if (atoms(k + 1)) return true;
      if (exhausted_) return false;
    }
    atom_state_[k] = T3::Unknown;
    return false;
  }

  const LogicSpec& spec_;
  Formula f_;
  const FiniteFrame& frame_;
  std::size_t& nodes_;
  std::size_t max_nodes_;
  bool exhausted_ = false;
  std::vector<Formula> triples_;
  std::vector<int> atoms_;
  std::vector<T3> seed_state_, atom_state_;
  std::vector<WorldSet> lo_, hi_;
  std::map<std::pair<int, const Expr*>, T3> memo_;
};

using Relation = std::uint32_t;  // bit a*k+b for the pair (a, b)

bool rel_has(Relation r, int k, int a, int b) { return (r >> (a * k + b)) & 1U; }

bool relation_ok_alone(Relation r, int k, bool reflexive, bool serial) {
  for (int a = 0; a < k; ++a) {
    if (reflexive && !rel_has(r, k, a, a)) return false;
    if (serial && ((r >> (a * k)) & ((1U << k) - 1)) == 0) return false;
  }
  return true;
}

// Conditions between agents i and j that only involve their two relations.
bool pair_ok(const LogicSpec& spec, const std::vector<Relation>& rel, int k, int i, int j) {
  auto check = [&](int x, int y) {
    if (spec.C.count({x, y}) && (rel[y] & ~rel[x])) return false;
    if (spec.V.count({x, y}))
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          if (rel_has(rel[y], k, a, b))
            for (int c = 0; c < k; ++c)
              if (rel_has(rel[x], k, b, c) && !rel_has(rel[x], k, a, c)) return false;
    return true;
  };
  return check(i, j) && (i == j || check(j, i));
}

bool reachable_from_root(const std::vector<Relation>& rel, int k) {
  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (int a = 0; a < k; ++a)
      if ((frontier >> a) & 1U)
        for (std::size_t i = 1; i < rel.size(); ++i) next |= (rel[i] >> (a * k)) & ((1U << k) - 1);
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1U << k) - 1;
}

Relation permute(Relation r, int k, const std::vector<int>& perm) {
  Relation out = 0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (rel_has(r, k, a, b)) out |= Relation{1} << (perm[a] * k + perm[b]);
  return out;
}

// Frames are considered up to renaming of the non-root worlds; only the
// lexicographically least encoding is searched.
bool canonical(const std::vector<Relation>& rel, int k) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin() + 1, perm.end())) {
    for (std::size_t i = 1; i < rel.size(); ++i) {
      Relation p = permute(rel[i], k, perm);
      if (p < rel[i]) return false;
      if (p > rel[i]) break;
    }
  }
  return true;
}

}  // namespace

OracleResult brute_force_sat(const LogicSpec& spec, Formula f, const OracleLimits& limits) {
  OracleResult result;
  const int n = spec.n;
  for (int k = 1; k <= limits.max_worlds; ++k) {
    if (k * k > 31) throw ModelError("oracle supports at most 5 worlds");
    std::vector<std::vector<Relation>> options(n + 1);
    for (int i = 1; i <= n; ++i)
      for (Relation r = 0; r < (Relation{1} << (k * k)); ++r)
        if (relation_ok_alone(r, k, spec.F.count(i) > 0, spec.D.count(i) > 0)) options[i].push_back(r);

    std::vector<Relation> rel(n + 1, 0);
    bool stop = false;
    std::function<void(int)> choose = [&](int i) {
      if (stop) return;
      if (i > n) {
        if (!reachable_from_root(rel, k) || !canonical(rel, k)) return;
        if (++result.frames > limits.max_frames) {
          stop = true;
          return;
        }
        FiniteFrame frame(n, k);
        for (int a = 1; a <= n; ++a)
          for (int x = 0; x < k; ++x)
            for (int y = 0; y < k; ++y)
              if (rel_has(rel[a], k, x, y)) frame.add_edge(a, x, y);
        OracleSearch search(spec, f, frame, result.search_nodes, limits.max_search_nodes);
        if (search.run()) {
          result.verdict = OracleVerdict::Sat;
          result.model = search.model();
          stop = true;
        } else if (search.exhausted()) {
          stop = true;
        }
        return;
      }
      for (Relation r : options[i]) {
        rel[i] = r;
        bool ok = true;
        for (int j = 1; j <= i && ok; ++j) ok = pair_ok(spec, rel, k, i, j);
        if (ok) choose(i + 1);
        if (stop) return;
      }
    };
    choose(1);
    if (result.verdict == OracleVerdict::Sat) return result;
    if (stop) {
      result.verdict = OracleVerdict::Indecisive;
      return result;
    }
  }
  result.verdict = OracleVerdict::UnsatWithinBound;
  return result;
}

std::optional<std::map<int, int>> find_cluster(const FModel& model, const AgentAnalysis& analysis, int p, int u) {
  if (p < 0 || p >= static_cast<int>(analysis.P.size()) || !analysis.p_is_vclass[p])
    throw ModelError("cluster requested for a class that is not a V-class");
  const FiniteFrame& fr = model.frame;
  if (u < 0 || u >= fr.worlds()) throw ModelError("unknown world " + std::to_string(u));
  std::vector<int> members = agents_in(analysis.P[p]);
  std::vector<int> choice(members.size());
  auto valid = [&]() {
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = 0; y < members.size(); ++y) {
        int j = members[y];
        for (int v : fr.successors(j, choice[x]).members())
          for (int b = 0; b < fr.worlds(); ++b)
            if (fr.has_edge(j, b, v) && !fr.has_edge(j, b, choice[y])) return false;
      }
    return true;
  };
  std::function<bool(std::size_t)> go = [&](std::size_t k) {
    if (k == members.size()) return valid();
    for (int a : fr.successors(members[k], u).members()) {
      choice[k] = a;
      if (go(k + 1)) return true;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  std::map<int, int> out;
  for (std::size_t k = 0; k < members.size(); ++k) out[members[k]] = choice[k];
  return out;
}

}  // namespace jl
