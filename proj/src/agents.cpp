#include "jl/agents.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <deque>
#include <set>
#include <sstream>

namespace jl {

std::vector<int> agents_in(AgentSet s) {
  std::vector<int> out;
  while (s) {
    int b = std::countr_zero(s);
    out.push_back(b + 1);
    s &= s - 1;
  }
  return out;
}

namespace {

// Reflexive-transitive closure of rel (indexed by agent, 1..n), restricted to
// the agents in `domain`.
std::vector<AgentSet> star_closure(std::vector<AgentSet> rel, int n, AgentSet domain) {
  for (int i = 1; i <= n; ++i)
    if (has_agent(domain, i)) rel[i] |= agent_bit(i);
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      if (has_agent(rel[i], k)) rel[i] |= rel[k];
  return rel;
}

std::string set_text(AgentSet s) {
  std::string out = "{";
  bool first = true;
  for (int i : agents_in(s)) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

// Partition of `domain` into classes of the equivalence given by mutual
// reachability under `up`, ordered by least member.
std::vector<AgentSet> mutual_classes(const std::vector<AgentSet>& up, int n, AgentSet domain) {
  std::vector<AgentSet> out;
  AgentSet seen = 0;
  for (int i = 1; i <= n; ++i) {
    if (!has_agent(domain, i) || has_agent(seen, i)) continue;
    AgentSet cls = 0;
    for (int j = 1; j <= n; ++j)
      if (has_agent(domain, j) && has_agent(up[i], j) && has_agent(up[j], i)) cls |= agent_bit(j);
    seen |= cls;
    out.push_back(cls);
  }
  return out;
}

bool exists_pair(AgentSet a, AgentSet b, const std::vector<AgentSet>& up) {
  for (int x : agents_in(a))
    if (up[x] & b) return true;
  return false;
}

}  // namespace

int AgentAnalysis::representative(int pc) const { return std::countr_zero(PC.at(pc)) + 1; }

std::vector<int> AgentAnalysis::pc_classes_of(int p) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < PC.size(); ++k)
    if ((PC[k] & ~P.at(p)) == 0) out.push_back(static_cast<int>(k));
  return out;
}

AgentAnalysis analyze(const LogicSpec& spec) {
  AgentAnalysis a;
  const int n = spec.n;
  a.n = n;
  a.V = spec.V;
  AgentSet all = n == 64 ? ~AgentSet{0} : (agent_bit(n + 1) - 1);

  std::vector<AgentSet> c_rel(n + 1, 0);
  for (auto [i, j] : spec.C) c_rel[i] |= agent_bit(j);
  auto c_up = star_closure(c_rel, n, all);
  AgentSet DF = 0, Fs = 0;
  for (int j : spec.D) DF |= agent_bit(j);
  for (int j : spec.F) DF |= agent_bit(j), Fs |= agent_bit(j);
  for (int i = 1; i <= n; ++i) {
    if (c_up[i] & DF) a.S |= agent_bit(i);
    if (c_up[i] & Fs) a.R |= agent_bit(i);
  }

  a.C_F = spec.C;
  for (auto [i, j] : spec.V)
    if (has_agent(a.R, i) && has_agent(a.S, j)) a.C_F.insert({i, j});
  std::vector<AgentSet> cf_rel(n + 1, 0);
  for (auto [i, j] : a.C_F) cf_rel[i] |= agent_bit(j);
  a.cf_up = star_closure(cf_rel, n, all);
  a.cf_down.assign(n + 1, 0);
  for (int i = 1; i <= n; ++i)
    for (int j : agents_in(a.cf_up[i])) a.cf_down[j] |= agent_bit(i);

  std::vector<AgentSet> q_rel(n + 1, 0);
  for (const auto* rel : {&spec.V, &spec.C})
    for (auto [i, j] : *rel)
      if (has_agent(a.S, i) && has_agent(a.S, j)) q_rel[i] |= agent_bit(j);
  a.q_up = star_closure(q_rel, n, a.S);

  a.PC = mutual_classes(a.cf_up, n, a.S);
  a.P = mutual_classes(a.q_up, n, a.S);
  a.chi.assign(n + 1, -1);
  a.pclass.assign(n + 1, -1);
  for (std::size_t k = 0; k < a.PC.size(); ++k)
    for (int i : agents_in(a.PC[k])) a.chi[i] = static_cast<int>(k);
  for (std::size_t k = 0; k < a.P.size(); ++k) {
    for (int i : agents_in(a.P[k])) a.pclass[i] = static_cast<int>(k);
    bool v = false;
    for (auto [x, y] : spec.V)
      if (has_agent(a.P[k], x) && has_agent(a.P[k], y)) v = true;
    a.p_is_vclass.push_back(v);
  }

  // x Q V Q y, with the middle agents in S.
  std::vector<AgentSet> qvq(n + 1, 0);
  for (int x : agents_in(a.S))
    for (int x1 : agents_in(a.q_up[x]))
      for (auto [v1, x2] : spec.V)
        if (v1 == x1 && has_agent(a.S, x2)) qvq[x] |= a.q_up[x2];

  const std::size_t k = a.PC.size();
  a.leqC.assign(k, std::vector<bool>(k, false));
  a.leqVC = a.leqC;
  a.leqV = a.leqC;
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) {
      a.leqC[p][q] = exists_pair(a.PC[p], a.PC[q], a.cf_up);
      a.leqVC[p][q] = exists_pair(a.PC[p], a.PC[q], a.q_up);
      a.leqV[p][q] = exists_pair(a.PC[p], a.PC[q], qvq);
    }

  a.MC.assign(k, {});
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t l = 0; l < k; ++l) {
      if (!a.leqC[p][l]) continue;
      bool maximal = true;
      for (std::size_t l2 = 0; l2 < k; ++l2)
        if (a.lessC(static_cast<int>(l), static_cast<int>(l2))) maximal = false;
      if (maximal) a.MC[p].push_back(static_cast<int>(l));
    }

  a.N.assign(n + 1, 0);
  AgentSet SR = a.S & ~a.R;
  for (int i1 : agents_in(SR)) {
    AgentSet targets = 0;
    for (int i2 : agents_in(SR & a.P[a.pclass[i1]]))
      for (auto [v1, x] : spec.V)
        if (v1 == i2) targets |= a.cf_up[x];
    AgentSet members = 0;
    for (int l : a.MC[a.chi[i1]]) members |= a.PC[l];
    for (int j : agents_in(targets)) a.N[j] |= members;
  }
  return a;
}

std::string AgentAnalysis::to_text() const {
  std::ostringstream os;
  os << "S = " << set_text(S) << "\nR = " << set_text(R) << "\nC_F = {";
  bool first = true;
  for (auto [i, j] : C_F) {
    os << (first ? "" : ",") << "(" << i << "," << j << ")";
    first = false;
  }
  os << "}\nP_C =";
  for (AgentSet c : PC) os << " " << set_text(c);
  os << "\nP =";
  for (std::size_t k = 0; k < P.size(); ++k) os << " " << set_text(P[k]) << (p_is_vclass[k] ? ":V" : ":C");
  os << "\n";
  for (std::size_t k = 0; k < PC.size(); ++k) {
    os << "M_C(" << set_text(PC[k]) << ") =";
    for (int l : MC[k]) os << " " << set_text(PC[l]);
    os << "\n";
  }
  for (int j = 1; j <= n; ++j)
    if (N[j]) os << "N(" << j << ") = " << set_text(N[j]) << "\n";
  return os.str();
}

AgentString parse_agent_string(const std::string& text) {
  AgentString w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    AgentSymbol s;
    std::string_view digits = tok;
    if (!digits.empty() && digits.front() == '^') {
      s.overlined = true;
      digits.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), s.agent);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size())
      throw AnalysisError("bad agent symbol '" + tok + "'");
    w.push_back(s);
  }
  return w;
}

std::string print_agent_string(const AgentString& w) {
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    if (s.overlined) out += '^';
    out += std::to_string(s.agent);
  }
  return out;
}

namespace {

// Reads agent strings right to left. A state is the stack of nodes of the
// collapse forest whose left extent is still open, bottom first; each node is
// kept as the set of forms it may still take.
using Stack = std::vector<AgentSet>;

class Collapser {
 public:
  Collapser(const AgentAnalysis& a, int target) : a_(a), target_(target), v_from_(a.n + 1, 0) {
    for (auto [b, x] : a.V) v_from_[b] |= agent_bit(x);
  }

  std::vector<Stack> step(const Stack& st, int y) const {
    std::vector<Stack> out;
    const AgentSet down_y = a_.cf_down[y];
    if (st.empty()) {
      if (has_agent(down_y, target_)) out.push_back({down_y & a_.cf_up[target_]});
      return out;
    }
    for (std::size_t p = 0; p < st.size(); ++p)
      for (int b : agents_in(st[p]))
        for (int x : agents_in(v_from_[b] & down_y)) {
          Stack ns(st.begin(), st.begin() + static_cast<std::ptrdiff_t>(p));
          ns.push_back(st[p] & a_.cf_down[b]);
          ns.push_back(down_y & a_.cf_up[x]);
          out.push_back(compress(std::move(ns)));
        }
    return out;
  }

 private:
  static Stack compress(Stack st) {
    Stack out;
    for (std::size_t k = 0; k < st.size(); ++k) {
      bool dominated = false;
      for (std::size_t m = k + 1; m < st.size() && !dominated; ++m) dominated = (st[k] & ~st[m]) == 0;
      if (!dominated) out.push_back(st[k]);
    }
    return out;
  }

  const AgentAnalysis& a_;
  int target_;
  std::vector<AgentSet> v_from_;
};

using StateSet = std::set<Stack>;

// States reachable by reading a string of `set` (right to left) that itself
// collapses to `x`, for the V-class expansion of an overlined x.
StateSet read_expansion(const AgentAnalysis& a, const Collapser& main, const StateSet& from, int x) {
  Collapser inner(a, x);
  std::set<std::pair<Stack, Stack>> seen;
  std::deque<std::pair<Stack, Stack>> queue;
  for (const auto& s : from)
    if (seen.insert({s, {}}).second) queue.push_back({s, {}});
  StateSet out;
  while (!queue.empty()) {
    auto [m, c] = queue.front();
    queue.pop_front();
    for (int y : agents_in(a.S)) {
      auto ms = main.step(m, y);
      if (ms.empty()) continue;
      for (auto& c2 : inner.step(c, y))
        for (auto& m2 : ms) {
          out.insert(m2);
          if (seen.insert({m2, c2}).second) queue.push_back({m2, c2});
        }
    }
  }
  return out;
}

StateSet read_symbol(const AgentAnalysis& a, const Collapser& main, const StateSet& from, const AgentSymbol& s) {
  if (!a.in_S(s.agent)) throw AnalysisError("agent " + std::to_string(s.agent) + " is not in S");
  if (s.overlined && a.p_is_vclass[a.pclass[s.agent]]) return read_expansion(a, main, from, s.agent);
  StateSet out;
  for (const auto& st : from)
    for (auto& ns : main.step(st, s.agent)) out.insert(std::move(ns));
  return out;
}

bool accepts(const AgentAnalysis& a, const AgentString& w, int target, StateSet states) {
  if (!a.in_S(target)) throw AnalysisError("agent " + std::to_string(target) + " is not in S");
  Collapser main(a, target);
  for (auto it = w.rbegin(); it != w.rend() && !states.empty(); ++it) states = read_symbol(a, main, states, *it);
  return std::any_of(states.begin(), states.end(), [](const Stack& s) { return !s.empty(); });
}

StateSet suffix_closure(const AgentAnalysis& a, int target) {
  Collapser main(a, target);
  StateSet seen{Stack{}};
  std::deque<Stack> queue{Stack{}};
  while (!queue.empty()) {
    Stack st = queue.front();
    queue.pop_front();
    for (int y : agents_in(a.S))
      for (auto& ns : main.step(st, y))
        if (seen.insert(ns).second) queue.push_back(ns);
  }
  return seen;
}

}  // namespace

bool collapses_to(const AgentAnalysis& a, const AgentString& w, int target) {
  return accepts(a, w, target, StateSet{Stack{}});
}

bool collapses_with_suffix(const AgentAnalysis& a, const AgentString& w, int target) {
  if (!a.in_S(target)) throw AnalysisError("agent " + std::to_string(target) + " is not in S");
  return accepts(a, w, target, suffix_closure(a, target));
}

std::optional<ClassPrefix> visible(const AgentAnalysis& a, int p, const ClassPrefix& sigma) {
  if (p < 0 || p >= static_cast<int>(a.P.size())) throw AnalysisError("no such P class");
  for (int c : sigma)
    if (c < 0 || c >= static_cast<int>(a.PC.size())) throw AnalysisError("malformed world prefix");
  for (std::size_t k = sigma.size(); k-- > 0;) {
    if (a.PC[sigma[k]] & ~a.P[p]) continue;
    AgentString rest;
    for (std::size_t m = k + 1; m < sigma.size(); ++m) rest.push_back({a.representative(sigma[m]), true});
    for (int i : agents_in(a.PC[sigma[k]]))
      if (collapses_with_suffix(a, rest, i))
        return ClassPrefix(sigma.begin(), sigma.begin() + static_cast<std::ptrdiff_t>(k) + 1);
  }
  return std::nullopt;
}

ClassificationReport classify(const AgentAnalysis& a, const LogicSpec& spec) {
  ClassificationReport r;
  AgentSet SR = a.S & ~a.R;
  for (std::size_t k = 0; k < a.P.size() && !r.sigma2p_condition; ++k) {
    if (!a.p_is_vclass[k]) continue;
    bool all = true;
    for (int i : agents_in(SR))
      if (!(a.cf_up[i] & a.P[k])) all = false;
    r.sigma2p_condition = all;
  }

  if (spec.n == 2) {
    bool pspace = false;
    for (auto [i, j] : {AgentPair{1, 2}, AgentPair{2, 1}}) {
      bool v_ok = !spec.V.empty() && std::all_of(spec.V.begin(), spec.V.end(), [&](const AgentPair& e) {
        return e == AgentPair{i, j} || e == AgentPair{j, j};
      });
      if (spec.D.count(i) && !spec.F.count(i) && v_ok && spec.C.count({i, j}) && !spec.C.count({j, i}))
        pspace = true;
    }
    r.two_agent_class = pspace ? "PSPACE-complete" : "Sigma2p";
  } else {
    r.two_agent_class = "n/a";
  }

  bool any_vclass = std::find(a.p_is_vclass.begin(), a.p_is_vclass.end(), true) != a.p_is_vclass.end();
  if (!r.sigma2p_condition && !any_vclass)
    for (int i : agents_in(SR))
      if (a.MC[a.chi[i]].size() >= 2) r.j1_pattern = true;

  if (!r.sigma2p_condition) {
    bool wide = false;
    for (int j = 1; j <= a.n; ++j)
      if (std::popcount(a.N[j]) >= 2) wide = true;
    // A cycle in the graph j -> N(j): some j reaches itself.
    std::vector<AgentSet> reach = a.N;
    for (int k = 1; k <= a.n; ++k)
      for (int i = 1; i <= a.n; ++i)
        if (has_agent(reach[i], k)) reach[i] |= reach[k];
    bool cycle = false;
    for (int j = 1; j <= a.n; ++j)
      if (has_agent(reach[j], j)) cycle = true;
    r.j2_pattern = wide && cycle;
  }

  r.nexp_note = "satisfiability is in NEXP for every logic of this family";
  return r;
}

std::string ClassificationReport::to_text() const {
  std::ostringstream os;
  os << "Sigma2p condition: " << (sigma2p_condition ? "holds" : "fails") << "\n";
  os << "two-agent classification: " << two_agent_class << "\n";
  os << "J1-style branching pattern (PSPACE-hard): " << (j1_pattern ? "present" : "absent") << "\n";
  os << "J2-style pattern (EXP-hard): " << (j2_pattern ? "present" : "absent") << "\n";
  os << "note: " << nexp_note << "\n";
  return os.str();
}

std::string ClassificationReport::to_keyvalue() const {
  std::ostringstream os;
  os << "sigma2p_condition=" << (sigma2p_condition ? "true" : "false") << "\n";
  os << "two_agent_class=" << two_agent_class << "\n";
  os << "j1_pattern=" << (j1_pattern ? "true" : "false") << "\n";
  os << "j2_pattern=" << (j2_pattern ? "true" : "false") << "\n";
  os << "nexp_note=" << nexp_note << "\n";
  return os.str();
}

}  // namespace jl
