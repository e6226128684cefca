#include "jl/logic.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "jl/syntax.hpp"
#include "jl/unify.hpp"

namespace jl {

namespace {

using SK = AxiomSchemeId::Kind;

int parse_int(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw LogicError("line " + std::to_string(line) + ": expected an integer, got '" + tok + "'");
  }
}

// "Name(a)" or "Name(a,b)"
bool parse_param_id(std::string_view tok, std::string_view name, int arity, int& a, int& b) {
  if (tok.substr(0, name.size()) != name || tok.size() < name.size() + 3) return false;
  if (tok[name.size()] != '(' || tok.back() != ')') return false;
  std::string inner(tok.substr(name.size() + 1, tok.size() - name.size() - 2));
  std::size_t comma = inner.find(',');
  try {
    if (arity == 1) {
      if (comma != std::string::npos) return false;
      a = std::stoi(inner);
    } else {
      if (comma == std::string::npos) return false;
      a = std::stoi(inner.substr(0, comma));
      b = std::stoi(inner.substr(comma + 1));
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

AxiomSchemeId AxiomSchemeId::parse(std::string_view tok) {
  AxiomSchemeId id;
  if (tok == "P1") id.kind = SK::P1;
  else if (tok == "P2") id.kind = SK::P2;
  else if (tok == "P3") id.kind = SK::P3;
  else if (tok == "App") id.kind = SK::Application;
  else if (tok == "SumL") id.kind = SK::SumLeft;
  else if (tok == "SumR") id.kind = SK::SumRight;
  else if (parse_param_id(tok, "Fact", 1, id.i, id.j)) id.kind = SK::Factivity;
  else if (parse_param_id(tok, "Cons", 1, id.i, id.j)) id.kind = SK::Consistency;
  else if (parse_param_id(tok, "Ver", 2, id.i, id.j)) id.kind = SK::Verification;
  else if (parse_param_id(tok, "Conv", 2, id.i, id.j)) id.kind = SK::Conversion;
  else throw LogicError("unknown axiom scheme '" + std::string(tok) + "'");
  return id;
}

std::string AxiomSchemeId::to_string() const {
  switch (kind) {
    case SK::P1: return "P1";
    case SK::P2: return "P2";
    case SK::P3: return "P3";
    case SK::Application: return "App";
    case SK::SumLeft: return "SumL";
    case SK::SumRight: return "SumR";
    case SK::Factivity: return "Fact(" + std::to_string(i) + ")";
    case SK::Consistency: return "Cons(" + std::to_string(i) + ")";
    case SK::Verification: return "Ver(" + std::to_string(i) + "," + std::to_string(j) + ")";
    case SK::Conversion: return "Conv(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  return "?";
}

ConstantSpecification::ConstantSpecification(std::vector<CsEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
  for (std::size_t k = 0; k < entries_.size(); ++k) by_constant_.emplace(entries_[k].constant, k);
}

std::vector<CsEntry> ConstantSpecification::entries_for(int constant) const {
  std::vector<CsEntry> out;
  auto [lo, hi] = by_constant_.equal_range(constant);
  for (auto it = lo; it != hi; ++it) out.push_back(entries_[it->second]);
  return out;
}

bool ConstantSpecification::schematically_injective() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : entries_)
    if (!seen.emplace(e.constant, e.agent).second) return false;
  return true;
}

std::vector<AxiomSchemeId> LogicSpec::axiom_ids() const {
  std::vector<AxiomSchemeId> ids = {{SK::P1}, {SK::P2}, {SK::P3}, {SK::Application}, {SK::SumLeft}, {SK::SumRight}};
  for (int i : F) ids.push_back({SK::Factivity, i, 0});
  for (int i : D) ids.push_back({SK::Consistency, i, 0});
  for (auto [i, j] : V) ids.push_back({SK::Verification, i, j});
  for (auto [i, j] : C) ids.push_back({SK::Conversion, i, j});
  return ids;
}

bool LogicSpec::valid_id(const AxiomSchemeId& id) const {
  switch (id.kind) {
    case SK::Factivity: return F.count(id.i) > 0;
    case SK::Consistency: return D.count(id.i) > 0;
    case SK::Verification: return V.count({id.i, id.j}) > 0;
    case SK::Conversion: return C.count({id.i, id.j}) > 0;
    default: return true;
  }
}

std::set<int> LogicSpec::appropriate_for() const {
  std::set<int> out;
  auto ids = axiom_ids();
  for (int a = 1; a <= n; ++a) {
    bool all = true;
    for (const auto& id : ids) {
      bool found = false;
      for (const auto& e : cs.entries())
        if (e.agent == a && e.scheme == id) {
          found = true;
          break;
        }
      if (!found) {
        all = false;
        break;
      }
    }
    if (all) out.insert(a);
  }
  return out;
}

int LogicSpec::total_constant(int agent, const AxiomSchemeId& id) const {
  auto ids = axiom_ids();
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (ids[k] == id) return static_cast<int>((agent - 1) * ids.size() + k + 1);
  throw LogicError("scheme " + id.to_string() + " is not an axiom of this logic");
}

void LogicSpec::make_total() {
  std::vector<CsEntry> entries;
  auto ids = axiom_ids();
  for (int a = 1; a <= n; ++a)
    for (const auto& id : ids) entries.push_back({total_constant(a, id), a, id});
  cs = ConstantSpecification(std::move(entries));
  cs.mark_total();
}

void LogicSpec::validate() const {
  if (n < 1) throw LogicError("number of agents must be positive");
  if (n > 64) throw LogicError("at most 64 agents are supported");
  auto check = [&](int a, const char* what) {
    if (a < 1 || a > n) throw LogicError(std::string("agent ") + std::to_string(a) + " out of range in " + what);
  };
  for (int a : D) check(a, "D");
  for (int a : F) check(a, "F");
  for (auto [i, j] : V) check(i, "V"), check(j, "V");
  for (auto [i, j] : C) check(i, "C"), check(j, "C");
  for (const auto& e : cs.entries()) {
    check(e.agent, "CS");
    if (e.constant < 1) throw LogicError("CS constant index must be positive");
    if (!valid_id(e.scheme)) throw LogicError("CS entry uses " + e.scheme.to_string() + ", not an axiom of this logic");
  }
}

std::vector<std::string> LogicSpec::warnings() const {
  std::vector<std::string> out;
  auto app = appropriate_for();
  for (int d : D)
    if (!app.count(d)) {
      out.push_back("constant specification is not axiomatically appropriate for agent " + std::to_string(d) +
                    " in D; completeness with respect to F-models is not guaranteed");
      break;
    }
  return out;
}

std::string LogicSpec::to_text() const {
  std::ostringstream os;
  os << "agents " << n << "\nD";
  for (int a : D) os << ' ' << a;
  os << "\nF";
  for (int a : F) os << ' ' << a;
  os << '\n';
  for (auto [i, j] : V) os << "V " << i << ' ' << j << '\n';
  for (auto [i, j] : C) os << "C " << i << ' ' << j << '\n';
  if (cs.total()) {
    os << "CS TOTAL\n";
  } else {
    for (const auto& e : cs.entries()) os << "CS c" << e.constant << ' ' << e.agent << ' ' << e.scheme.to_string() << '\n';
  }
  return os.str();
}

LogicSpec load_logic(std::string_view text) {
  LogicSpec spec;
  bool have_agents = false;
  bool total = false;
  std::vector<CsEntry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    auto where = [&] { return "line " + std::to_string(line) + ": "; };
    if (key == "agents") {
      if (tok.size() != 2) throw LogicError(where() + "expected 'agents N'");
      spec.n = parse_int(tok[1], line);
      have_agents = true;
    } else if (key == "D" || key == "F") {
      auto& set = key == "D" ? spec.D : spec.F;
      for (std::size_t k = 1; k < tok.size(); ++k) set.insert(parse_int(tok[k], line));
    } else if (key == "V" || key == "C") {
      auto& rel = key == "V" ? spec.V : spec.C;
      if (tok.size() == 1) continue;
      if (tok.size() != 3) throw LogicError(where() + "expected one agent pair per line");
      rel.emplace(parse_int(tok[1], line), parse_int(tok[2], line));
    } else if (key == "CS") {
      if (tok.size() == 2 && tok[1] == "TOTAL") {
        total = true;
      } else if (tok.size() == 2 && tok[1] == "EMPTY") {
        // explicit empty specification
      } else if (tok.size() == 4 && tok[1].size() > 1 && tok[1][0] == 'c') {
        CsEntry e;
        e.constant = parse_int(tok[1].substr(1), line);
        e.agent = parse_int(tok[2], line);
        try {
          e.scheme = AxiomSchemeId::parse(tok[3]);
        } catch (const LogicError& err) {
          throw LogicError(where() + err.what());
        }
        entries.push_back(e);
      } else {
        throw LogicError(where() + "malformed CS entry");
      }
    } else {
      throw LogicError(where() + "unknown directive '" + key + "'");
    }
  }
  if (!have_agents) throw LogicError("missing 'agents N' line");
  if (total && !entries.empty()) throw LogicError("CS TOTAL cannot be combined with explicit CS entries");
  spec.cs = ConstantSpecification(std::move(entries));
  spec.validate();
  if (total) spec.make_total();
  return spec;
}

LogicSpec load_logic_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LogicError("cannot read logic file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_logic(buf.str());
}

Formula scheme_of(const AxiomSchemeId& id) {
  const Formula A = Formula::meta(1), B = Formula::meta(2), Cm = Formula::meta(3);
  const Term S = Term::meta(1), T = Term::meta(2);
  const Formula bot = Formula::falsum();
  auto imp = Formula::implies;
  const AgentRef any = -1;
  switch (id.kind) {
    case SK::P1: return imp(A, imp(B, A));
    case SK::P2: return imp(imp(A, imp(B, Cm)), imp(imp(A, B), imp(A, Cm)));
    case SK::P3: return imp(imp(imp(A, bot), bot), A);
    case SK::Application:
      return imp(Formula::just(S, any, imp(A, B)),
                 imp(Formula::just(T, any, A), Formula::just(Term::app(S, T), any, B)));
    case SK::SumLeft: return imp(Formula::just(S, any, A), Formula::just(Term::sum(S, T), any, A));
    case SK::SumRight: return imp(Formula::just(S, any, A), Formula::just(Term::sum(T, S), any, A));
    case SK::Factivity: return imp(Formula::just(T, id.i, A), A);
    case SK::Consistency: return imp(Formula::just(T, id.i, bot), bot);
    case SK::Verification:
      return imp(Formula::just(T, id.i, A), Formula::just(Term::bang(T), id.j, Formula::just(T, id.i, A)));
    case SK::Conversion: return imp(Formula::just(T, id.i, A), Formula::just(T, id.j, A));
  }
  throw LogicError("unknown scheme id");
}

bool in_cl(const LogicSpec& spec, int agent, Term term, Formula body) {
  if (agent < 1 || agent > spec.n) return false;
  if (term.kind() == Kind::Const) {
    for (const auto& e : spec.cs.entries_for(term.index()))
      if (e.agent == agent && is_instance(body, scheme_of(e.scheme))) return true;
    return false;
  }
  if (term.kind() == Kind::Bang && body.is_just() && body.term() == term.inner() && !is_agent_meta(body.agent()))
    return in_cl(spec, body.agent(), term.inner(), body.body());
  return false;
}

}  // namespace jl
