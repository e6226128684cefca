#include "jl/tableau.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <tuple>
#include <sstream>

#include "jl/syntax.hpp"

namespace jl {

std::size_t TableauEntryHash::operator()(const TableauEntry& e) const noexcept {
  std::size_t h = e.payload.expr()->hash * 1000003u + static_cast<std::size_t>(e.prefix) * 7919u;
  h ^= (e.truth ? 0x9e3779b97f4a7c15ULL : 0) + (e.star ? 0x517cc1b727220a95ULL : 0);
  for (int b : e.boxes) h = h * 31 + static_cast<std::size_t>(b);
  return h;
}

bool Branch::add(TableauEntry e) {
  if (present.count(e)) return false;
  present.insert(e);
  entries.push_back(std::move(e));
  return true;
}

int Branch::prefix_id(const ClassPrefix& p) {
  auto it = prefix_ids.find(p);
  if (it != prefix_ids.end()) return it->second;
  int id = static_cast<int>(prefixes.size());
  prefixes.push_back(p);
  prefix_ids.emplace(p, id);
  return id;
}

std::optional<int> Branch::find_prefix(const ClassPrefix& p) const {
  auto it = prefix_ids.find(p);
  if (it == prefix_ids.end()) return std::nullopt;
  return it->second;
}

bool Branch::propositionally_closed() const {
  for (const auto& e : entries) {
    if (!e.truth) continue;
    TableauEntry opposite = e;
    opposite.truth = false;
    if (present.count(opposite)) return true;
  }
  return false;
}

std::string Branch::prefix_text(int id, const AgentAnalysis& a) const {
  std::string out = "0";
  for (int pc : prefixes[id]) {
    out += ".{";
    bool first = true;
    for (int i : agents_in(a.PC[pc])) {
      out += (first ? "" : ",") + std::to_string(i);
      first = false;
    }
    out += "}";
  }
  return out;
}

std::string Branch::entry_text(const TableauEntry& e, const AgentAnalysis& a) const {
  std::string out = prefix_text(e.prefix, a) + (e.truth ? " T " : " F ");
  for (int i : e.boxes) out += "box_" + std::to_string(i) + " ";
  if (e.star)
    out += print_star({e.payload.agent(), e.payload.term(), e.payload.body()});
  else
    out += print_formula(e.payload);
  return out;
}

std::string Branch::to_text(const AgentAnalysis& a) const {
  std::string out;
  for (const auto& e : entries) out += entry_text(e, a) + "\n";
  return out;
}

Branch initial_branch(Formula phi, TableauMode mode) {
  Branch b;
  b.mode = mode;
  b.prefix_id({});
  b.add({0, true, {}, phi, false});
  b.add({0, false, {}, Formula::falsum(), false});
  return b;
}

ResolvedLimits resolve_limits(const TableauLimits& limits, const AgentAnalysis& a, const LogicSpec& spec,
                              Formula phi) {
  ResolvedLimits out;
  ClassificationReport rep = classify(a, spec);
  int size = static_cast<int>(phi.size());
  if (limits.max_prefix_length >= 0) {
    out.max_prefix_length = limits.max_prefix_length;
  } else if (rep.sigma2p_condition || rep.j1_pattern) {
    out.max_prefix_length = size;
  } else {
    out.max_prefix_length = 1 << std::min(size, std::max(0, std::min(limits.prefix_exponent_cap, 20)));
  }
  if (limits.max_boxes >= 0)
    out.max_boxes = limits.max_boxes;
  else
    out.max_boxes = rep.j2_pattern ? 2 : std::max(2, 2 * modal_depth(phi));
  return out;
}

std::vector<int> blockers(const Branch& b) {
  const int W = static_cast<int>(b.prefixes.size());
  using Key = std::tuple<bool, bool, std::vector<int>, std::uint64_t>;
  std::vector<std::vector<Key>> content(W);
  for (const auto& e : b.entries) content[e.prefix].emplace_back(e.truth, e.star, e.boxes, e.payload.expr()->id);
  for (auto& c : content) std::sort(c.begin(), c.end());
  std::vector<int> out(W, -1);
  for (int w = 1; w < W; ++w) {
    ClassPrefix p = b.prefixes[w];
    while (!p.empty()) {
      p.pop_back();
      int u = *b.find_prefix(p);
      if (content[u] == content[w]) {
        out[w] = u;
        break;
      }
    }
  }
  return out;
}

namespace {

// A conclusion names its prefix as a class string, which may not exist yet.
struct Conclusion {
  ClassPrefix prefix;
  bool truth;
  std::vector<int> boxes;
  Formula payload;
  bool star = false;
};

struct Instance {
  std::string rule;
  int premise = -1;
  std::vector<Conclusion> conclusions;  // all added together
  std::vector<Conclusion> alternative;  // second branch of the split
  bool split = false;
};

class Scanner {
 public:
  Scanner(const Branch& b, const ExpandContext& ctx) : b_(b), ctx_(ctx), a_(ctx.analysis) {
    if (ctx.blocking) blocked_by_ = blockers(b);
  }

  bool is_blocked(int prefix) const { return !blocked_by_.empty() && blocked_by_[prefix] >= 0; }

  bool blocked() const { return blocked_; }

  // The next applicable instance, oldest premise first within a rule class:
  // F->, then Fa/Tr/TrB, C/V/FB, SB/SVB, the T-> split, and the prefix
  // creators TrD/S last.
  std::optional<Instance> next() {
    for (int cls = 0; cls < 6; ++cls)
      for (std::size_t k = 0; k < b_.entries.size(); ++k)
        if (auto inst = at(cls, static_cast<int>(k))) return inst;
    return std::nullopt;
  }

 private:
  bool present(const Conclusion& c) const {
    auto id = b_.find_prefix(c.prefix);
    return id && b_.has({*id, c.truth, c.boxes, c.payload, c.star});
  }

  bool too_long(const Conclusion& c) const {
    return static_cast<int>(c.prefix.size()) > ctx_.limits.max_prefix_length;
  }

  // Keeps the conclusions that are new and within limits. Returns whether any remain.
  bool useful(Instance& inst) {
    std::vector<Conclusion> keep;
    for (auto& c : inst.conclusions) {
      if (too_long(c)) {
        blocked_ = true;
        continue;
      }
      if (!present(c)) keep.push_back(std::move(c));
    }
    inst.conclusions = std::move(keep);
    return !inst.conclusions.empty();
  }

  std::optional<Instance> at(int cls, int k) {
    const TableauEntry& e = b_.entries[k];
    const ClassPrefix& sigma = b_.prefixes[e.prefix];
    Formula f = e.payload;
    if (e.star) return std::nullopt;
    auto single = [&](std::string rule, std::vector<Conclusion> cs) -> std::optional<Instance> {
      Instance inst{std::move(rule), k, std::move(cs), {}, false};
      if (useful(inst)) return inst;
      return std::nullopt;
    };

    if (!e.boxes.empty()) {
      int i = e.boxes.front();
      std::vector<int> rest(e.boxes.begin() + 1, e.boxes.end());
      if (cls == 2) {
        if (ctx_.spec.F.count(i))
          if (auto r = single("FB", {{sigma, true, rest, f}})) return r;
        for (auto [x, j] : ctx_.spec.C)
          if (x == i) {
            std::vector<int> boxes = e.boxes;
            boxes.front() = j;
            if (auto r = single("C", {{sigma, true, boxes, f}})) return r;
          }
        for (auto [x, j] : ctx_.spec.V)
          if (x == i) {
            std::vector<int> boxes = e.boxes;
            boxes.insert(boxes.begin(), j);
            if (static_cast<int>(boxes.size()) > ctx_.limits.max_boxes) {
              blocked_ = true;
              continue;
            }
            if (auto r = single("V", {{sigma, true, boxes, f}})) return r;
          }
      }
      if (cls == 3 && a_.in_S(i)) {
        ClassPrefix child = sigma;
        child.push_back(a_.chi[i]);
        if (b_.find_prefix(child))
          if (auto r = single("SB", {{child, true, rest, f}})) return r;
        int p = a_.pclass[i];
        if (b_.mode == TableauMode::Improved && a_.p_is_vclass[p]) {
          if (auto view = visible(a_, p, sigma)) {
            ClassPrefix target(view->begin(), view->end() - 1);
            target.push_back(a_.chi[i]);
            if (b_.find_prefix(target))
              if (auto r = single("SVB", {{target, true, rest, f}})) return r;
          }
        }
      }
      return std::nullopt;
    }

    if (cls == 0 && !e.truth && f.is_implies())
      return single("F->", {{sigma, true, {}, f.ant()}, {sigma, false, {}, f.cons()}});
    if (cls == 1 && f.is_just()) {
      int i = f.agent();
      if (!e.truth) return single("Fa", {{sigma, false, {}, f, true}});
      if (a_.in_S(i)) return single("TrB", {{sigma, true, {}, f, true}, {sigma, true, {i}, f.body()}});
      return single("Tr", {{sigma, true, {}, f, true}});
    }
    if (cls == 5 && e.truth && f.is_just() && a_.in_S(f.agent()) && !is_blocked(e.prefix)) {
      std::vector<Conclusion> cs;
      for (int L : a_.MC[a_.chi[f.agent()]]) {
        int j = a_.representative(L);
        if (has_agent(a_.R, j)) continue;
        int p = a_.pclass[j];
        if (b_.mode == TableauMode::Improved && a_.p_is_vclass[p] && visible(a_, p, sigma)) continue;
        ClassPrefix child = sigma;
        child.push_back(L);
        cs.push_back({child, false, {}, Formula::falsum()});
      }
      if (auto r = single("TrD", std::move(cs))) return r;
    }
    if (cls == 5 && !e.truth && f.is_falsum() && !sigma.empty() && !is_blocked(e.prefix)) {
      std::vector<Conclusion> cs;
      AgentSet targets = 0;
      for (int j : agents_in(a_.PC[sigma.back()])) targets |= a_.N[j];
      std::set<int> seen;
      for (int i : agents_in(targets)) {
        if (!seen.insert(a_.chi[i]).second) continue;
        int p = a_.pclass[i];
        if (b_.mode == TableauMode::Improved && a_.p_is_vclass[p] && visible(a_, p, sigma)) continue;
        ClassPrefix child = sigma;
        child.push_back(a_.chi[i]);
        cs.push_back({child, false, {}, Formula::falsum()});
      }
      if (auto r = single("S", std::move(cs))) return r;
    }
    if (cls == 4 && e.truth && f.is_implies()) {
      Conclusion left{sigma, false, {}, f.ant()}, right{sigma, true, {}, f.cons()};
      if (!present(left) && !present(right)) return Instance{"T->", k, {left}, {right}, true};
    }
    return std::nullopt;
  }

  const Branch& b_;
  const ExpandContext& ctx_;
  const AgentAnalysis& a_;
  bool blocked_ = false;
  std::vector<int> blocked_by_;
};

void add_conclusions(Branch& b, const std::vector<Conclusion>& cs) {
  for (const auto& c : cs) b.add({b.prefix_id(c.prefix), c.truth, c.boxes, c.payload, c.star});
}

std::string describe(const Branch& b, const Instance& inst, const AgentAnalysis& a) {
  std::string out = inst.rule + ": " + b.entry_text(b.entries[inst.premise], a) + " =>";
  Branch scratch = b;
  auto list = [&](const std::vector<Conclusion>& cs) {
    std::string s;
    for (const auto& c : cs) {
      int id = scratch.prefix_id(c.prefix);
      s += " " + scratch.entry_text({id, c.truth, c.boxes, c.payload, c.star}, a) + ";";
    }
    return s;
  };
  out += list(inst.conclusions);
  if (inst.split) out += " |" + list(inst.alternative);
  return out;
}

std::vector<Branch> apply_instance(const Branch& b, const Instance& inst) {
  std::vector<Branch> out;
  out.push_back(b);
  if (inst.split) out.push_back(b);
  add_conclusions(out[0], inst.conclusions);
  if (inst.split) add_conclusions(out[1], inst.alternative);
  return out;
}

}  // namespace

std::vector<Branch> expand(const Branch& b, const ExpandContext& ctx) {
  Scanner scan(b, ctx);
  auto inst = scan.next();
  if (!inst) return {};
  if (ctx.trace) ctx.trace(describe(b, *inst, ctx.analysis));
  std::vector<Branch> out = apply_instance(b, *inst);
  if (scan.blocked())
    for (auto& x : out) x.capped = true;
  return out;
}

namespace {

FiniteFrame tree_frame(const Branch& b, const AgentAnalysis& a) {
  const int W = static_cast<int>(b.prefixes.size());
  FiniteFrame fr(a.n, W);
  for (int w = 0; w < W; ++w) {
    const ClassPrefix& p = b.prefixes[w];
    if (!p.empty()) {
      ClassPrefix parent(p.begin(), p.end() - 1);
      int from = *b.find_prefix(parent);
      for (int i : agents_in(a.PC[p.back()])) fr.add_edge(i, from, w);
    }
    if (b.mode == TableauMode::Improved)
      for (int i = 1; i <= a.n; ++i) {
        if (!a.in_S(i) || !a.p_is_vclass[a.pclass[i]]) continue;
        auto view = visible(a, a.pclass[i], p);
        if (!view) continue;
        ClassPrefix target(view->begin(), view->end() - 1);
        target.push_back(a.chi[i]);
        if (auto t = b.find_prefix(target)) fr.add_edge(i, w, *t);
      }
  }
  return fr;
}

void close_frame(FiniteFrame& fr, const LogicSpec& spec) {
  const int W = fr.worlds();
  for (int i : spec.F)
    for (int w = 0; w < W; ++w) fr.add_edge(i, w, w);
  for (bool changed = true; changed;) {
    changed = false;
    auto add = [&](int i, int x, int y) {
      if (!fr.has_edge(i, x, y)) {
        fr.add_edge(i, x, y);
        changed = true;
      }
    };
    for (auto [i, j] : spec.C)
      for (int x = 0; x < W; ++x)
        for (int y : fr.successors(j, x).members()) add(i, x, y);
    for (auto [i, j] : spec.V)
      for (int x = 0; x < W; ++x)
        for (int y : fr.successors(j, x).members())
          for (int z : fr.successors(i, y).members()) add(i, x, z);
  }
}

std::vector<PrefixedStar> stars(const Branch& b, bool truth) {
  std::vector<PrefixedStar> out;
  for (const auto& e : b.entries)
    if (e.star && e.truth == truth) out.push_back({e.prefix, {e.payload.agent(), e.payload.term(), e.payload.body()}});
  return out;
}

}  // namespace

FiniteFrame build_frame(const Branch& b, const AgentAnalysis& a, const LogicSpec& spec) {
  FiniteFrame fr = tree_frame(b, a);
  close_frame(fr, spec);
  return fr;
}

std::vector<PrefixedStar> true_stars(const Branch& b) { return stars(b, true); }
std::vector<PrefixedStar> false_stars(const Branch& b) { return stars(b, false); }

bool is_rejecting(const Branch& b, const AgentAnalysis& a, const LogicSpec& spec) {
  if (b.propositionally_closed()) return true;
  std::vector<PrefixedStar> targets = false_stars(b);
  if (targets.empty()) return false;
  return derives_any(spec, build_frame(b, a, spec), true_stars(b), targets).has_value();
}

FModel extract_model(const Branch& b, const AgentAnalysis& a, const LogicSpec& spec, bool merge_blocked) {
  FiniteFrame tree = tree_frame(b, a);
  const int T = tree.worlds();
  std::vector<int> rep(T);
  std::vector<int> by = merge_blocked ? blockers(b) : std::vector<int>(T, -1);
  int W = 0;
  for (int w = 0; w < T; ++w) {
    if (by[w] >= 0) {
      rep[w] = rep[by[w]];
    } else {
      rep[w] = W++;
    }
  }
  FiniteFrame base(a.n, W);
  for (int i = 1; i <= a.n; ++i)
    for (int x = 0; x < T; ++x)
      for (int y : tree.successors(i, x).members()) base.add_edge(i, rep[x], rep[y]);
  close_frame(base, spec);

  FModel m;
  m.spec = spec;
  m.frame = base;
  for (int i = 1; i <= a.n; ++i) {
    if (!a.in_S(i)) continue;
    for (int w = 0; w < W; ++w)
      for (int j : agents_in(a.cf_up[i] & a.S))
        if (base.successors(j, w).empty()) {
          m.frame.add_edge(i, w, w);
          break;
        }
  }
  for (const auto& e : b.entries)
    if (e.truth && !e.star && e.boxes.empty() && e.payload.is_atom())
      m.valuation.try_emplace(e.payload.index(), W).first->second.insert(rep[e.prefix]);
  std::set<PrefixedStar> seeds;
  for (const auto& s : true_stars(b)) seeds.insert({rep[s.world], s.star});
  m.seeds.assign(seeds.begin(), seeds.end());
  m.root = 0;
  return m;
}

TableauResult decide(const LogicSpec& spec, Formula phi, const DecideOptions& options) {
  if (!phi.valid() || phi.expr()->has_meta) throw TableauError("decide needs a formula without metavariables");
  for (int i : agents_of(phi))
    if (i < 1 || i > spec.n) throw TableauError("agent " + std::to_string(i) + " is not an agent of the logic");
  AgentAnalysis a = analyze(spec);
  TableauResult result;
  result.limits = resolve_limits(options.limits, a, spec, phi);
  ExpandContext ctx{spec, a, result.limits, options.trace, options.blocking};
  TableauStats& st = result.stats;
  std::vector<std::string> reasons;

  auto record = [&](const Branch& b) {
    for (const auto& p : b.prefixes) st.max_prefix_length = std::max(st.max_prefix_length, static_cast<int>(p.size()));
    for (const auto& e : b.entries) st.max_boxes = std::max(st.max_boxes, static_cast<int>(e.boxes.size()));
  };

  auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    return options.limits.max_seconds > 0 &&
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > options.limits.max_seconds;
  };

  std::vector<Branch> stack;
  stack.push_back(initial_branch(phi, options.mode));
  while (!stack.empty()) {
    if (st.branches >= options.limits.max_branches) {
      reasons.push_back("branch limit " + std::to_string(options.limits.max_branches));
      break;
    }
    ++st.branches;
    Branch b = std::move(stack.back());
    stack.pop_back();
    bool done = false;
    while (!done) {
      if (out_of_time()) {
        reasons.push_back("time limit " + std::to_string(options.limits.max_seconds) + "s");
        record(b);
        stack.clear();
        break;
      }
      if (b.entries.size() > options.limits.max_entries) {
        reasons.push_back("entry limit " + std::to_string(options.limits.max_entries));
        record(b);
        break;
      }
      Scanner scan(b, ctx);
      auto inst = scan.next();
      if (scan.blocked()) b.capped = true;
      if (inst && !inst->split) {
        if (ctx.trace) ctx.trace(describe(b, *inst, a));
        ++st.rule_applications;
        std::size_t before = b.prefixes.size();
        add_conclusions(b, inst->conclusions);
        st.prefixes_created += b.prefixes.size() - before;
        for (std::size_t k = b.entries.size() - inst->conclusions.size(); k < b.entries.size(); ++k)
          if (b.entries[k].truth) {
            TableauEntry opposite = b.entries[k];
            opposite.truth = false;
            if (b.has(opposite)) done = true;
          } else {
            TableauEntry opposite = b.entries[k];
            opposite.truth = true;
            if (b.has(opposite)) done = true;
          }
        if (done) {
          ++st.rejected;
          record(b);
        }
        continue;
      }
      record(b);
      done = true;
      if (is_rejecting(b, a, spec)) {
        ++st.rejected;
        break;
      }
      if (inst) {
        if (ctx.trace) ctx.trace(describe(b, *inst, a));
        ++st.rule_applications;
        auto kids = apply_instance(b, *inst);
        stack.push_back(std::move(kids[1]));
        stack.push_back(std::move(kids[0]));
        break;
      }
      FModel m = extract_model(b, a, spec, options.blocking);
      bool ok = validate_frame(m.frame, spec).empty() && evaluate(m, 0, phi);
      if (ok) {
        result.verdict = TableauVerdict::Satisfiable;
        result.model = std::move(m);
        result.branch = std::move(b);
        return result;
      }
      if (b.capped)
        reasons.push_back("prefix or box limit reached on an accepting branch");
      else {
        ++st.verification_failures;
        reasons.push_back("extracted model failed verification");
      }
    }
  }
  if (reasons.empty()) {
    result.verdict = TableauVerdict::Unsatisfiable;
  } else {
    result.verdict = TableauVerdict::ResourceExceeded;
    result.limit = reasons.front();
  }
  return result;
}

}  // namespace jl
