// Frame-relative star calculus: derivability of world-prefixed star
// expressions, theoremhood of justification formulas, and a naive saturation
// used to check the search.

#ifndef JL_STAR_HPP_
#define JL_STAR_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "jl/expr.hpp"
#include "jl/logic.hpp"

namespace jl {

class WorldSet {
 public:
  WorldSet() = default;
  explicit WorldSet(int size, bool full = false);

  int size() const { return size_; }
  bool contains(int w) const { return (bits_[static_cast<std::size_t>(w) >> 6] >> (w & 63)) & 1U; }
  void insert(int w) { bits_[static_cast<std::size_t>(w) >> 6] |= std::uint64_t{1} << (w & 63); }
  bool empty() const;
  int count() const;
  bool subset_of(const WorldSet& o) const;
  WorldSet& operator|=(const WorldSet& o);
  WorldSet& operator&=(const WorldSet& o);
  std::vector<int> members() const;

  friend bool operator==(const WorldSet&, const WorldSet&) = default;

 private:
  int size_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Worlds are 0..size-1; relations are indexed by agent 1..n.
class FiniteFrame {
 public:
  FiniteFrame() = default;
  FiniteFrame(int agents, int worlds);

  int agents() const { return agents_; }
  int worlds() const { return worlds_; }
  void add_edge(int agent, int from, int to);
  bool has_edge(int agent, int from, int to) const { return succ_[agent][from].contains(to); }
  const WorldSet& successors(int agent, int from) const { return succ_[agent][from]; }
  // Adds a world with no edges and returns its id.
  int add_world();

 private:
  int agents_ = 0;
  int worlds_ = 0;
  std::vector<std::vector<WorldSet>> succ_;
};

struct PrefixedStar {
  int world = 0;
  StarExpression star;

  friend bool operator==(const PrefixedStar& a, const PrefixedStar& b) {
    return a.world == b.world && a.star == b.star;
  }
  friend bool operator<(const PrefixedStar& a, const PrefixedStar& b) {
    if (a.world != b.world) return a.world < b.world;
    if (a.star.agent != b.star.agent) return a.star.agent < b.star.agent;
    if (a.star.term != b.star.term) return a.star.term < b.star.term;
    return a.star.body < b.star.body;
  }
};

struct StarStats {
  // Size of the nondeterministic certificate for the accepted derivation:
  // rule nodes plus distinct assumptions used. Zero when nothing was derived.
  int choices = 0;
  int term_size = 0;
  int distinct_assumptions = 0;
  std::size_t table_entries = 0;
};

// Process-wide counters over every Deriver query: how many queries ran and how
// many exceeded the certificate bound |t| + |S'|.
struct StarInstrumentation {
  std::uint64_t queries = 0;
  std::uint64_t bound_violations = 0;
  int worst_slack = 0;  // smallest (|t| + |S'|) - choices seen on a successful query
};
StarInstrumentation star_instrumentation();
void reset_star_instrumentation();

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Answers derivability queries against one fixed frame and assumption set.
// Tables are filled lazily per term and reused across queries.
class Deriver {
 public:
  Deriver(const LogicSpec& spec, const FiniteFrame& frame, std::vector<PrefixedStar> assumptions);
  ~Deriver();
  Deriver(const Deriver&) = delete;
  Deriver& operator=(const Deriver&) = delete;

  bool derivable(const PrefixedStar& goal, StarStats* stats = nullptr);
  // Worlds at which agent *_agent(term, body) is derivable.
  WorldSet worlds_for(int agent, Term term, Formula body);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool derivable(const LogicSpec& spec, const FiniteFrame& frame, const std::vector<PrefixedStar>& assumptions,
               const PrefixedStar& goal, StarStats* stats = nullptr);

std::optional<PrefixedStar> derives_any(const LogicSpec& spec, const FiniteFrame& frame,
                                        const std::vector<PrefixedStar>& assumptions,
                                        const std::vector<PrefixedStar>& targets);

// Theoremhood of [term]_agent body.
bool prove_justified(const LogicSpec& spec, int agent, Term term, Formula body, StarStats* stats = nullptr);

// Same verdict for terms without +, by goal-directed unification. Throws
// PreconditionError when the term has a sum or the CS is not schematically
// injective. `branch_points` receives the number of subgoals that had more
// than one distinct solution.
bool prove_plus_free(const LogicSpec& spec, int agent, Term term, Formula body, int* branch_points = nullptr);

// Least set containing the assumptions that is closed under the calculus
// rules, restricted to `universe`.
std::set<PrefixedStar> saturate_naive(const LogicSpec& spec, const FiniteFrame& frame,
                                      const std::vector<PrefixedStar>& assumptions,
                                      const std::set<PrefixedStar>& universe);

}  // namespace jl

#endif  // JL_STAR_HPP_
