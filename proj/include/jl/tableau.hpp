// Prefixed tableau for satisfiability, in the base and the improved rule set,
// with frame construction, branch rejection through the star calculus and
// model extraction from accepting branches.

#ifndef JL_TABLEAU_HPP_
#define JL_TABLEAU_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "jl/agents.hpp"
#include "jl/logic.hpp"
#include "jl/models.hpp"
#include "jl/star.hpp"

namespace jl {

class TableauError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TableauMode { Base, Improved };

// sigma s beta psi. A star entry stores *_i(t, psi) as the formula [t]_i psi
// with `star` set; star entries never carry boxes.
struct TableauEntry {
  int prefix = 0;  // index into Branch::prefixes
  bool truth = true;
  std::vector<int> boxes;
  Formula payload;
  bool star = false;

  friend bool operator==(const TableauEntry&, const TableauEntry&) = default;
};

struct TableauEntryHash {
  std::size_t operator()(const TableauEntry& e) const noexcept;
};

struct Branch {
  TableauMode mode = TableauMode::Improved;
  std::vector<ClassPrefix> prefixes;  // prefixes[0] is the root
  std::map<ClassPrefix, int> prefix_ids;
  std::vector<TableauEntry> entries;
  std::unordered_set<TableauEntry, TableauEntryHash> present;
  // Some conclusion was dropped because of the prefix-length or box limit.
  bool capped = false;

  bool has(const TableauEntry& e) const { return present.count(e) > 0; }
  // Adds unless present; returns whether it was new.
  bool add(TableauEntry e);
  // Id of the prefix, creating it when absent.
  int prefix_id(const ClassPrefix& p);
  std::optional<int> find_prefix(const ClassPrefix& p) const;
  bool propositionally_closed() const;

  std::string entry_text(const TableauEntry& e, const AgentAnalysis& a) const;
  std::string prefix_text(int id, const AgentAnalysis& a) const;
  std::string to_text(const AgentAnalysis& a) const;
};

// {root T phi, root F false}.
Branch initial_branch(Formula phi, TableauMode mode);

struct TableauLimits {
  int max_prefix_length = -1;  // -1: chosen from the classifier and |phi|
  int max_boxes = -1;          // -1: 2 for the J2 pattern, else max(2, 2 * modal depth)
  int prefix_exponent_cap = 4;  // default prefix limit 2^min(|phi|, cap) outside the certified cases
  std::size_t max_entries = 20000;   // per branch
  std::size_t max_branches = 20000;  // explored branches
  double max_seconds = 0;            // wall clock, 0 for none
};

struct ResolvedLimits {
  int max_prefix_length = 0;
  int max_boxes = 0;
};

ResolvedLimits resolve_limits(const TableauLimits& limits, const AgentAnalysis& a, const LogicSpec& spec,
                              Formula phi);

struct ExpandContext {
  const LogicSpec& spec;
  const AgentAnalysis& analysis;
  ResolvedLimits limits;
  std::function<void(const std::string&)> trace;  // one line per rule application
  bool blocking = true;
};

// For each prefix the nearest proper ancestor carrying exactly the same set
// of entries, or -1. Blocked prefixes create no further prefixes and are
// merged into their blocker when a model is extracted.
std::vector<int> blockers(const Branch& b);

// Applies the next applicable rule instance. Returns no branch when the
// branch is complete, two branches for the implication split and one
// otherwise. The mode of the branch selects the rule set.
std::vector<Branch> expand(const Branch& b, const ExpandContext& ctx);

// The frame F(b), with world k standing for b.prefixes[k]: the prefix edges
// (and view edges in improved mode), reflexive loops for F, closed under the
// C and V conditions.
FiniteFrame build_frame(const Branch& b, const AgentAnalysis& a, const LogicSpec& spec);

std::vector<PrefixedStar> true_stars(const Branch& b);
std::vector<PrefixedStar> false_stars(const Branch& b);

bool is_rejecting(const Branch& b, const AgentAnalysis& a, const LogicSpec& spec);

// The model of an accepting complete branch: F(b) plus the serial completion,
// atoms true where the branch says so and evidence generated by T(b).
FModel extract_model(const Branch& b, const AgentAnalysis& a, const LogicSpec& spec, bool merge_blocked = true);

enum class TableauVerdict { Satisfiable, Unsatisfiable, ResourceExceeded };

struct TableauStats {
  std::size_t branches = 0;
  std::size_t rule_applications = 0;
  std::size_t rejected = 0;
  int max_prefix_length = 0;
  int max_boxes = 0;
  std::size_t prefixes_created = 0;
  // Accepting complete branches whose model did not satisfy phi.
  std::size_t verification_failures = 0;
};

struct TableauResult {
  TableauVerdict verdict = TableauVerdict::ResourceExceeded;
  std::optional<FModel> model;
  std::optional<Branch> branch;
  std::string limit;  // which limit was hit, for ResourceExceeded
  ResolvedLimits limits;
  TableauStats stats;
};

struct DecideOptions {
  TableauMode mode = TableauMode::Improved;
  TableauLimits limits;
  std::function<void(const std::string&)> trace;
  bool blocking = true;
};

TableauResult decide(const LogicSpec& spec, Formula phi, const DecideOptions& options = {});

}  // namespace jl

#endif  // JL_TABLEAU_HPP_
