// Logic instances (n, D, F, V, C) with a schematic constant specification.

#ifndef JL_LOGIC_HPP_
#define JL_LOGIC_HPP_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jl/expr.hpp"

namespace jl {

using AgentPair = std::pair<int, int>;

struct AxiomSchemeId {
  enum class Kind { P1, P2, P3, Application, SumLeft, SumRight, Factivity, Consistency, Verification, Conversion };
  Kind kind = Kind::P1;
  int i = 0;
  int j = 0;

  static AxiomSchemeId parse(std::string_view token);
  std::string to_string() const;

  friend auto operator<=>(const AxiomSchemeId&, const AxiomSchemeId&) = default;
  friend bool operator==(const AxiomSchemeId&, const AxiomSchemeId&) = default;
};

struct CsEntry {
  int constant = 0;
  int agent = 0;
  AxiomSchemeId scheme;

  friend auto operator<=>(const CsEntry&, const CsEntry&) = default;
  friend bool operator==(const CsEntry&, const CsEntry&) = default;
};

class ConstantSpecification {
 public:
  ConstantSpecification() = default;
  explicit ConstantSpecification(std::vector<CsEntry> entries);

  const std::vector<CsEntry>& entries() const { return entries_; }
  // Entries for one constant, any agent.
  std::vector<CsEntry> entries_for(int constant) const;
  bool schematically_injective() const;
  bool total() const { return total_; }
  void mark_total() { total_ = true; }

 private:
  std::vector<CsEntry> entries_;
  std::multimap<int, std::size_t> by_constant_;
  bool total_ = false;
};

class LogicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LogicSpec {
  int n = 1;
  std::set<int> D;
  std::set<int> F;
  std::set<AgentPair> V;
  std::set<AgentPair> C;
  ConstantSpecification cs;

  // Throws LogicError on out-of-range agents or scheme ids not valid here.
  void validate() const;

  // Every scheme id that names an axiom of this logic.
  std::vector<AxiomSchemeId> axiom_ids() const;
  bool valid_id(const AxiomSchemeId& id) const;
  // Agents I for which the CS justifies every axiom.
  std::set<int> appropriate_for() const;

  // TOTAL: the constant for (agent, scheme), one per scheme per agent.
  int total_constant(int agent, const AxiomSchemeId& id) const;
  void make_total();

  std::vector<std::string> warnings() const;
  std::string to_text() const;
};

LogicSpec load_logic(std::string_view text);
LogicSpec load_logic_file(const std::string& path);

// Schemes use ?A1..?A3 formula metas, ?T1/?T2 term metas and agent meta 1 where
// the axiom quantifies over all agents.
Formula scheme_of(const AxiomSchemeId& id);

// [term]_agent body in cl_n(CS)?
bool in_cl(const LogicSpec& spec, int agent, Term term, Formula body);

}  // namespace jl

#endif  // JL_LOGIC_HPP_
