// Derived agent sets, relations and class structure of a logic, the collapse
// relation on agent strings, visibility of V-classes, and the complexity
// classifier.

#ifndef JL_AGENTS_HPP_
#define JL_AGENTS_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jl/logic.hpp"

namespace jl {

// Bit (i-1) stands for agent i.
using AgentSet = std::uint64_t;

inline AgentSet agent_bit(int i) { return AgentSet{1} << (i - 1); }
inline bool has_agent(AgentSet s, int i) { return (s >> (i - 1)) & 1U; }
std::vector<int> agents_in(AgentSet s);

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AgentAnalysis {
  int n = 0;
  AgentSet S = 0;
  AgentSet R = 0;
  std::set<AgentPair> C_F;
  std::set<AgentPair> V;  // the logic's V, kept for the collapse rules

  // Indexed by agent (entry 0 unused).
  std::vector<AgentSet> cf_up;    // {j | i C_F* j}
  std::vector<AgentSet> cf_down;  // {j | j C_F* i}
  std::vector<AgentSet> q_up;     // {j | i Q j}, empty outside S

  std::vector<AgentSet> PC;  // classes of the C-equivalence, ordered by least member
  std::vector<AgentSet> P;   // classes of the VC-equivalence, same order
  std::vector<int> chi;      // agent -> index into PC, -1 outside S
  std::vector<int> pclass;   // agent -> index into P, -1 outside S
  std::vector<bool> p_is_vclass;

  // Relations on PC indices.
  std::vector<std::vector<bool>> leqC, leqVC, leqV;
  std::vector<std::vector<int>> MC;  // PC index -> PC indices
  std::vector<AgentSet> N;           // indexed by agent

  bool in_S(int i) const { return i >= 1 && i <= n && has_agent(S, i); }
  bool cf_star(int i, int j) const { return has_agent(cf_up[i], j); }
  bool lessC(int a, int b) const { return leqC[a][b] && !leqC[b][a]; }
  bool lessVC(int a, int b) const { return leqVC[a][b] && !leqVC[b][a]; }
  bool lessV(int a, int b) const { return leqV[a][b] && !leqV[b][a]; }
  // The fixed agent standing for a PC class.
  int representative(int pc) const;
  // PC indices of classes contained in P class `p`.
  std::vector<int> pc_classes_of(int p) const;

  std::string to_text() const;
};

AgentAnalysis analyze(const LogicSpec& spec);

struct AgentSymbol {
  int agent = 0;
  bool overlined = false;

  friend bool operator==(const AgentSymbol&, const AgentSymbol&) = default;
};

using AgentString = std::vector<AgentSymbol>;

// Parses "1 2 ^3" where ^k is the overlined agent k.
AgentString parse_agent_string(const std::string& text);
std::string print_agent_string(const AgentString& w);

// w ->* i. Throws AnalysisError for symbols outside S.
bool collapses_to(const AgentAnalysis& a, const AgentString& w, int target);

// True iff some alpha in S* gives w.alpha ->* target.
bool collapses_with_suffix(const AgentAnalysis& a, const AgentString& w, int target);

// World prefixes below the root, as PC class indices.
using ClassPrefix = std::vector<int>;

// The L-view from sigma for the P class with index `p`, or nothing. When
// several splits qualify the longest view is returned.
std::optional<ClassPrefix> visible(const AgentAnalysis& a, int p, const ClassPrefix& sigma);

struct ClassificationReport {
  bool sigma2p_condition = false;
  std::string two_agent_class;  // "PSPACE-complete", "Sigma2p" or "n/a"
  bool j1_pattern = false;
  bool j2_pattern = false;
  std::string nexp_note;

  std::string to_text() const;
  std::string to_keyvalue() const;
};

ClassificationReport classify(const AgentAnalysis& a, const LogicSpec& spec);

}  // namespace jl

#endif  // JL_AGENTS_HPP_
