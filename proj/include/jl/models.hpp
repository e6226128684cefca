// F-models: frames with valuations and evidence generated from seeds, truth
// evaluation, frame validation, the bounded brute-force satisfiability oracle
// and the cluster finder for V-classes.

#ifndef JL_MODELS_HPP_
#define JL_MODELS_HPP_

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "jl/agents.hpp"
#include "jl/logic.hpp"
#include "jl/star.hpp"

namespace jl {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evidence is the least admissible evidence function containing the seeds.
struct FModel {
  LogicSpec spec;
  FiniteFrame frame;
  std::map<int, WorldSet> valuation;  // atom index -> worlds where it holds
  std::vector<PrefixedStar> seeds;
  int root = 0;

  bool holds(int atom, int world) const;
  std::string to_text() const;
};

FModel parse_model(const std::string& text, const LogicSpec& spec);

// Caches evidence sets and truth values for one model.
class Evaluator {
 public:
  explicit Evaluator(const FModel& model);
  ~Evaluator();

  bool evaluate(int world, Formula f);
  const WorldSet& evidence(int agent, Term t, Formula f);

 private:
  const FModel& model_;
  std::unique_ptr<Deriver> deriver_;
  std::map<std::tuple<int, const Expr*, const Expr*>, WorldSet> evidence_;
  std::unordered_map<const Expr*, WorldSet> truth_;
};

bool evaluate(const FModel& model, int world, Formula f);

struct FrameViolation {
  std::string condition;  // "reflexivity", "seriality", "V-transitivity", "C-inclusion"
  std::string witness;
};

std::vector<FrameViolation> validate_frame(const FiniteFrame& frame, const LogicSpec& spec);

// Every world of the model paired with every justification subformula of f.
std::vector<PrefixedStar> relevant_expressions(const FModel& model, Formula f);

// Evidence membership implies the successor clause for every relevant tuple.
bool check_strong_evidence(const FModel& model, const std::vector<PrefixedStar>& relevant);

enum class OracleVerdict { Sat, UnsatWithinBound, Indecisive };

struct OracleLimits {
  int max_worlds = 3;
  std::size_t max_frames = 100000;       // valid frames examined
  std::size_t max_search_nodes = 2000000;  // assignment nodes over all frames
};

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::Indecisive;
  std::optional<FModel> model;
  std::size_t frames = 0;
  std::size_t search_nodes = 0;
};

// Searches rooted frames with every world reachable from the root, smallest
// first, for a model of f with the strong evidence property on the
// justification subformulas of f.
OracleResult brute_force_sat(const LogicSpec& spec, Formula f, const OracleLimits& limits = {});

// A P-cluster for u: a_i with u R_i a_i, and whenever a_i R_j v and b R_j v
// then b R_j a_j (i, j in the class). Throws ModelError when the class is not
// a V-class.
std::optional<std::map<int, int>> find_cluster(const FModel& model, const AgentAnalysis& analysis, int p, int u);

}  // namespace jl

#endif  // JL_MODELS_HPP_
