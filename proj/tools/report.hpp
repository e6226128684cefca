// JSON forms of the reports printed by jusat, readable back into the same
// structures.

#ifndef JUSAT_REPORT_HPP_
#define JUSAT_REPORT_HPP_

#include <optional>
#include <string>

#include "json.hpp"
#include "jl/agents.hpp"
#include "jl/models.hpp"
#include "jl/tableau.hpp"

namespace jl {

void to_json(nlohmann::json& j, const ClassificationReport& r);
void from_json(const nlohmann::json& j, ClassificationReport& r);
void to_json(nlohmann::json& j, const TableauStats& s);
void from_json(const nlohmann::json& j, TableauStats& s);

}  // namespace jl

namespace jusat {

using nlohmann::json;

struct AnalyzeReport {
  jl::ClassificationReport classification;
  std::string analysis;  // AgentAnalysis::to_text
  std::vector<std::string> warnings;
};

struct SatReport {
  std::string verdict;  // "sat", "unsat" or "resource-exceeded"
  std::string limit;
  jl::TableauStats stats;
  std::optional<std::string> model;  // serialized FModel
};

struct ProveReport {
  bool derivable = false;
  std::string method;  // "plus-free" or "justified"
  int choices = 0;
};

struct OracleReport {
  std::string verdict;  // "sat", "unsat-within-bound" or "indecisive"
  std::size_t frames = 0;
  std::size_t search_nodes = 0;
  std::optional<std::string> model;
};

struct CrosscheckReport {
  SatReport tableau;
  OracleReport oracle;
  std::string outcome;  // "agree", "disagree" or "inconclusive"
};

void to_json(json& j, const AnalyzeReport& r);
void from_json(const json& j, AnalyzeReport& r);
void to_json(json& j, const SatReport& r);
void from_json(const json& j, SatReport& r);
void to_json(json& j, const ProveReport& r);
void from_json(const json& j, ProveReport& r);
void to_json(json& j, const OracleReport& r);
void from_json(const json& j, OracleReport& r);
void to_json(json& j, const CrosscheckReport& r);
void from_json(const json& j, CrosscheckReport& r);

SatReport make_sat_report(const jl::TableauResult& r);
OracleReport make_oracle_report(const jl::OracleResult& r);

}  // namespace jusat

#endif  // JUSAT_REPORT_HPP_
