#include "report.hpp"

namespace jl {

using nlohmann::json;

void to_json(json& j, const ClassificationReport& r) {
  j = json{{"sigma2p_condition", r.sigma2p_condition},
           {"two_agent_class", r.two_agent_class},
           {"j1_pattern", r.j1_pattern},
           {"j2_pattern", r.j2_pattern},
           {"nexp_note", r.nexp_note}};
}

void from_json(const json& j, ClassificationReport& r) {
  j.at("sigma2p_condition").get_to(r.sigma2p_condition);
  j.at("two_agent_class").get_to(r.two_agent_class);
  j.at("j1_pattern").get_to(r.j1_pattern);
  j.at("j2_pattern").get_to(r.j2_pattern);
  j.at("nexp_note").get_to(r.nexp_note);
}

void to_json(json& j, const TableauStats& s) {
  j = json{{"branches", s.branches},
           {"rule_applications", s.rule_applications},
           {"rejected", s.rejected},
           {"max_prefix_length", s.max_prefix_length},
           {"max_boxes", s.max_boxes},
           {"prefixes_created", s.prefixes_created},
           {"verification_failures", s.verification_failures}};
}

void from_json(const json& j, TableauStats& s) {
  j.at("branches").get_to(s.branches);
  j.at("rule_applications").get_to(s.rule_applications);
  j.at("rejected").get_to(s.rejected);
  j.at("max_prefix_length").get_to(s.max_prefix_length);
  j.at("max_boxes").get_to(s.max_boxes);
  j.at("prefixes_created").get_to(s.prefixes_created);
  j.at("verification_failures").get_to(s.verification_failures);
}

}  // namespace jl

namespace jusat {

namespace {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <class T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null())
    v = j.at(key).get<T>();
  else
    v.reset();
}

}  // namespace

void to_json(json& j, const AnalyzeReport& r) {
  j = json{{"classification", r.classification}, {"analysis", r.analysis}, {"warnings", r.warnings}};
}

void from_json(const json& j, AnalyzeReport& r) {
  j.at("classification").get_to(r.classification);
  j.at("analysis").get_to(r.analysis);
  j.at("warnings").get_to(r.warnings);
}

void to_json(json& j, const SatReport& r) {
  j = json{{"verdict", r.verdict}, {"limit", r.limit}, {"stats", r.stats}};
  put_optional(j, "model", r.model);
}

void from_json(const json& j, SatReport& r) {
  j.at("verdict").get_to(r.verdict);
  j.at("limit").get_to(r.limit);
  j.at("stats").get_to(r.stats);
  get_optional(j, "model", r.model);
}

void to_json(json& j, const ProveReport& r) {
  j = json{{"derivable", r.derivable}, {"method", r.method}, {"choices", r.choices}};
}

void from_json(const json& j, ProveReport& r) {
  j.at("derivable").get_to(r.derivable);
  j.at("method").get_to(r.method);
  j.at("choices").get_to(r.choices);
}

void to_json(json& j, const OracleReport& r) {
  j = json{{"verdict", r.verdict}, {"frames", r.frames}, {"search_nodes", r.search_nodes}};
  put_optional(j, "model", r.model);
}

void from_json(const json& j, OracleReport& r) {
  j.at("verdict").get_to(r.verdict);
  j.at("frames").get_to(r.frames);
  j.at("search_nodes").get_to(r.search_nodes);
  get_optional(j, "model", r.model);
}

void to_json(json& j, const CrosscheckReport& r) {
  j = json{{"tableau", r.tableau}, {"oracle", r.oracle}, {"outcome", r.outcome}};
}

void from_json(const json& j, CrosscheckReport& r) {
  j.at("tableau").get_to(r.tableau);
  j.at("oracle").get_to(r.oracle);
  j.at("outcome").get_to(r.outcome);
}

SatReport make_sat_report(const jl::TableauResult& r) {
  SatReport out;
  switch (r.verdict) {
    case jl::TableauVerdict::Satisfiable: out.verdict = "sat"; break;
    case jl::TableauVerdict::Unsatisfiable: out.verdict = "unsat"; break;
    case jl::TableauVerdict::ResourceExceeded: out.verdict = "resource-exceeded"; break;
  }
  out.limit = r.limit;
  out.stats = r.stats;
  if (r.model) out.model = r.model->to_text();
  return out;
}

OracleReport make_oracle_report(const jl::OracleResult& r) {
  OracleReport out;
  switch (r.verdict) {
    case jl::OracleVerdict::Sat: out.verdict = "sat"; break;
    case jl::OracleVerdict::UnsatWithinBound: out.verdict = "unsat-within-bound"; break;
    case jl::OracleVerdict::Indecisive: out.verdict = "indecisive"; break;
  }
  out.frames = r.frames;
  out.search_nodes = r.search_nodes;
  if (r.model) out.model = r.model->to_text();
  return out;
}

}  // namespace jusat
