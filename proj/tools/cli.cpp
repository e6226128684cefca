#include "cli.hpp"

#include <CLI11.hpp>

#include "jl/syntax.hpp"
#include "report.hpp"

namespace jusat {

namespace {

enum Exit { kYes = 0, kNo = 1, kLimit = 2, kUsage = 3 };

struct Options {
  std::string logic;
  std::string formula;
  std::string term;
  int agent = 1;
  std::string mode = "improved";
  std::string method = "auto";
  int max_prefix = -1;
  int max_boxes = -1;
  std::size_t max_branches = 20000;
  std::size_t max_entries = 20000;
  double time_limit = 30;
  int max_worlds = 3;
  bool json = false;
  bool trace = false;
};

jl::DecideOptions decide_options(const Options& o, std::ostream& err) {
  jl::DecideOptions d;
  d.mode = o.mode == "base" ? jl::TableauMode::Base : jl::TableauMode::Improved;
  d.limits.max_prefix_length = o.max_prefix;
  d.limits.max_boxes = o.max_boxes;
  d.limits.max_branches = o.max_branches;
  d.limits.max_entries = o.max_entries;
  d.limits.max_seconds = o.time_limit;
  if (o.trace) d.trace = [&err](const std::string& line) { err << "trace: " << line << "\n"; };
  return d;
}

int sat_exit(const SatReport& r) {
  if (r.verdict == "sat") return kYes;
  if (r.verdict == "unsat") return kNo;
  return kLimit;
}

void print_sat(const SatReport& r, std::ostream& out) {
  if (r.verdict == "sat")
    out << "SAT\n" << *r.model;
  else if (r.verdict == "unsat")
    out << "UNSAT\n";
  else
    out << "RESOURCE EXCEEDED: " << r.limit << "\n";
  out << "branches " << r.stats.branches << ", rules " << r.stats.rule_applications << ", max prefix "
      << r.stats.max_prefix_length << ", max boxes " << r.stats.max_boxes << "\n";
}

void print_oracle(const OracleReport& r, std::ostream& out) {
  if (r.verdict == "sat")
    out << "SAT\n" << *r.model;
  else if (r.verdict == "unsat-within-bound")
    out << "UNSAT within bound\n";
  else
    out << "INDECISIVE\n";
  out << "frames " << r.frames << ", search nodes " << r.search_nodes << "\n";
}

int run_analyze(const Options& o, std::ostream& out) {
  jl::LogicSpec spec = jl::load_logic_file(o.logic);
  jl::AgentAnalysis a = jl::analyze(spec);
  AnalyzeReport r{jl::classify(a, spec), a.to_text(), spec.warnings()};
  if (o.json) {
    out << json(r).dump(2) << "\n";
  } else {
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
    out << r.analysis << r.classification.to_text();
  }
  return kYes;
}

int run_sat(const Options& o, std::ostream& out, std::ostream& err) {
  jl::LogicSpec spec = jl::load_logic_file(o.logic);
  jl::Formula f = jl::parse_formula(o.formula);
  SatReport r = make_sat_report(jl::decide(spec, f, decide_options(o, err)));
  if (o.json)
    out << json(r).dump(2) << "\n";
  else
    print_sat(r, out);
  return sat_exit(r);
}

int run_prove(const Options& o, std::ostream& out) {
  jl::LogicSpec spec = jl::load_logic_file(o.logic);
  jl::Term t = jl::parse_term(o.term);
  jl::Formula body = jl::parse_formula(o.formula);
  if (o.agent < 1 || o.agent > spec.n) throw CLI::ValidationError("--agent", "agent out of range");
  ProveReport r;
  bool fast = o.method == "plus-free";
  if (o.method == "auto") {
    try {
      r.derivable = jl::prove_plus_free(spec, o.agent, t, body, &r.choices);
      r.method = "plus-free";
      fast = true;
    } catch (const jl::PreconditionError&) {
    }
  } else if (fast) {
    r.derivable = jl::prove_plus_free(spec, o.agent, t, body, &r.choices);
    r.method = "plus-free";
  }
  if (r.method.empty()) {
    jl::StarStats stats;
    r.derivable = jl::prove_justified(spec, o.agent, t, body, &stats);
    r.method = "justified";
    r.choices = stats.choices;
  }
  if (o.json)
    out << json(r).dump(2) << "\n";
  else
    out << (r.derivable ? "DERIVABLE" : "NOT DERIVABLE") << " (" << r.method << ")\n";
  return r.derivable ? kYes : kNo;
}

int run_oracle(const Options& o, std::ostream& out) {
  jl::LogicSpec spec = jl::load_logic_file(o.logic);
  jl::Formula f = jl::parse_formula(o.formula);
  OracleReport r = make_oracle_report(jl::brute_force_sat(spec, f, {.max_worlds = o.max_worlds}));
  if (o.json)
    out << json(r).dump(2) << "\n";
  else
    print_oracle(r, out);
  if (r.verdict == "sat") return kYes;
  if (r.verdict == "unsat-within-bound") return kNo;
  return kLimit;
}

int run_crosscheck(const Options& o, std::ostream& out, std::ostream& err) {
  jl::LogicSpec spec = jl::load_logic_file(o.logic);
  jl::Formula f = jl::parse_formula(o.formula);
  CrosscheckReport r;
  r.tableau = make_sat_report(jl::decide(spec, f, decide_options(o, err)));
  r.oracle = make_oracle_report(jl::brute_force_sat(spec, f, {.max_worlds = o.max_worlds}));
  bool t_sat = r.tableau.verdict == "sat";
  bool o_sat = r.oracle.verdict == "sat";
  if (r.tableau.verdict == "resource-exceeded" || r.oracle.verdict == "indecisive")
    r.outcome = o_sat && r.tableau.verdict == "unsat" ? "disagree" : "inconclusive";
  else
    r.outcome = t_sat == o_sat ? "agree" : "disagree";
  if (r.outcome == "inconclusive" && o_sat && t_sat) r.outcome = "agree";
  if (o.json) {
    out << json(r).dump(2) << "\n";
  } else {
    out << "tableau: ";
    print_sat(r.tableau, out);
    out << "oracle: ";
    print_oracle(r.oracle, out);
    out << r.outcome << "\n";
  }
  if (r.outcome == "agree") return kYes;
  if (r.outcome == "disagree") return kNo;
  return kLimit;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Satisfiability and derivability for multi-agent justification logics", "jusat"};
  app.require_subcommand(1);
  Options o;

  auto logic_opt = [&](CLI::App* c) { c->add_option("--logic", o.logic, "logic file")->required()->check(CLI::ExistingFile); };
  auto output_opts = [&](CLI::App* c) { c->add_flag("--json", o.json, "machine-readable output"); };
  auto tableau_opts = [&](CLI::App* c) {
    c->add_option("--mode", o.mode, "rule set")->check(CLI::IsMember({"base", "improved"}));
    c->add_option("--max-prefix", o.max_prefix, "prefix length cap (-1 chooses one)");
    c->add_option("--max-boxes", o.max_boxes, "box nesting cap (-1 chooses one)");
    c->add_option("--max-branches", o.max_branches, "explored branch cap");
    c->add_option("--max-entries", o.max_entries, "entries per branch cap");
    c->add_option("--time", o.time_limit, "seconds before giving up (0 for none)");
    c->add_flag("--trace", o.trace, "print each rule application to stderr");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "agent sets, classes and classification");
  logic_opt(analyze);
  output_opts(analyze);

  CLI::App* sat = app.add_subcommand("sat", "decide satisfiability with the tableau");
  logic_opt(sat);
  sat->add_option("--formula", o.formula)->required();
  tableau_opts(sat);
  output_opts(sat);

  CLI::App* prove = app.add_subcommand("prove", "decide whether [term]_agent formula is a theorem");
  logic_opt(prove);
  prove->add_option("--term", o.term)->required();
  prove->add_option("--agent", o.agent)->required();
  prove->add_option("--formula", o.formula)->required();
  prove->add_option("--method", o.method)->check(CLI::IsMember({"auto", "plus-free", "justified"}));
  output_opts(prove);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force search over small models");
  logic_opt(oracle);
  oracle->add_option("--formula", o.formula)->required();
  oracle->add_option("--max-worlds", o.max_worlds)->check(CLI::Range(1, 6));
  output_opts(oracle);

  CLI::App* cross = app.add_subcommand("crosscheck", "compare the tableau with the oracle");
  logic_opt(cross);
  cross->add_option("--formula", o.formula)->required();
  cross->add_option("--max-worlds", o.max_worlds)->check(CLI::Range(1, 6));
  tableau_opts(cross);
  output_opts(cross);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kYes : kUsage;
  }

  try {
    if (analyze->parsed()) return run_analyze(o, out);
    if (sat->parsed()) return run_sat(o, out, err);
    if (prove->parsed()) return run_prove(o, out);
    if (oracle->parsed()) return run_oracle(o, out);
    return run_crosscheck(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace jusat
