#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "jl/syntax.hpp"
#include "report.hpp"

using namespace jusat;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run jusat_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string logic(const char* name) { return std::string(JL_LOGIC_DIR) + "/" + name + ".logic"; }

}  // namespace

TEST_CASE("analyze reports the J2 pattern") {
  Run r = jusat_run({"analyze", "--logic", logic("j2")});
  CHECK(r.code == 0);
  CHECK(r.out.find("J2-style pattern (EXP-hard): present") != std::string::npos);
}

TEST_CASE("sat exit codes") {
  CHECK(jusat_run({"sat", "--logic", logic("lp"), "--formula", "~([x1]_1 p1 -> p1)"}).code == 1);
  Run s = jusat_run({"sat", "--logic", logic("lp"), "--formula", "[x1]_1 p1 & ~p2"});
  CHECK(s.code == 0);
  CHECK(s.out.find("worlds") != std::string::npos);
  CHECK(jusat_run({"sat", "--logic", logic("lp"), "--formula", "~([x1]_1 p1 -> p1)", "--mode", "base"}).code == 1);
  CHECK(jusat_run({"sat", "--logic", logic("j2"), "--formula", "[x1]_3 p1", "--max-branches", "0"}).code == 2);
}

TEST_CASE("prove exit codes") {
  CHECK(jusat_run({"prove", "--logic", logic("lp"), "--term", "c1", "--agent", "1", "--formula", "p1->(p2->p1)"}).code == 0);
  CHECK(jusat_run({"prove", "--logic", logic("lp"), "--term", "c1", "--agent", "1", "--formula", "p1->p1"}).code == 1);
  Run sum = jusat_run({"prove", "--logic", logic("lp"), "--term", "x1 + c1", "--agent", "1", "--formula", "p1->(p2->p1)"});
  CHECK(sum.code == 0);
  CHECK(sum.out.find("justified") != std::string::npos);
}

TEST_CASE("oracle and crosscheck") {
  CHECK(jusat_run({"oracle", "--logic", logic("lp"), "--formula", "p1 & ~p2"}).code == 0);
  CHECK(jusat_run({"oracle", "--logic", logic("lp"), "--formula", "[x1]_1 p1 & ~p1"}).code == 1);
  Run c = jusat_run({"crosscheck", "--logic", logic("two_agent_pspace"), "--formula", "[x1]_1 p1 & ~[!x1]_2 [x1]_1 p1"});
  CHECK(c.code == 0);
  CHECK(c.out.find("agree") != std::string::npos);
}

TEST_CASE("usage and input errors exit with 3") {
  CHECK(jusat_run({}).code == 3);
  CHECK(jusat_run({"sat", "--logic", logic("lp")}).code == 3);
  CHECK(jusat_run({"sat", "--logic", "/nonexistent.logic", "--formula", "p1"}).code == 3);
  CHECK(jusat_run({"sat", "--logic", logic("lp"), "--formula", "p1 &"}).code == 3);
  CHECK(jusat_run({"sat", "--logic", logic("lp"), "--formula", "[x1]_2 p1"}).code == 3);
  CHECK(jusat_run({"sat", "--logic", logic("lp"), "--formula", "p1", "--mode", "fast"}).code == 3);
  CHECK(jusat_run({"--help"}).code == 0);
}

TEST_CASE("machine-readable output reads back into the reports") {
  Run a = jusat_run({"analyze", "--logic", logic("j1"), "--json"});
  AnalyzeReport ar = json::parse(a.out).get<AnalyzeReport>();
  CHECK(ar.classification.j1_pattern);
  CHECK(json(ar) == json::parse(a.out));

  Run s = jusat_run({"sat", "--logic", logic("jd4"), "--formula", "[x1]_1 p1 & ~p2", "--json"});
  SatReport sr = json::parse(s.out).get<SatReport>();
  CHECK(sr.verdict == "sat");
  REQUIRE(sr.model);
  CHECK(json(sr) == json::parse(s.out));
  jl::FModel m = jl::parse_model(*sr.model, jl::load_logic_file(logic("jd4")));
  CHECK(jl::evaluate(m, m.root, jl::parse_formula("[x1]_1 p1 & ~p2")));

  Run p = jusat_run({"prove", "--logic", logic("lp"), "--term", "c1", "--agent", "1", "--formula", "p1->(p2->p1)", "--json"});
  CHECK(json(json::parse(p.out).get<ProveReport>()) == json::parse(p.out));

  Run c = jusat_run({"crosscheck", "--logic", logic("lp"), "--formula", "p1", "--json"});
  CrosscheckReport cr = json::parse(c.out).get<CrosscheckReport>();
  CHECK(cr.outcome == "agree");
  CHECK(json(cr) == json::parse(c.out));
}

TEST_CASE("trace lines go to stderr") {
  Run r = jusat_run({"sat", "--logic", logic("lp"), "--formula", "[x1]_1 p1", "--trace"});
  CHECK(r.code == 0);
  CHECK(r.err.find("trace:") != std::string::npos);
}
