#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "evacsched/cli.hpp"
#include "evacsched/validate.hpp"
#include "fixtures.hpp"

using namespace evacsched;

TEST_SUITE_BEGIN("cli");

namespace {

struct TempDir {
  std::string base;
  TempDir() {
    base = "cli_tmp_" + std::to_string(reinterpret_cast<unsigned long long>(this) % 100000);
    int rc = std::system(("mkdir -p " + base).c_str());
    REQUIRE(rc == 0);
  }
  ~TempDir() {
    int rc = std::system(("rm -rf " + base).c_str());
    (void)rc;
  }
  std::string path(const std::string& name) const { return base + "/" + name; }
};

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen, solve, validate, report pipeline") {
  TempDir tmp;
  std::string inst = tmp.path("inst.json");
  std::string sol = tmp.path("sol.json");
  std::string csv = tmp.path("profile.csv");

  CHECK(run_cli({"gen", "--areas", "3", "--seed", "11", "-o", inst}) == 0);
  CHECK(run_cli({"solve", "--mode", "sim", "--objective", "maxflow", "--horizon", "12",
                 "--time-limit", "20", "--strategy", "1B2B", "-i", inst, "-o", sol}) == 0);
  CHECK(run_cli({"validate", "-i", inst, "-s", sol}) == 0);
  CHECK(run_cli({"report", "--profile", "-i", inst, "-s", sol, "-o", csv}) == 0);
  std::string profile = slurp(csv);
  CHECK(profile.rfind("areaId,minute,vehiclesDeparting\n", 0) == 0);

  std::string part = tmp.path("partition.json");
  CHECK(run_cli({"report", "--partition", "--mode", "sim", "-i", inst, "-o", part}) == 0);
  CHECK(slurp(part).find("dominatingEdges") != std::string::npos);

  std::string bnd = tmp.path("bound.json");
  CHECK(run_cli({"bound", "--horizon", "12", "-i", inst, "-o", bnd}) == 0);
  CHECK(slurp(bnd).find("perComponent") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  std::string inst = tmp.path("f2.json");
  write(inst, serialize_instance(fixtures::f2()));

  SUBCASE("usage errors exit 2") {
    CHECK(run_cli({"solve", "--nonsense"}) == 2);
    CHECK(run_cli({"solve", "-i", inst, "--objective", "maxflow"}) == 2);  // horizon missing
    CHECK(run_cli({"solve", "--objective", "maxflow", "--horizon", "6", "-i",
                   tmp.path("missing.json")}) == 2);
  }
  SUBCASE("schema violations exit 2") {
    std::string bad = tmp.path("bad.json");
    write(bad, "{\"nodes\": []}");
    CHECK(run_cli({"solve", "--objective", "maxflow", "--horizon", "6", "-i", bad}) == 2);
  }
  SUBCASE("infeasible sat exits 1") {
    std::string sol = tmp.path("sol.json");
    CHECK(run_cli({"solve", "--objective", "sat", "--horizon", "6", "--time-limit", "20", "-i",
                   inst, "-o", sol}) == 1);
  }
  SUBCASE("clearance does not require a horizon") {
    std::string sol = tmp.path("ct.json");
    CHECK(run_cli({"solve", "--objective", "clearance", "--time-limit", "20", "-i", inst, "-o",
                   sol}) == 0);
    Solution s = parse_solution(slurp(sol));
    CHECK(s.objectiveValue == 7);
  }
  SUBCASE("validation violations exit 1") {
    std::string sol = tmp.path("sol.json");
    CHECK(run_cli({"solve", "--objective", "maxflow", "--horizon", "6", "--time-limit", "20",
                   "-i", inst, "-o", sol}) == 0);
    // Corrupt the schedule: move b onto a's shared-arc minutes.
    Solution s = parse_solution(slurp(sol));
    if (s.perArea.count("a") && s.perArea.count("b")) {
      s.perArea["b"] = s.perArea["a"];
      s.perArea["b"].flow = std::min(4, s.perArea["b"].flow);
    }
    write(sol, serialize_solution(s));
    int rc = run_cli({"validate", "-i", inst, "-s", sol});
    CHECK(rc == 1);
  }
}

TEST_CASE("departure profile expansion") {
  Instance f1 = fixtures::f1();
  Solution s;
  s.mode = EvacMode::Simultaneous;
  s.horizon = 10;
  s.perArea["a"] = {0, 3, 3, 2, 6};
  CHECK(report_departure_profile(s, f1) ==
        "areaId,minute,vehiclesDeparting\n"
        "a,0,2\n"
        "a,1,2\n"
        "a,2,2\n");

  SUBCASE("flow 0 produces no rows") {
    s.perArea["a"] = {0, 0, 0, 0, 0};
    CHECK(report_departure_profile(s, f1) == "areaId,minute,vehiclesDeparting\n");
  }
  SUBCASE("the last batch is the remainder") {
    s.perArea["a"] = {0, 3, 3, 2, 5};  // not a consistent model flow, but the
    CHECK(report_departure_profile(s, f1) ==  // expansion rule still caps the tail
          "areaId,minute,vehiclesDeparting\n"
          "a,0,2\n"
          "a,1,2\n"
          "a,2,1\n");
  }
  SUBCASE("F2 horizon-6 optimum expands to three rows") {
    Instance f2 = fixtures::f2();
    Solution s2;
    s2.mode = EvacMode::Simultaneous;
    s2.horizon = 6;
    s2.perArea["a"] = {0, 2, 2, 2, 4};
    s2.perArea["b"] = {1, 1, 2, 2, 2};
    CHECK(report_departure_profile(s2, f2) ==
          "areaId,minute,vehiclesDeparting\n"
          "a,0,2\n"
          "a,1,2\n"
          "b,1,2\n");
  }
}

TEST_CASE("auto strategy keeps the best portfolio result") {
  Instance f2 = fixtures::f2();
  SolveOptions base;
  base.timeLimitSeconds = 8.0;
  base.parallelComponents = false;
  base.strategy = "auto";
  Solution autoSol = solve_nepp(f2, SearchObjective::Maxflow, 6, base);
  for (const char* st : {"1A2A", "1A2B", "1B2A", "1B2B"}) {
    SolveOptions o = base;
    o.strategy = st;
    o.timeLimitSeconds = 2.0;  // equal per-strategy budget
    Solution s = solve_nepp(f2, SearchObjective::Maxflow, 6, o);
    CHECK(autoSol.objectiveValue >= s.objectiveValue);
  }
}

TEST_SUITE_END();
