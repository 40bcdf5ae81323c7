#include "doctest.h"

#include "evacsched/bounds.hpp"
#include "evacsched/solvers.hpp"
#include "evacsched/validate.hpp"
#include "fixtures.hpp"

using namespace evacsched;

TEST_SUITE_BEGIN("solvers");

namespace {

SolveOptions quiet_opts() {
  SolveOptions o;
  o.timeLimitSeconds = 30.0;
  o.strategy = "1B2B";
  o.parallelComponents = false;
  return o;
}

}  // namespace

TEST_CASE("F1 clearance is forced to 5") {
  SolveOptions o = quiet_opts();
  Solution sim = solve_nepp(fixtures::f1(), SearchObjective::Clearance, 0, o);
  CHECK(sim.status == SolveStatus::Optimal);
  CHECK(sim.objectiveValue == 5);  // 6 vehicles at rate 2 need 3 minutes, plus 2 transit
  CHECK(sim.perArea.at("a").rate == 2);

  Solution ph = solve_npepp(fixtures::f1(), SearchObjective::Clearance, 0, o);
  CHECK(ph.objectiveValue == 5);  // single task: disjunctive is vacuous
}

TEST_CASE("F2 maxflow") {
  SolveOptions o = quiet_opts();
  SUBCASE("horizon 8 evacuates everyone") {
    Solution s = solve_nepp(fixtures::f2(), SearchObjective::Maxflow, 8, o);
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.objectiveValue == 8);
    CHECK(simulate(s, fixtures::f2()).ok);
  }
  SUBCASE("horizon 6 matches the exhaustive oracle at 6") {
    auto oracle =
        brute_force_optimum(fixtures::f2(), EvacMode::Simultaneous, SearchObjective::Maxflow, 6);
    REQUIRE(oracle.has_value());
    CHECK(*oracle == 6);
    Solution s = solve_nepp(fixtures::f2(), SearchObjective::Maxflow, 6, o);
    CHECK(s.objectiveValue == 6);
    CHECK(s.bound.has_value());
    CHECK(*s.bound == 6);  // equals the preemptive bound here
  }
}

TEST_CASE("F3 decomposes into single-area optima") {
  SolveOptions o = quiet_opts();
  Solution whole = solve_nepp(fixtures::f3(), SearchObjective::Maxflow, 10, o);
  CHECK(whole.status == SolveStatus::Optimal);
  CHECK(whole.perComponent.size() == 2);
  long long partSum = 0;
  for (const auto& c : whole.perComponent) partSum += c.objective;
  CHECK(whole.objectiveValue == partSum);
  CHECK(whole.objectiveValue == 5);  // both areas fully evacuated
}

TEST_CASE("phased maxflow on F2") {
  SolveOptions o = quiet_opts();
  SUBCASE("horizon 6: oracle agrees at 6") {
    auto oracle =
        brute_force_optimum(fixtures::f2(), EvacMode::Phased, SearchObjective::Maxflow, 6);
    REQUIRE(oracle.has_value());
    CHECK(*oracle == 6);
    Solution s = solve_npepp(fixtures::f2(), SearchObjective::Maxflow, 6, o);
    CHECK(s.objectiveValue == 6);
    CHECK(simulate(s, fixtures::f2()).ok);
  }
  SUBCASE("horizon 8: sequential use of the shared arc evacuates everyone") {
    Solution s = solve_npepp(fixtures::f2(), SearchObjective::Maxflow, 8, o);
    CHECK(s.objectiveValue == 8);
  }
  SUBCASE("greedy fast path and branch-and-bound agree") {
    for (int h : {5, 6, 7, 8, 9}) {
      SolveOptions noGreedy = o;
      noGreedy.greedyFastPath = false;
      Solution fast = solve_npepp(fixtures::f2(), SearchObjective::Maxflow, h, o);
      Solution slow = solve_npepp(fixtures::f2(), SearchObjective::Maxflow, h, noGreedy);
      CHECK(fast.objectiveValue == slow.objectiveValue);
      CHECK(simulate(fast, fixtures::f2()).ok);
    }
  }
  SUBCASE("F1: phased equals simultaneous on a one-task component") {
    Solution ph = solve_npepp(fixtures::f1(), SearchObjective::Maxflow, 10, o);
    Solution sim = solve_nepp(fixtures::f1(), SearchObjective::Maxflow, 10, o);
    CHECK(ph.objectiveValue == sim.objectiveValue);
  }
}

TEST_CASE("theorem 3 precondition") {
  ComponentPartition p2 = partition_components(fixtures::f2());
  CHECK(theorem3_precondition(p2.components[0], fixtures::f2(), 8));

  // A cutoff on one private arc breaks the shared-completion requirement.
  Instance skew = fixtures::f2();
  skew.arcs[0].cutoff = 4.0;  // ea only
  ComponentPartition ps = partition_components(skew);
  CHECK_FALSE(theorem3_precondition(ps.components[0], skew, 8));

  ComponentPartition p3 = partition_components(fixtures::f3());
  CHECK(theorem3_precondition(p3.components[0], fixtures::f3(), 10));  // single area

  // Node-connected but arc-disjoint paths do not converge.
  ComponentPartition pc = partition_components(fixtures::chain3());
  CHECK_FALSE(theorem3_precondition(pc.components[0], fixtures::chain3(), 10));
}

TEST_CASE("greedy schedules a single-area component at start 0 and max rate") {
  ComponentPartition p = partition_components(fixtures::f1());
  auto sched = phased_greedy_convergent(p.components[0], fixtures::f1(), 10);
  const AreaSolution& a = sched.at("a");
  CHECK(a.start == 0);
  CHECK(a.rate == 2);
  CHECK(a.flow == 6);
  CHECK(a.dur == 3);
}

TEST_CASE("sat and maxflow agree about full evacuation") {
  SolveOptions o = quiet_opts();
  Solution sat7 = solve_nepp(fixtures::f2(), SearchObjective::Sat, 7, o);
  CHECK(sat7.status == SolveStatus::Optimal);
  Solution mf7 = solve_nepp(fixtures::f2(), SearchObjective::Maxflow, 7, o);
  CHECK(mf7.objectiveValue == 8);

  Solution sat6 = solve_nepp(fixtures::f2(), SearchObjective::Sat, 6, o);
  CHECK(sat6.status == SolveStatus::Infeasible);
  CHECK(sat6.perArea.empty());
}

TEST_CASE("clearance solutions are tight: sat(CT) feasible, sat(CT-1) infeasible") {
  SolveOptions o = quiet_opts();
  for (bool phased : {false, true}) {
    Instance f2 = fixtures::f2();
    Solution ct = phased ? solve_npepp(f2, SearchObjective::Clearance, 0, o)
                         : solve_nepp(f2, SearchObjective::Clearance, 0, o);
    REQUIRE(ct.status == SolveStatus::Optimal);
    CHECK(ct.objectiveValue == 7);  // b: start 1, dur 2, end 3, arrival 3+4
    CHECK(simulate(ct.perArea, f2, phased ? EvacMode::Phased : EvacMode::Simultaneous,
                   ct.horizon)
              .ok);

    int ctVal = static_cast<int>(ct.objectiveValue);
    Solution at = phased ? solve_npepp(f2, SearchObjective::Sat, ctVal, o)
                         : solve_nepp(f2, SearchObjective::Sat, ctVal, o);
    CHECK(at.status == SolveStatus::Optimal);
    Solution below = phased ? solve_npepp(f2, SearchObjective::Sat, ctVal - 1, o)
                            : solve_nepp(f2, SearchObjective::Sat, ctVal - 1, o);
    CHECK(below.status == SolveStatus::Infeasible);
  }
}

TEST_CASE("clearance lower bound from the relaxation is respected") {
  auto lb = preemptive_clearance_lb(fixtures::f2());
  REQUIRE(lb.has_value());
  Solution ct = solve_nepp(fixtures::f2(), SearchObjective::Clearance, 0, quiet_opts());
  CHECK(ct.objectiveValue >= *lb);
  CHECK(ct.bound.has_value());
  CHECK(*ct.bound == *lb);
}

TEST_CASE("binary-search clearance fallback agrees with branch and bound") {
  SolveOptions o = quiet_opts();
  SolveOptions bs = o;
  bs.ctBinarySearch = true;
  for (bool phased : {false, true}) {
    Solution direct = phased ? solve_npepp(fixtures::f2(), SearchObjective::Clearance, 0, o)
                             : solve_nepp(fixtures::f2(), SearchObjective::Clearance, 0, o);
    Solution viaSat = phased ? solve_npepp(fixtures::f2(), SearchObjective::Clearance, 0, bs)
                             : solve_nepp(fixtures::f2(), SearchObjective::Clearance, 0, bs);
    CHECK(direct.objectiveValue == viaSat.objectiveValue);
    CHECK(viaSat.status == SolveStatus::Optimal);
  }
}

TEST_CASE("departure and end windows narrow the schedule") {
  Instance f1 = fixtures::f1();
  f1.areas[0].minStart = 2;
  f1.areas[0].maxEnd = 5;
  std::string doc = serialize_instance(f1);
  Instance back = parse_instance(doc);
  CHECK(back.areas[0].minStart == 2);
  CHECK(back.areas[0].maxEnd == 5);

  PathMetrics m = path_metrics(f1.areas[0], f1);
  TaskState t = init_task_domains(f1.areas[0], m, 10, EvacMode::Simultaneous);
  CHECK(t.start.lb() == 2);
  CHECK(t.end.ub() == 5);

  SolveOptions o = quiet_opts();
  Solution s = solve_nepp(f1, SearchObjective::Maxflow, 10, o);
  CHECK(s.status == SolveStatus::Optimal);
  CHECK(s.objectiveValue == 6);  // window [2,5] still fits 3 minutes at rate 2
  CHECK(s.perArea.at("a").start >= 2);
  CHECK(s.perArea.at("a").end <= 5);

  f1.areas[0].maxEnd = 4;  // only 2 departure minutes remain
  Solution tight = solve_nepp(f1, SearchObjective::Maxflow, 10, o);
  CHECK(tight.objectiveValue == 4);
  auto oracle = brute_force_optimum(f1, EvacMode::Simultaneous, SearchObjective::Maxflow, 10);
  CHECK(tight.objectiveValue == *oracle);
}

TEST_CASE("restricted rate sets never improve the objective") {
  SolveOptions o = quiet_opts();
  SolveOptions r = o;
  r.rateSet = std::vector<int>{2, 6, 10, 15, 20};
  for (int h : {5, 6, 8}) {
    Solution full = solve_nepp(fixtures::f2(), SearchObjective::Maxflow, h, o);
    Solution restricted = solve_nepp(fixtures::f2(), SearchObjective::Maxflow, h, r);
    CHECK(restricted.objectiveValue <= full.objectiveValue);
  }
}

TEST_CASE("sandwich property on generated instances") {
  for (unsigned long long seed = 1; seed <= 10; ++seed) {
    GenParams p;
    p.areas = 3;
    p.maxDemand = 5;
    p.maxCapacity = 2;
    p.treeShape = seed % 2 ? TreeShape::ConvergentForest : TreeShape::RandomPaths;
    Instance inst = generate_instance(p, seed);
    int horizon = 7 + static_cast<int>(seed % 4);
    SolveOptions o = quiet_opts();
    long long npepp = solve_npepp(inst, SearchObjective::Maxflow, horizon, o).objectiveValue;
    long long nepp = solve_nepp(inst, SearchObjective::Maxflow, horizon, o).objectiveValue;
    long long bound = preemptive_max_flow(inst, horizon);
    CHECK(npepp <= nepp);
    CHECK(nepp <= bound);
  }
}

TEST_CASE("solution documents round-trip") {
  Solution s = solve_nepp(fixtures::f2(), SearchObjective::Maxflow, 8, quiet_opts());
  std::string doc = serialize_solution(s);
  Solution back = parse_solution(doc);
  CHECK(serialize_solution(back) == doc);
  CHECK(back.perArea.at("a").flow == s.perArea.at("a").flow);
  CHECK(back.horizon == s.horizon);
}

TEST_CASE("an unevacuable component makes sat infeasible but leaves maxflow defined") {
  Instance cut = fixtures::f2(2.0, 3.0);  // lastdep 0: nobody can depart
  SolveOptions o = quiet_opts();
  Solution sat = solve_nepp(cut, SearchObjective::Sat, 10, o);
  CHECK(sat.status == SolveStatus::Infeasible);
  Solution mf = solve_nepp(cut, SearchObjective::Maxflow, 10, o);
  CHECK(mf.status == SolveStatus::Optimal);
  CHECK(mf.objectiveValue == 0);
  CHECK(mf.perArea.at("a").flow == 0);
  CHECK(mf.perArea.at("a").start == 0);  // canonical unevacuated output
}

TEST_SUITE_END();
