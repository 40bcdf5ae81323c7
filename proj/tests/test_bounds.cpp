#include "doctest.h"

#include "evacsched/bounds.hpp"
#include "evacsched/validate.hpp"
#include "fixtures.hpp"

using namespace evacsched;

TEST_SUITE_BEGIN("bounds");

TEST_CASE("preemptive max flow on the fixtures") {
  CHECK(preemptive_max_flow(fixtures::f1(), 10) == 6);  // demand limited
  CHECK(preemptive_max_flow(fixtures::f1(), 1) == 0);   // no feasible departure

  // F2 at horizon 6: the shared arc admits minutes {1,2,3} at capacity 2, a
  // hand-enumerable cut of value 6.
  CHECK(preemptive_max_flow(fixtures::f2(), 6) == 6);
  CHECK(preemptive_max_flow(fixtures::f2(), 7) == 8);
  CHECK(preemptive_max_flow(fixtures::f2(), 8) == 8);
}

TEST_CASE("per-component bounds sum to the total") {
  std::vector<ComponentBound> per;
  long long total = preemptive_max_flow(fixtures::f3(), 12, &per);
  CHECK(total == 5);
  REQUIRE(per.size() == 2);
  CHECK(per[0].bound + per[1].bound == total);
}

TEST_CASE("preemptive clearance lower bound") {
  auto f1 = preemptive_clearance_lb(fixtures::f1());
  REQUIRE(f1.has_value());
  CHECK(*f1 == 5);  // 3 departure minutes at rate 2, plus 2 transit

  // Binary search against the max-flow oracle: F2 is fully evacuable at 7
  // (shared-arc minutes 1-4) and not at 6 (only minutes 1-3 exist).
  auto f2 = preemptive_clearance_lb(fixtures::f2());
  REQUIRE(f2.has_value());
  CHECK(*f2 == 7);
  CHECK(preemptive_max_flow(fixtures::f2(), 7) == 8);
  CHECK(preemptive_max_flow(fixtures::f2(), 6) < 8);

  SUBCASE("single area with demand 1 clears in transit + 1") {
    Instance one = fixtures::f1();
    one.areas[0].demand = 1;
    auto lb = preemptive_clearance_lb(one);
    REQUIRE(lb.has_value());
    CHECK(*lb == 3);
  }
  SUBCASE("a disaster-cut path makes full evacuation impossible") {
    Instance cut = fixtures::f2(2.0, 3.0);  // lastdep on s too early for 8 vehicles
    CHECK_FALSE(preemptive_clearance_lb(cut).has_value());
  }
}

TEST_CASE("private paths: non-preemption is costless, solver meets the bound") {
  // Capacity-limited single chain: 7 departure minutes at rate 1.
  Instance i = fixtures::f3();
  i.areas[0].demand = 9;
  i.arcs[0].capacity = 1.5;
  SolveOptions o;
  o.timeLimitSeconds = 20.0;
  o.strategy = "1B2B";
  o.parallelComponents = false;
  Solution s = solve_nepp(i, SearchObjective::Maxflow, 8, o);
  long long bound = preemptive_max_flow(i, 8);
  CHECK(s.status == SolveStatus::Optimal);
  CHECK(s.objectiveValue == bound);
  CHECK(s.perArea.at("x").flow == 7);
}

TEST_CASE("bound is monotone in the horizon and never exceeds total demand") {
  for (unsigned long long seed = 1; seed <= 15; ++seed) {
    GenParams p;
    p.areas = 3;
    p.treeShape = seed % 2 ? TreeShape::ConvergentForest : TreeShape::RandomPaths;
    p.cutoffProbability = seed % 3 ? 0.0 : 0.4;
    Instance inst = generate_instance(p, seed);
    long long prev = 0;
    for (int h = 1; h <= 14; ++h) {
      long long b = preemptive_max_flow(inst, h);
      CHECK(b >= prev);
      CHECK(b <= total_demand(inst));
      prev = b;
    }
  }
}

TEST_SUITE_END();
