#include "doctest.h"

#include <cmath>

#include "evacsched/model.hpp"
#include "evacsched/validate.hpp"
#include "fixtures.hpp"

using namespace evacsched;

TEST_SUITE_BEGIN("model");

TEST_CASE("parse round-trips a well-formed document") {
  Instance f1 = fixtures::f1();
  std::string doc = serialize_instance(f1);
  Instance parsed = parse_instance(doc);
  CHECK(parsed.areas.size() == 1);
  CHECK(parsed.areas[0].demand == 6);
  CHECK(parsed.arcs[0].travelTime == 2.0);
  CHECK_FALSE(parsed.arcs[0].hasCutoff());
  CHECK(serialize_instance(parsed) == doc);
}

TEST_CASE("semantic errors name the offending entity") {
  Instance bad = fixtures::f1();
  bad.nodes[1].kind = NodeKind::Transit;  // path now ends at a transit node
  CHECK_THROWS_WITH_AS(parse_instance(serialize_instance(bad)),
                       doctest::Contains("path must end at safe node"), ParseError);

  Instance zeroCap = fixtures::f1();
  zeroCap.arcs[0].capacity = 0.0;
  CHECK_THROWS_WITH_AS(parse_instance(serialize_instance(zeroCap)), doctest::Contains("e1"),
                       ParseError);

  Instance dangling = fixtures::f1();
  dangling.areas[0].path = {"missing"};
  CHECK_THROWS_WITH_AS(parse_instance(serialize_instance(dangling)), doctest::Contains("missing"),
                       ParseError);

  CHECK_THROWS_AS(parse_instance("{not json"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_instance(R"({"nodes":[],"arcs":[],"areas":[],"extra":1})"),
      doctest::Contains("unknown field"), ParseError);
}

TEST_CASE("path metrics on the fixtures") {
  Instance f1 = fixtures::f1();
  PathMetrics m1 = path_metrics(f1.areas[0], f1);
  CHECK(m1.offsets.at("e1") == 0);
  CHECK(m1.transitCeil == 2);
  CHECK(m1.pathCapacity == 2.0);
  CHECK(m1.pathCapacityFloor == 2);
  CHECK_FALSE(m1.lastDep.has_value());

  Instance f2 = fixtures::f2();
  PathMetrics ma = path_metrics(f2.areas[0], f2);
  CHECK(ma.offsets.at("ea") == 0);
  CHECK(ma.offsets.at("s") == 1);
  CHECK(ma.transitCeil == 3);
  CHECK(ma.pathCapacity == 2.0);
  PathMetrics mb = path_metrics(f2.areas[1], f2);
  CHECK(mb.offsets.at("s") == 2);
  CHECK(mb.transitCeil == 4);
}

TEST_CASE("lastDep matches departure-minute enumeration") {
  Instance f2 = fixtures::f2(2.0, /*cutoff on s*/ 5.0);
  PathMetrics ma = path_metrics(f2.areas[0], f2);
  REQUIRE(ma.lastDep.has_value());
  CHECK(*ma.lastDep == 2);  // floor(5 - tau_{a, s.head}) = 5 - 3

  // Every departure minute t <= lastDep clears each arc before its cutoff;
  // t = lastDep + 1 violates some arc.
  auto feasible = [&](const EvacArea& area, const PathMetrics& m, int t) {
    for (const auto& arcId : area.path) {
      const Arc* arc = f2.find_arc(arcId);
      int tauHead = m.offset_of(arcId) + static_cast<int>(std::ceil(arc->travelTime));
      if (arc->hasCutoff() && t + tauHead > arc->cutoff) return false;
    }
    return true;
  };
  for (int t = 0; t <= *ma.lastDep; ++t) CHECK(feasible(f2.areas[0], ma, t));
  CHECK_FALSE(feasible(f2.areas[0], ma, *ma.lastDep + 1));
}

TEST_CASE("task domain initialization") {
  Instance f1 = fixtures::f1();
  PathMetrics m = path_metrics(f1.areas[0], f1);

  TaskState t = init_task_domains(f1.areas[0], m, 10, EvacMode::Simultaneous);
  CHECK(t.flow.lb() == 0);
  CHECK(t.flow.ub() == 6);
  CHECK(t.rate.lb() == 1);
  CHECK(t.rate.ub() == 2);
  CHECK(t.start.lb() == 0);
  CHECK(t.start.ub() == 8);
  CHECK(t.end.ub() == 8);
  CHECK(t.dur.ub() == 6);

  SUBCASE("restricted rate set intersects the rate domain") {
    TaskState r = init_task_domains(f1.areas[0], m, 10, EvacMode::Simultaneous,
                                    std::vector<int>{2, 6, 10, 15, 20});
    CHECK(r.rate.fixed());
    CHECK(r.rate.value() == 2);
  }
  SUBCASE("degenerate horizon fixes the area unevacuated") {
    bool unevac = false;
    TaskState d = init_task_domains(f1.areas[0], m, 1, EvacMode::Simultaneous, {}, &unevac);
    CHECK(unevac);
    CHECK(d.flow.value() == 0);
    CHECK(d.dur.value() == 0);
  }
  SUBCASE("phased mode pins the rate to its maximum") {
    TaskState p = init_task_domains(f1.areas[0], m, 10, EvacMode::Phased);
    CHECK(p.rate.fixed());
    CHECK(p.rate.value() == 2);
  }
}

TEST_CASE("clearance horizon upper bound") {
  CHECK(clearance_horizon_ub(fixtures::f1()) == 8);    // 2 + 6
  CHECK(clearance_horizon_ub(fixtures::f2()) == 12);   // 4 + 8
  Instance cut = fixtures::f2(2.0, 3.0);               // full evacuation impossible
  CHECK(clearance_horizon_ub(cut) == 12);              // bound is structural
}

TEST_CASE("offsets accumulate per-arc ceilings on generated instances") {
  for (unsigned long long seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
    GenParams p;
    p.areas = 4;
    p.treeShape = seed % 2 ? TreeShape::ConvergentForest : TreeShape::RandomPaths;
    Instance inst = generate_instance(p, seed);
    for (const auto& area : inst.areas) {
      PathMetrics m = path_metrics(area, inst);
      int expect = 0;
      for (const auto& arcId : area.path) {
        CHECK(m.offset_of(arcId) == expect);
        expect += static_cast<int>(std::ceil(inst.find_arc(arcId)->travelTime));
      }
      CHECK(m.transitCeil == expect);
    }
  }
}

TEST_CASE("domain soundness: any in-domain end keeps the last arrival inside the horizon") {
  Instance f2 = fixtures::f2();
  int horizon = 9;
  for (const auto& area : f2.areas) {
    PathMetrics m = path_metrics(area, f2);
    TaskState t = init_task_domains(area, m, horizon, EvacMode::Simultaneous);
    for (int end = 1; end <= t.end.ub(); ++end)
      CHECK(end - 1 + m.transitCeil < horizon);
  }
}

TEST_SUITE_END();
