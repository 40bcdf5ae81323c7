#pragma once

#include <limits>

#include "evacsched/model.hpp"

// Hand-built instances used across the suites.
//
// F1: one area (demand 6), single arc a->s with travel 2.0 and capacity 2.0.
// F2: two areas sharing the final arc s (capacity 2):
//       a --ea(1,3)--> j --s(2,2)--> z     demand 4, transit ceil 3
//       b --eb(2,3)--> j --s(2,2)--> z     demand 4, transit ceil 4
// F3: two arc-disjoint chains (demands 2 and 3).
namespace fixtures {

inline evacsched::Instance f1() {
  evacsched::Instance i;
  i.nodes = {{"a", evacsched::NodeKind::Evacuation}, {"s", evacsched::NodeKind::Safe}};
  i.arcs = {{"e1", "a", "s", 2.0, 2.0, std::numeric_limits<double>::infinity()}};
  i.areas.push_back({"a", 6, {"e1"}, {}, {}});
  i.name = "F1";
  return i;
}

inline evacsched::Instance f2(double sharedCapacity = 2.0, double cutoffOnShared =
                                                              std::numeric_limits<double>::infinity()) {
  evacsched::Instance i;
  i.nodes = {{"a", evacsched::NodeKind::Evacuation},
             {"b", evacsched::NodeKind::Evacuation},
             {"j", evacsched::NodeKind::Transit},
             {"z", evacsched::NodeKind::Safe}};
  i.arcs = {{"ea", "a", "j", 1.0, 3.0, std::numeric_limits<double>::infinity()},
            {"eb", "b", "j", 2.0, 3.0, std::numeric_limits<double>::infinity()},
            {"s", "j", "z", 2.0, sharedCapacity, cutoffOnShared}};
  i.areas.push_back({"a", 4, {"ea", "s"}, {}, {}});
  i.areas.push_back({"b", 4, {"eb", "s"}, {}, {}});
  i.name = "F2";
  return i;
}

inline evacsched::Instance f3() {
  evacsched::Instance i;
  i.nodes = {{"x", evacsched::NodeKind::Evacuation},
             {"y", evacsched::NodeKind::Evacuation},
             {"sx", evacsched::NodeKind::Safe},
             {"sy", evacsched::NodeKind::Safe}};
  i.arcs = {{"ex", "x", "sx", 1.0, 1.0, std::numeric_limits<double>::infinity()},
            {"ey", "y", "sy", 2.0, 2.0, std::numeric_limits<double>::infinity()}};
  i.areas.push_back({"x", 2, {"ex"}, {}, {}});
  i.areas.push_back({"y", 3, {"ey"}, {}, {}});
  i.name = "F3";
  return i;
}

// Chain dependence (the paper's Fig. 2b shape): x and y share sh1, y and z
// share ay, x and z share nothing, so all three land in one component.
inline evacsched::Instance chain3() {
  using evacsched::NodeKind;
  evacsched::Instance i;
  i.nodes = {{"x", NodeKind::Evacuation}, {"y", NodeKind::Evacuation},
             {"z", NodeKind::Evacuation}, {"u", NodeKind::Transit},
             {"s1", NodeKind::Safe},      {"s2", NodeKind::Safe}};
  const double inf = std::numeric_limits<double>::infinity();
  i.arcs = {{"ax", "x", "u", 1.0, 2.0, inf}, {"ay", "y", "u", 1.0, 2.0, inf},
            {"az", "z", "y", 1.0, 2.0, inf}, {"sh1", "u", "s1", 1.0, 2.0, inf},
            {"shz", "u", "s2", 1.0, 2.0, inf}};
  i.areas.push_back({"x", 2, {"ax", "sh1"}, {}, {}});
  i.areas.push_back({"y", 2, {"ay", "sh1"}, {}, {}});
  i.areas.push_back({"z", 2, {"az", "ay", "shz"}, {}, {}});
  i.name = "chain3";
  return i;
}

}  // namespace fixtures
