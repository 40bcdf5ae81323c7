#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evacsched/decompose.hpp"
#include "evacsched/model.hpp"

namespace evacsched {

/// Integer-capacitated flow network over (edge, minute) pairs. Every vehicle
/// departing area k at minute t consumes one unit of each dominating edge's
/// per-minute capacity at the shifted minutes along k's path; any integral
/// source-sink flow is a preemptive schedule respecting capacities, cutoffs,
/// and the horizon.
struct TimeExpandedNet {
  struct NetArc {
    int from, to;
    long long cap;
  };
  int nodeCount = 0;
  int source = 0;
  int sink = 0;
  std::vector<NetArc> arcs;
};

TimeExpandedNet build_time_expanded_net(const Instance& instance, const Component& component,
                                        int horizon);

/// Exact max flow on integral capacities (Dinic).
long long max_flow(const TimeExpandedNet& net);

struct ComponentBound {
  std::vector<std::string> areas;
  long long bound = 0;
};

/// Maximum number of vehicles reaching safety by `horizon` when preemption
/// and time-varying rates are allowed; an upper bound on both NEPP-MF and
/// NPEPP-MF. Decomposed per component and summed.
long long preemptive_max_flow(const Instance& instance, int horizon,
                              std::vector<ComponentBound>* perComponent = nullptr);

/// Smallest horizon at which the preemptive relaxation evacuates everyone
/// (binary search per component, overall maximum); nullopt when full
/// evacuation is impossible even at clearance_horizon_ub.
std::optional<int> preemptive_clearance_lb(const Instance& instance);

}  // namespace evacsched
