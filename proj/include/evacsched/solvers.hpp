#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evacsched/bounds.hpp"
#include "evacsched/decompose.hpp"
#include "evacsched/engine.hpp"
#include "evacsched/model.hpp"

namespace evacsched {

struct AreaSolution {
  int start = 0, dur = 0, end = 0, rate = 0, flow = 0;
};

enum class SolveStatus { Optimal, FeasibleTimeout, UnknownTimeout, Infeasible };

std::string solve_status_name(SolveStatus s);
std::optional<SolveStatus> solve_status_from_string(const std::string& s);

struct ComponentReport {
  std::vector<std::string> areas;
  long long objective = 0;
  SolveStatus status = SolveStatus::Infeasible;
  std::string search;  // strategy that produced the kept result
  SearchStats stats;
};

struct Solution {
  EvacMode mode = EvacMode::Simultaneous;
  SearchObjective objectiveKind = SearchObjective::Maxflow;
  long long objectiveValue = 0;
  std::optional<long long> bound;  // preemptive bound (maxflow/sat: upper; clearance: lower)
  SolveStatus status = SolveStatus::Infeasible;
  std::string search;  // configured strategy; per-component winners in perComponent
  int horizon = 0;     // effective horizon (clearance uses clearance_horizon_ub)
  long long totalDemand = 0;
  std::map<std::string, AreaSolution> perArea;  // empty when no full schedule exists
  std::vector<ComponentReport> perComponent;
  SearchStats stats;  // summed counters; bestFoundAt = latest across components
};

struct SolveOptions {
  double timeLimitSeconds = 60.0;  // per strongly connected component
  std::optional<long long> nodeLimit;
  std::string strategy = "auto";  // 1A2A | 1A2B | 1B2A | 1B2B | auto (simultaneous mode only)
  std::optional<std::vector<int>> rateSet;
  unsigned long long seed = 1;
  bool satFirst = true;            // try the SAT model before maximizing flow
  double satFraction = 1.0 / 30.0;  // share of the budget granted to the SAT attempt
  bool usePreemptiveBound = true;  // bound pruning / early optimality via the relaxation
  bool useAllEdges = false;        // post constraints on every edge, not just dominating
  bool decompose = true;           // solve per component (off: one model for everything)
  bool greedyFastPath = true;      // polynomial phased maxflow on convergent components
  bool ctBinarySearch = false;     // clearance via outer binary search over SAT
  bool parallelComponents = true;
};

/// Simultaneous evacuation: cumulative edge constraints.
Solution solve_nepp(const Instance& instance, SearchObjective objective, int horizon,
                    const SolveOptions& opts = {});

/// Phased evacuation: disjunctive edge constraints, rates fixed to their
/// upper bounds; maxflow dispatches to the polynomial greedy when the
/// convergence precondition holds.
Solution solve_npepp(const Instance& instance, SearchObjective objective, int horizon,
                     const SolveOptions& opts = {});

/// True when the component's paths pairwise share an arc and coincide from
/// the first shared arc onward, every area can evacuate, and all areas share
/// the same latest completion time at the safe node.
bool theorem3_precondition(const Component& component, const Instance& instance, int horizon,
                           const std::optional<std::vector<int>>& rateSet = {});

/// Optimal phased maxflow schedule for a convergent component: a largest-
/// actual-rate preemptive sweep over the dominating edge, then conversion to
/// a non-preemptive schedule by postponing interrupting tasks. Caller must
/// check theorem3_precondition.
std::map<std::string, AreaSolution> phased_greedy_convergent(
    const Component& component, const Instance& instance, int horizon,
    const std::optional<std::vector<int>>& rateSet = {});

// Solution documents (schema documented in the README).
std::string serialize_solution(const Solution& solution);
Solution parse_solution(const std::string& text);

}  // namespace evacsched
