#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "evacsched/model.hpp"

namespace evacsched {

/// View of a task shifted onto one edge of its path: shifted start/end are
/// the base domains plus the travel-time offset; duration and rate are
/// shared. Mutations through the view land on the base task.
struct ShiftedTask {
  TaskState* base = nullptr;
  int areaIdx = -1;
  std::string edgeId;
  int offset = 0;

  int startLb() const { return base->start.lb() + offset; }
  int startUb() const { return base->start.ub() + offset; }
  int endLb() const { return base->end.lb() + offset; }
  int endUb() const { return base->end.ub() + offset; }
  int rateLb() const { return base->rate.lb(); }
  int durLb() const { return base->dur.lb(); }

  bool tighten_start_min(int shifted) { return base->start.tighten_min(shifted - offset); }
  bool tighten_end_max(int shifted) { return base->end.tighten_max(shifted - offset); }
};

ShiftedTask edge_view(TaskState& task, const EvacArea& area, const std::string& edge,
                      const PathMetrics& metrics, int areaIdx = -1);

/// Mandatory-usage profile of one edge, compiled from the compulsory parts of
/// its shifted tasks: sorted (minute, height delta) events whose running sum
/// is the usage every consistent assignment must incur.
struct TimetableProfile {
  std::string edgeId;
  std::vector<std::pair<int, int>> events;

  int max_usage() const;
  int usage_at(int minute) const;
};

TimetableProfile build_profile(const std::vector<ShiftedTask>& tasks, bool disjunctive);

enum class CapacityMode { Cumulative, Disjunctive };

/// Checks the compulsory-part profile against the edge capacity and performs
/// timetable filtering (start lb / end ub of tasks that cannot overlap the
/// saturated region at their minimum height). Disjunctive mode treats every
/// task as height 1 against capacity 1. Returns false on inconsistency;
/// pruned domains are visible through the views.
bool timetable_consistent(std::vector<ShiftedTask>& tasks, double capacity, CapacityMode mode);

// ---------------------------------------------------------------------------
// Branch-and-bound over one component model.

enum class Strategy { S1A2A, S1A2B, S1B2A, S1B2B, PhasedMF, CTLabel };

std::optional<Strategy> strategy_from_string(const std::string& s);
std::string strategy_name(Strategy s);

enum class SearchObjective { Maxflow, Sat, Clearance };

struct AreaTask {
  int areaIdx = -1;
  std::string areaId;
  int demand = 0;
  int transitCeil = 0;
  TaskState init;
  bool unevacuable = false;
};

struct EdgeConstraint {
  std::string arcId;
  double capacity = 0.0;
  std::vector<std::pair<int, int>> taskOffsets;  // (task index, shift)
};

struct ComponentModel {
  std::vector<AreaTask> tasks;
  std::vector<EdgeConstraint> edges;  // dominating edges (or all, when auditing)
  CapacityMode capacityMode = CapacityMode::Cumulative;
  SearchObjective objective = SearchObjective::Maxflow;
  std::optional<long long> objectiveBound;  // maxflow upper bound; enables early optimality
};

struct Budget {
  double timeLimitSeconds = 1e18;
  std::optional<long long> nodeLimit;
};

struct AreaAssignment {
  int start = 0, dur = 0, end = 0, rate = 0, flow = 0;
};

enum class SearchStatus { Optimal, FeasibleTimeout, Infeasible, UnknownTimeout };

std::string search_status_name(SearchStatus s);

struct SearchStats {
  long long nodes = 0;
  long long backtracks = 0;  // right-branch (refutation) applications
  int restarts = 0;
  double elapsedSeconds = 0.0;
  double bestFoundAt = 0.0;                   // seconds to the final incumbent
  std::vector<double> restartBacktrackLimits;  // limit active during each pass
};

struct SearchState {
  std::vector<TaskState> tasks;
  int currentTask = -1;  // task being labeled; selection is sticky until assigned
};

struct Decision {
  int taskIdx = -1;
  enum class Var { Rate, Start, Flow, Dur, End } var = Var::Rate;
  enum class Kind { Assign, SplitGeq } kind = Kind::Assign;
  int value = 0;
  bool valueIsMin = true;  // Assign only: which extreme the value was taken from
};

/// Selects the next branching decision per the configured strategy.
/// Pre: at least one task has a non-singleton domain.
Decision strategy_decide(const SearchState& state, const ComponentModel& model, Strategy strategy,
                         std::mt19937_64& rng);

struct SearchResult {
  std::optional<std::vector<AreaAssignment>> bestSchedule;
  long long bestObjective = 0;  // maxflow/sat: vehicles; clearance: minutes
  SearchStatus status = SearchStatus::Infeasible;
  SearchStats stats;
};

struct DecisionRecord {
  int taskIdx;
  Decision::Var var;
  Decision::Kind kind;
  int value;
  bool left;  // decision vs refutation branch
};

/// Depth-first branch and bound: after every decision, runs the fixpoint of
/// timetable consistency over all edges plus arithmetic propagation of
/// start + dur = end and flow = min(dur * rate, demand); bounds the objective
/// against the incumbent. Strategy 1A wraps the search in geometric restarts
/// (first limit = 2 x decision variables backtracks, growth 1.5).
SearchResult branch_and_bound(const ComponentModel& model, Strategy strategy, const Budget& budget,
                              unsigned long long seed,
                              std::vector<DecisionRecord>* trace = nullptr);

}  // namespace evacsched
