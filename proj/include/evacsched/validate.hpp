#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evacsched/model.hpp"
#include "evacsched/solvers.hpp"

namespace evacsched {

enum class ViolationKind { EdgeCapacity, Disjointness, Cutoff, Horizon, DemandExceeded, Preemption };

std::string violation_kind_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string entity;  // edge or area id
  int minute = -1;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::map<std::pair<std::string, int>, int> occupancy;  // (edge, minute) -> summed rates
  std::map<std::string, long long> evacueesBySafeNode;
  int clearanceTime = 0;  // max over flow>0 areas of end + transitCeil
};

/// Minute-by-minute replay of a schedule against the instance, written
/// independently of the engine's profile code: checks capacities on every
/// edge (dominating or not), pairwise exclusivity in phased mode, cutoffs,
/// the horizon, flow consistency, and non-preemption.
ValidationReport simulate(const std::map<std::string, AreaSolution>& perArea,
                          const Instance& instance, EvacMode mode, int horizon);

ValidationReport simulate(const Solution& solution, const Instance& instance);

class SpaceTooLarge : public std::runtime_error {
public:
  explicit SpaceTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

/// Exhaustive oracle over the model's initialized domains, filtered through
/// simulate. Returns the optimal objective value; nullopt when sat/clearance
/// is infeasible. Throws SpaceTooLarge above `spaceCap` candidate schedules.
std::optional<long long> brute_force_optimum(const Instance& instance, EvacMode mode,
                                             SearchObjective objective, int horizon,
                                             const std::optional<std::vector<int>>& rateSet = {},
                                             long long spaceCap = 10'000'000);

enum class TreeShape { ConvergentForest, RandomPaths };

struct GenParams {
  int areas = 3;
  int maxDemand = 6;
  int maxCapacity = 3;
  int maxTravel = 3;
  TreeShape treeShape = TreeShape::ConvergentForest;
  double cutoffProbability = 0.0;
  int arcTarget = 0;  // 0 = free; otherwise the generator packs exactly this many arcs
};

/// Deterministic per (params, seed). ConvergentForest builds trees rooted at
/// safe nodes with areas at the leaves; RandomPaths may produce
/// non-convergent arc sharing. Output always passes parse_instance.
Instance generate_instance(const GenParams& params, unsigned long long seed);

}  // namespace evacsched
