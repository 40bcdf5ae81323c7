#pragma once

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evacsched/domain.hpp"

namespace evacsched {

enum class NodeKind { Evacuation, Transit, Safe };
enum class EvacMode { Simultaneous, Phased };

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Transit;
};

/// Directed road segment. `cutoff` is the minute the arc becomes unavailable;
/// infinity() when the disaster never cuts it.
struct Arc {
  std::string id;
  std::string tail;
  std::string head;
  double travelTime = 0.0;   // minutes, >= 0
  double capacity = 1.0;     // vehicles per minute, > 0
  double cutoff = std::numeric_limits<double>::infinity();

  bool hasCutoff() const { return cutoff != std::numeric_limits<double>::infinity(); }
};

/// One residential area: a demand and exactly one evacuation path (ordered
/// arc ids from the area node to a safe node). minStart/maxEnd are optional
/// operational windows narrowing the start/end domains.
struct EvacArea {
  std::string node;
  int demand = 1;
  std::vector<std::string> path;
  std::optional<int> minStart;
  std::optional<int> maxEnd;
};

struct Instance {
  std::vector<Node> nodes;
  std::vector<Arc> arcs;
  std::vector<EvacArea> areas;
  std::string name;                         // optional metadata
  std::optional<unsigned long long> seed;   // optional metadata

  const Node* find_node(const std::string& id) const;
  const Arc* find_arc(const std::string& id) const;
  int area_index(const std::string& node) const;  // -1 when absent
};

/// Per-area constants derived from its path. Offsets are cumulative per-arc
/// travel times, each rounded up before summation; offsets[path.front()] = 0.
struct PathMetrics {
  std::map<std::string, int> offsets;  // arc id -> minutes from area node to e.tail
  int transitCeil = 0;                 // offset past the last arc
  double pathCapacity = 0.0;           // min arc capacity along the path
  int pathCapacityFloor = 0;
  std::optional<int> lastDep;          // floor(min_e (f_e - tau_head)); nullopt = no cutoff

  int offset_of(const std::string& arcId) const { return offsets.at(arcId); }
};

/// The five decision-variable domains of one area's evacuation task.
/// Consistent assignments satisfy start + dur = end and
/// flow = min(dur * rate, demand).
struct TaskState {
  IntDomain start, dur, end, flow, rate;

  bool assigned() const {
    return start.fixed() && dur.fixed() && end.fixed() && flow.fixed() && rate.fixed();
  }
  bool failed() const {
    return start.empty() || dur.empty() || end.empty() || flow.empty() || rate.empty();
  }
};

class ParseError : public std::runtime_error {
public:
  enum class Kind { Syntax, Semantic };
  ParseError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

/// Parses and fully validates an instance document (schema in README /
/// serialize_instance). Throws ParseError naming the offending entity.
Instance parse_instance(const std::string& text);

/// Structural validation only (invariants of all domain types); throws
/// ParseError on the first violation.
void validate_instance(const Instance& instance);

std::string serialize_instance(const Instance& instance);

PathMetrics path_metrics(const EvacArea& area, const Instance& instance);

/// Start lower bound and end upper bound for an area at the given horizon:
/// [max(0, minStart), min(horizon - transitCeil, lastDep, maxEnd)].
struct FeasibleWindow {
  int startLb = 0;
  int endUb = -1;
};
FeasibleWindow feasible_window(const EvacArea& area, const PathMetrics& metrics, int horizon);

/// Initializes the task domains. `unevacuable` (when given) is set when the
/// area cannot send a single vehicle (degenerate window or empty rate set);
/// the task is then fixed to flow 0, dur 0 instead of failing.
TaskState init_task_domains(const EvacArea& area, const PathMetrics& metrics, int horizon,
                            EvacMode mode, const std::optional<std::vector<int>>& rateSet = {},
                            bool* unevacuable = nullptr);

/// Horizon sufficient to evacuate all areas one after another at rate 1:
/// max_k transitCeil_k + sum_k demand_k. Used to relax CT model domains.
int clearance_horizon_ub(const Instance& instance);

long long total_demand(const Instance& instance);

}  // namespace evacsched
