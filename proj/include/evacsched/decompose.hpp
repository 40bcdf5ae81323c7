#pragma once

#include <map>
#include <string>
#include <vector>

#include "evacsched/model.hpp"

namespace evacsched {

/// One independent group of areas: no path in it shares an arc (directly or
/// through a chain of arc-sharing paths) with a path outside it.
struct Component {
  std::vector<int> areas;                              // indices into instance.areas, ascending
  std::vector<std::string> edges;                      // arc ids used by the group's paths, sorted
  std::vector<std::string> dominatingEdges;            // filled by dominating_edges for one mode
  std::map<std::string, std::vector<int>> areasPerEdge;  // E(e): area indices per arc
};

struct ComponentPartition {
  std::vector<Component> components;  // ordered by smallest contained area index
};

/// True iff the two paths share at least one arc. Reflexive by definition.
bool direct_dependency(const EvacArea& p, const EvacArea& q);

/// Connected components of the undirected graph formed by all path arcs and
/// their endpoints; areas grouped by the component containing their path.
ComponentPartition partition_components(const Instance& instance);

/// Subset D of the component's edges such that every edge outside D is
/// dominated by an edge of D: E(e') subseteq E(e), u_e <= u_e' (simultaneous
/// mode only), and the e->e' offset difference is identical for all areas of
/// E(e'). Mutual domination is broken toward the edge farther from the areas
/// (closer to the safe node), then by lexicographic arc id.
std::vector<std::string> dominating_edges(const Component& component, const Instance& instance,
                                          EvacMode mode);

/// partition_components plus per-component dominatingEdges for `mode`.
ComponentPartition partition_with_dominance(const Instance& instance, EvacMode mode);

}  // namespace evacsched
