#include "evacsched/decompose.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace evacsched {

bool direct_dependency(const EvacArea& p, const EvacArea& q) {
  std::set<std::string> arcs(p.path.begin(), p.path.end());
  for (const auto& a : q.path)
    if (arcs.count(a)) return true;
  return false;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ComponentPartition partition_components(const Instance& instance) {
  std::unordered_map<std::string, int> nodeIdx;
  for (const auto& n : instance.nodes) nodeIdx.emplace(n.id, static_cast<int>(nodeIdx.size()));
  UnionFind uf(instance.nodes.size());

  std::set<std::string> pathArcs;
  for (const auto& k : instance.areas)
    for (const auto& arcId : k.path) pathArcs.insert(arcId);
  for (const auto& arcId : pathArcs) {
    const Arc* a = instance.find_arc(arcId);
    uf.unite(nodeIdx.at(a->tail), nodeIdx.at(a->head));
  }

  // Group areas by the root of their area node; order components by their
  // smallest area index for reproducible output.
  std::map<int, Component> byRoot;
  for (size_t i = 0; i < instance.areas.size(); ++i) {
    int root = uf.find(nodeIdx.at(instance.areas[i].node));
    byRoot[root].areas.push_back(static_cast<int>(i));
  }
  std::vector<Component> comps;
  for (auto& [root, c] : byRoot) comps.push_back(std::move(c));
  std::sort(comps.begin(), comps.end(),
            [](const Component& a, const Component& b) { return a.areas.front() < b.areas.front(); });

  for (auto& c : comps) {
    std::set<std::string> edges;
    for (int ai : c.areas)
      for (const auto& arcId : instance.areas[ai].path) {
        edges.insert(arcId);
        c.areasPerEdge[arcId].push_back(ai);
      }
    c.edges.assign(edges.begin(), edges.end());
  }

  ComponentPartition p;
  p.components = std::move(comps);
  return p;
}

namespace {

struct DominanceContext {
  const Component& comp;
  const Instance& inst;
  EvacMode mode;
  std::map<int, PathMetrics> metrics;  // per area index

  int offset(int area, const std::string& arc) const { return metrics.at(area).offset_of(arc); }

  // e dominates e' per the definition; offsets are the rounded integers used
  // by the scheduling model.
  bool dominates(const std::string& e, const std::string& ePrime) const {
    if (e == ePrime) return false;
    const auto& usersPrime = comp.areasPerEdge.at(ePrime);
    const auto& users = comp.areasPerEdge.at(e);
    if (!std::includes(users.begin(), users.end(), usersPrime.begin(), usersPrime.end()))
      return false;
    if (mode == EvacMode::Simultaneous) {
      if (inst.find_arc(e)->capacity > inst.find_arc(ePrime)->capacity) return false;
    }
    bool first = true;
    int delta = 0;
    for (int k : usersPrime) {
      int d = offset(k, ePrime) - offset(k, e);
      if (first) { delta = d; first = false; }
      else if (d != delta) return false;
    }
    return true;
  }

  // Tie-break for mutually dominating edges: keep the edge with the larger
  // offset from its areas, then the smaller arc id.
  bool preferred(const std::string& e, const std::string& ePrime) const {
    int k = comp.areasPerEdge.at(ePrime).front();
    int diff = offset(k, e) - offset(k, ePrime);
    if (diff != 0) return diff > 0;
    return e < ePrime;
  }

  bool strictly_dominated(const std::string& ePrime) const {
    for (const auto& e : comp.edges) {
      if (e == ePrime) continue;
      if (!dominates(e, ePrime)) continue;
      if (dominates(ePrime, e) && !preferred(e, ePrime)) continue;
      return true;
    }
    return false;
  }
};

}  // namespace

std::vector<std::string> dominating_edges(const Component& component, const Instance& instance,
                                          EvacMode mode) {
  DominanceContext ctx{component, instance, mode, {}};
  for (int ai : component.areas)
    ctx.metrics.emplace(ai, path_metrics(instance.areas[ai], instance));

  std::vector<std::string> kept;
  for (const auto& e : component.edges)
    if (!ctx.strictly_dominated(e)) kept.push_back(e);
  return kept;
}

ComponentPartition partition_with_dominance(const Instance& instance, EvacMode mode) {
  ComponentPartition p = partition_components(instance);
  for (auto& c : p.components) c.dominatingEdges = dominating_edges(c, instance, mode);
  return p;
}

}  // namespace evacsched
