#include "evacsched/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace evacsched {

TimeExpandedNet build_time_expanded_net(const Instance& instance, const Component& component,
                                        int horizon) {
  TimeExpandedNet net;
  std::vector<std::string> domEdges = component.dominatingEdges;
  if (domEdges.empty()) domEdges = dominating_edges(component, instance, EvacMode::Simultaneous);

  net.source = net.nodeCount++;
  net.sink = net.nodeCount++;

  // (edge, minute) capacity nodes, split in/out.
  std::map<std::pair<std::string, int>, std::pair<int, int>> slot;
  auto slot_of = [&](const std::string& arcId, int minute, long long cap) {
    auto it = slot.find({arcId, minute});
    if (it == slot.end()) {
      int in = net.nodeCount++;
      int out = net.nodeCount++;
      net.arcs.push_back({in, out, cap});
      it = slot.emplace(std::make_pair(arcId, minute), std::make_pair(in, out)).first;
    }
    return it->second;
  };

  for (int ai : component.areas) {
    const EvacArea& area = instance.areas[ai];
    PathMetrics m = path_metrics(area, instance);
    FeasibleWindow w = feasible_window(area, m, horizon);
    if (w.endUb < 1) continue;  // no feasible departure minute

    int areaNode = net.nodeCount++;
    net.arcs.push_back({net.source, areaNode, area.demand});

    std::vector<std::pair<std::string, int>> hops;  // dominating edges on the path, with offsets
    for (const auto& arcId : area.path)
      if (std::find(domEdges.begin(), domEdges.end(), arcId) != domEdges.end())
        hops.emplace_back(arcId, m.offset_of(arcId));

    const long long inf = std::numeric_limits<long long>::max() / 4;
    for (int t = w.startLb; t <= w.endUb - 1; ++t) {
      int prev = areaNode;
      for (const auto& [arcId, off] : hops) {
        long long cap = static_cast<long long>(std::floor(instance.find_arc(arcId)->capacity));
        auto [in, out] = slot_of(arcId, t + off, cap);
        net.arcs.push_back({prev, in, inf});
        prev = out;
      }
      net.arcs.push_back({prev, net.sink, inf});
    }
  }
  return net;
}

namespace {

// Dinic on an adjacency-list residual graph.
class Dinic {
public:
  explicit Dinic(const TimeExpandedNet& net) : n_(net.nodeCount), head_(net.nodeCount, -1) {
    for (const auto& a : net.arcs) add_edge(a.from, a.to, a.cap);
  }

  long long run(int s, int t) {
    long long flow = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      long long f;
      while ((f = dfs(s, t, std::numeric_limits<long long>::max())) > 0) flow += f;
    }
    return flow;
  }

private:
  struct Edge {
    int to, next;
    long long cap;
  };

  void add_edge(int u, int v, long long cap) {
    edges_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[v], 0});
    head_[v] = static_cast<int>(edges_.size()) - 1;
  }

  bool bfs(int s, int t) {
    level_.assign(n_, -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e = head_[u]; e >= 0; e = edges_[e].next) {
        if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[u] + 1;
          q.push(edges_[e].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  long long dfs(int u, int t, long long limit) {
    if (u == t) return limit;
    for (int& e = iter_[u]; e >= 0; e = edges_[e].next) {
      Edge& ed = edges_[e];
      if (ed.cap <= 0 || level_[ed.to] != level_[u] + 1) continue;
      long long got = dfs(ed.to, t, std::min(limit, ed.cap));
      if (got > 0) {
        ed.cap -= got;
        edges_[e ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  int n_;
  std::vector<int> head_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace

long long max_flow(const TimeExpandedNet& net) {
  if (net.nodeCount == 0) return 0;
  return Dinic(net).run(net.source, net.sink);
}

long long preemptive_max_flow(const Instance& instance, int horizon,
                              std::vector<ComponentBound>* perComponent) {
  ComponentPartition parts = partition_with_dominance(instance, EvacMode::Simultaneous);
  long long total = 0;
  for (const auto& comp : parts.components) {
    TimeExpandedNet net = build_time_expanded_net(instance, comp, horizon);
    long long b = max_flow(net);
    total += b;
    if (perComponent) {
      ComponentBound cb;
      for (int ai : comp.areas) cb.areas.push_back(instance.areas[ai].node);
      cb.bound = b;
      perComponent->push_back(std::move(cb));
    }
  }
  return total;
}

std::optional<int> preemptive_clearance_lb(const Instance& instance) {
  int hub = clearance_horizon_ub(instance);
  ComponentPartition parts = partition_with_dominance(instance, EvacMode::Simultaneous);

  int overall = 0;
  for (const auto& comp : parts.components) {
    long long want = 0;
    int maxTransit = 0;
    for (int ai : comp.areas) {
      want += instance.areas[ai].demand;
      maxTransit = std::max(maxTransit, path_metrics(instance.areas[ai], instance).transitCeil);
    }
    auto full_at = [&](int h) {
      TimeExpandedNet net = build_time_expanded_net(instance, comp, h);
      return max_flow(net) >= want;
    };
    if (!full_at(hub)) return std::nullopt;
    int lo = maxTransit + 1, hi = hub;
    while (lo < hi) {
      int mid = lo + (hi - lo) / 2;
      if (full_at(mid)) hi = mid;
      else lo = mid + 1;
    }
    overall = std::max(overall, lo);
  }
  return overall;
}

}  // namespace evacsched
