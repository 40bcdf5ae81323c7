#include "evacsched/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace evacsched {

std::string violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::EdgeCapacity: return "edgeCapacity";
    case ViolationKind::Disjointness: return "disjointness";
    case ViolationKind::Cutoff: return "cutoff";
    case ViolationKind::Horizon: return "horizon";
    case ViolationKind::DemandExceeded: return "demandExceeded";
    case ViolationKind::Preemption: return "preemption";
  }
  return "?";
}

ValidationReport simulate(const std::map<std::string, AreaSolution>& perArea,
                          const Instance& instance, EvacMode mode, int horizon) {
  ValidationReport rep;
  auto violate = [&](ViolationKind kind, const std::string& entity, int minute,
                     const std::string& detail) {
    rep.violations.push_back({kind, entity, minute, detail});
  };

  for (const auto& [id, a] : perArea)
    if (instance.area_index(id) < 0)
      violate(ViolationKind::DemandExceeded, id, -1, "schedule references unknown area");

  std::map<std::pair<std::string, int>, std::set<std::string>> owners;  // phased exclusivity

  for (const auto& area : instance.areas) {
    auto it = perArea.find(area.node);
    AreaSolution a = it == perArea.end() ? AreaSolution{} : it->second;
    PathMetrics m = path_metrics(area, instance);

    if (a.end != a.start + a.dur)
      violate(ViolationKind::Preemption, area.node, a.start,
              "end != start + dur: not a single contiguous departure interval");
    if (a.start < 0 || a.dur < 0 || a.rate < 0 || a.flow < 0)
      violate(ViolationKind::Horizon, area.node, a.start, "negative schedule field");

    long long expect = std::min<long long>(1LL * a.dur * a.rate, area.demand);
    if (a.flow != expect)
      violate(ViolationKind::DemandExceeded, area.node, a.start,
              "flow " + std::to_string(a.flow) + " != min(dur*rate, demand) = " +
                  std::to_string(expect));

    if (a.flow <= 0 || a.dur <= 0) continue;

    if (a.end + m.transitCeil > horizon)
      violate(ViolationKind::Horizon, area.node, a.end - 1 + m.transitCeil,
              "last batch reaches safety after the horizon");

    for (const auto& arcId : area.path) {
      const Arc* arc = instance.find_arc(arcId);
      int tauHead = m.offset_of(arcId) + static_cast<int>(std::ceil(arc->travelTime));
      if (arc->hasCutoff() && a.end - 1 + tauHead > arc->cutoff)
        violate(ViolationKind::Cutoff, arcId, a.end - 1,
                "area " + area.node + " departs after the arc's last feasible minute");
      int off = m.offset_of(arcId);
      for (int t = a.start + off; t < a.end + off; ++t) {
        rep.occupancy[{arcId, t}] += a.rate;
        if (mode == EvacMode::Phased) owners[{arcId, t}].insert(area.node);
      }
    }

    const Arc* lastArc = instance.find_arc(area.path.back());
    rep.evacueesBySafeNode[lastArc->head] += a.flow;
    rep.clearanceTime = std::max(rep.clearanceTime, a.end + m.transitCeil);
  }

  for (const auto& [key, usage] : rep.occupancy) {
    const Arc* arc = instance.find_arc(key.first);
    if (static_cast<double>(usage) > arc->capacity)
      violate(ViolationKind::EdgeCapacity, key.first, key.second,
              "usage " + std::to_string(usage) + " exceeds capacity");
  }
  if (mode == EvacMode::Phased)
    for (const auto& [key, who] : owners)
      if (who.size() > 1)
        violate(ViolationKind::Disjointness, key.first, key.second,
                std::to_string(who.size()) + " areas share the edge minute");

  rep.ok = rep.violations.empty();
  return rep;
}

ValidationReport simulate(const Solution& solution, const Instance& instance) {
  return simulate(solution.perArea, instance, solution.mode, solution.horizon);
}

// ---------------------------------------------------------------------------
// Exhaustive oracle.

namespace {

struct Candidate {
  AreaSolution a;
};

// All per-area assignments drawn from the section-3.1 domains; each one is
// pre-filtered through the simulator on its own.
std::vector<Candidate> area_candidates(const Instance& instance, const EvacArea& area,
                                       EvacMode mode, int horizon,
                                       const std::optional<std::vector<int>>& rateSet,
                                       bool requireFull) {
  std::vector<Candidate> cands;
  if (!requireFull) cands.push_back({AreaSolution{}});  // not evacuated

  PathMetrics m = path_metrics(area, instance);
  FeasibleWindow w = feasible_window(area, m, horizon);
  if (w.endUb < 1) return cands;

  IntDomain rateDom(1, std::min(area.demand, m.pathCapacityFloor));
  if (rateSet) rateDom.intersect_values(*rateSet);
  if (rateDom.empty()) return cands;
  std::vector<int> rates;
  for (int r = rateDom.lb(); r <= rateDom.ub(); ++r)
    if (rateDom.contains(r)) rates.push_back(r);
  if (mode == EvacMode::Phased) rates = {rates.back()};  // rate pinned to its maximum

  for (int r : rates) {
    int maxDur = (area.demand + r - 1) / r;  // longer durations add nothing
    for (int dur = 1; dur <= maxDur; ++dur) {
      int flow = static_cast<int>(std::min<long long>(1LL * dur * r, area.demand));
      if (requireFull && flow != area.demand) continue;
      for (int start = w.startLb; start + dur <= w.endUb; ++start) {
        Candidate c;
        c.a = {start, dur, start + dur, r, flow};
        std::map<std::string, AreaSolution> single{{area.node, c.a}};
        if (simulate(single, instance, mode, horizon).ok) cands.push_back(c);
      }
    }
  }
  return cands;
}

}  // namespace

std::optional<long long> brute_force_optimum(const Instance& instance, EvacMode mode,
                                             SearchObjective objective, int horizon,
                                             const std::optional<std::vector<int>>& rateSet,
                                             long long spaceCap) {
  if (objective == SearchObjective::Clearance) horizon = clearance_horizon_ub(instance);
  bool requireFull =
      objective == SearchObjective::Sat || objective == SearchObjective::Clearance;

  size_t n = instance.areas.size();
  std::vector<std::vector<Candidate>> cands;
  long long space = 1;
  for (const auto& area : instance.areas) {
    cands.push_back(area_candidates(instance, area, mode, horizon, rateSet, requireFull));
    if (cands.back().empty()) return std::nullopt;  // full evacuation impossible for this area
    space *= static_cast<long long>(cands.back().size());
    if (space > spaceCap)
      throw SpaceTooLarge("oracle search space " + std::to_string(space) + " exceeds cap " +
                          std::to_string(spaceCap));
  }

  std::vector<PathMetrics> metrics;
  for (const auto& area : instance.areas) metrics.push_back(path_metrics(area, instance));

  // Incremental occupancy mirroring simulate's rule: summed rates per
  // (edge, minute), at most one area per minute in phased mode.
  std::map<std::pair<std::string, int>, int> occupancy;
  std::optional<long long> best;
  bool satDone = false;

  std::function<void(size_t, long long, long long)> rec = [&](size_t i, long long flowSum,
                                                              long long ctMax) {
    if (satDone) return;
    if (i == n) {
      if (objective == SearchObjective::Sat) satDone = true;
      if (objective == SearchObjective::Clearance) {
        if (!best || ctMax < *best) best = ctMax;
      } else {
        if (!best || flowSum > *best) best = flowSum;
      }
      return;
    }
    // Optimistic completion bound.
    if (objective == SearchObjective::Maxflow && best) {
      long long optimistic = flowSum;
      for (size_t j = i; j < n; ++j) optimistic += instance.areas[j].demand;
      if (optimistic <= *best) return;
    }
    if (objective == SearchObjective::Clearance && best && ctMax >= *best) return;

    for (const Candidate& c : cands[i]) {
      const AreaSolution& a = c.a;
      bool feasible = true;
      std::vector<std::pair<std::string, int>> touched;
      if (a.flow > 0) {
        for (const auto& arcId : instance.areas[i].path) {
          int off = metrics[i].offset_of(arcId);
          double cap = instance.find_arc(arcId)->capacity;
          for (int t = a.start + off; t < a.end + off && feasible; ++t) {
            auto key = std::make_pair(arcId, t);
            int& usage = occupancy[key];
            if (mode == EvacMode::Phased && usage > 0) feasible = false;
            else if (static_cast<double>(usage + a.rate) > cap) feasible = false;
            else {
              usage += a.rate;
              touched.push_back(key);
            }
          }
          if (!feasible) break;
        }
      }
      if (feasible) {
        long long ct = ctMax;
        if (a.flow > 0)
          ct = std::max(ct, static_cast<long long>(a.end) + metrics[i].transitCeil);
        rec(i + 1, flowSum + a.flow, ct);
      }
      for (const auto& key : touched) occupancy[key] -= a.rate;
    }
  };
  rec(0, 0, 0);

  if (requireFull && !best) return std::nullopt;
  if (objective == SearchObjective::Sat && best) return total_demand(instance);
  return best;
}

// ---------------------------------------------------------------------------
// Seeded synthetic instances.

namespace {

class Rng {
public:
  explicit Rng(unsigned long long seed) : gen_(seed) {}
  int uniform(int lo, int hi) {  // inclusive; deterministic across platforms
    return lo + static_cast<int>(gen_() % static_cast<unsigned long long>(hi - lo + 1));
  }
  bool chance(double p) { return uniform(0, 999) < static_cast<int>(p * 1000.0); }

private:
  std::mt19937_64 gen_;
};

struct Builder {
  Instance inst;
  int arcCounter = 0;
  int nodeCounter = 0;

  std::string add_node(NodeKind kind, const std::string& id) {
    inst.nodes.push_back({id, kind});
    return id;
  }
  std::string add_arc(const std::string& tail, const std::string& head, double travel,
                      double cap) {
    std::string id = "e" + std::to_string(arcCounter++);
    inst.arcs.push_back({id, tail, head, travel, cap, std::numeric_limits<double>::infinity()});
    return id;
  }
};

double random_travel(Rng& rng, int maxTravel) {
  double t = rng.uniform(1, std::max(1, maxTravel));
  if (rng.chance(0.25)) t -= 0.5;  // exercise the per-arc ceil
  return t;
}

double random_capacity(Rng& rng, int maxCapacity) {
  double c = rng.uniform(1, std::max(1, maxCapacity));
  if (rng.chance(0.25)) c += 0.5;  // exercise the floor against real capacities
  return c;
}

void assign_cutoffs(Instance& inst, Rng& rng, double probability, int maxDemand) {
  if (probability <= 0) return;
  for (auto& arc : inst.arcs) {
    if (!rng.chance(probability)) continue;
    // Latest exit time over the areas using this arc, so the cutoff usually
    // allows some departures but binds late ones.
    int worst = 0;
    bool used = false;
    for (const auto& area : inst.areas) {
      int off = 0;
      for (const auto& aid : area.path) {
        const Arc* a = nullptr;
        for (const auto& cand : inst.arcs)
          if (cand.id == aid) { a = &cand; break; }
        int step = static_cast<int>(std::ceil(a->travelTime));
        if (aid == arc.id) {
          worst = std::max(worst, off + step);
          used = true;
        }
        off += step;
      }
    }
    if (!used) continue;
    arc.cutoff = worst + rng.uniform(0, maxDemand + 4);
  }
}

Instance generate_convergent_forest(const GenParams& p, Rng& rng) {
  Builder b;
  int trees = p.areas <= 1 ? 1 : rng.uniform(1, std::min(3, std::max(1, p.areas / 2)));

  std::vector<int> treeOf(p.areas);
  for (int i = 0; i < p.areas; ++i) treeOf[i] = rng.uniform(0, trees - 1);

  // Chain lengths; when arcTarget is set, pack lengths to hit it exactly.
  std::vector<int> lengths(p.areas, 1);
  if (p.arcTarget > 0) {
    int budget = std::max(p.arcTarget, p.areas);
    for (int i = 0; i < p.areas; ++i) lengths[i] = budget / p.areas;
    for (int i = 0; i < budget % p.areas; ++i) lengths[i] += 1;
    for (int k = 0; k < p.areas; ++k) {  // shuffle units around, preserving the sum
      int from = rng.uniform(0, p.areas - 1), to = rng.uniform(0, p.areas - 1);
      if (lengths[from] > 1) {
        lengths[from] -= 1;
        lengths[to] += 1;
      }
    }
  } else {
    for (int i = 0; i < p.areas; ++i) lengths[i] = rng.uniform(1, 5);
  }

  // The first chain of a multi-area tree needs an interior node so later
  // chains can attach below the root; this keeps every pair of paths in a
  // tree sharing the trunk arcs (the Theorem 3 shape).
  for (int t = 0; t < trees; ++t) {
    int first = -1, count = 0;
    for (int i = 0; i < p.areas; ++i)
      if (treeOf[i] == t) {
        if (first < 0) first = i;
        count += 1;
      }
    if (count < 2 || lengths[first] >= 2) continue;
    if (p.arcTarget > 0) {
      int donor = -1;
      for (int i = 0; i < p.areas; ++i)
        if (i != first && lengths[i] > 1 && (donor < 0 || lengths[i] > lengths[donor])) donor = i;
      if (donor >= 0) {
        lengths[donor] -= 1;
        lengths[first] += 1;
      }
    } else {
      lengths[first] = 2;
    }
  }

  struct Attach {
    std::string node;
    std::vector<std::string> suffix;  // arcs from node to the tree's safe node
  };
  std::vector<std::vector<Attach>> attach(trees);
  for (int t = 0; t < trees; ++t) {
    std::string s = b.add_node(NodeKind::Safe, "s" + std::to_string(t));
    attach[t].push_back({s, {}});
  }

  for (int i = 0; i < p.areas; ++i) {
    int t = treeOf[i];
    // Attach to the root only while the tree is empty; afterwards always to a
    // transit node, so the new path shares its suffix with an existing one.
    int lo = attach[t].size() > 1 ? 1 : 0;
    const Attach at =
        attach[t][static_cast<size_t>(rng.uniform(lo, static_cast<int>(attach[t].size()) - 1))];

    std::string leaf = b.add_node(NodeKind::Evacuation, "a" + std::to_string(i));
    std::vector<std::string> chainNodes{leaf};
    for (int j = 1; j < lengths[i]; ++j)
      chainNodes.push_back(b.add_node(NodeKind::Transit, "n" + std::to_string(b.nodeCounter++)));
    chainNodes.push_back(at.node);

    std::vector<std::string> chainArcs;
    for (size_t j = 0; j + 1 < chainNodes.size(); ++j)
      chainArcs.push_back(b.add_arc(chainNodes[j], chainNodes[j + 1],
                                    random_travel(rng, p.maxTravel),
                                    random_capacity(rng, p.maxCapacity)));

    EvacArea area;
    area.node = leaf;
    area.demand = rng.uniform(1, std::max(1, p.maxDemand));
    area.path = chainArcs;
    area.path.insert(area.path.end(), at.suffix.begin(), at.suffix.end());
    b.inst.areas.push_back(std::move(area));

    // New transit nodes become attachment points carrying their root suffix.
    for (size_t j = 1; j + 1 < chainNodes.size(); ++j) {
      std::vector<std::string> suffix(chainArcs.begin() + static_cast<long>(j), chainArcs.end());
      suffix.insert(suffix.end(), at.suffix.begin(), at.suffix.end());
      attach[t].push_back({chainNodes[j], std::move(suffix)});
    }
  }
  return std::move(b.inst);
}

Instance generate_random_paths(const GenParams& p, Rng& rng) {
  Builder b;
  int transits = std::max(2, p.areas);
  int safes = p.areas >= 3 ? rng.uniform(1, 2) : 1;

  std::vector<std::string> safeIds, transitIds;
  for (int i = 0; i < safes; ++i) safeIds.push_back(b.add_node(NodeKind::Safe, "s" + std::to_string(i)));
  for (int i = 0; i < transits; ++i)
    transitIds.push_back(b.add_node(NodeKind::Transit, "t" + std::to_string(i)));

  // Layered corridor arcs (tail index < head index keeps paths acyclic), plus
  // one safe-bound arc per transit so every walk terminates.
  std::vector<std::vector<std::pair<std::string, int>>> outgoing(transits);  // (arcId, next transit or -1)
  std::vector<std::string> toSafe(transits);
  for (int i = 0; i < transits; ++i) {
    toSafe[i] = b.add_arc(transitIds[i], safeIds[static_cast<size_t>(rng.uniform(0, safes - 1))],
                          random_travel(rng, p.maxTravel), random_capacity(rng, p.maxCapacity));
    outgoing[i].emplace_back(toSafe[i], -1);
    for (int j = i + 1; j < transits; ++j)
      if (rng.chance(0.4))
        outgoing[i].emplace_back(b.add_arc(transitIds[i], transitIds[j],
                                           random_travel(rng, p.maxTravel),
                                           random_capacity(rng, p.maxCapacity)),
                                 j);
  }

  for (int i = 0; i < p.areas; ++i) {
    std::string leaf = b.add_node(NodeKind::Evacuation, "a" + std::to_string(i));
    int entry = rng.uniform(0, transits - 1);
    EvacArea area;
    area.node = leaf;
    area.demand = rng.uniform(1, std::max(1, p.maxDemand));
    area.path.push_back(b.add_arc(leaf, transitIds[static_cast<size_t>(entry)],
                                  random_travel(rng, p.maxTravel),
                                  random_capacity(rng, p.maxCapacity)));
    int at = entry;
    while (at >= 0) {
      const auto& opts = outgoing[at];
      const auto& step = opts[static_cast<size_t>(rng.uniform(0, static_cast<int>(opts.size()) - 1))];
      area.path.push_back(step.first);
      at = step.second;
    }
    b.inst.areas.push_back(std::move(area));
  }
  return std::move(b.inst);
}

}  // namespace

Instance generate_instance(const GenParams& params, unsigned long long seed) {
  Rng rng(seed);
  Instance inst = params.treeShape == TreeShape::ConvergentForest
                      ? generate_convergent_forest(params, rng)
                      : generate_random_paths(params, rng);
  assign_cutoffs(inst, rng, params.cutoffProbability, params.maxDemand);
  inst.name = std::string(params.treeShape == TreeShape::ConvergentForest ? "forest" : "paths") +
              "-" + std::to_string(params.areas) + "a-seed" + std::to_string(seed);
  inst.seed = seed;
  validate_instance(inst);
  return inst;
}

}  // namespace evacsched
