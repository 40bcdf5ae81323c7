#include "evacsched/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <future>
#include <set>

#include "json.hpp"

namespace evacsched {

using json = nlohmann::ordered_json;

std::string solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleTimeout: return "feasibleTimeout";
    case SolveStatus::UnknownTimeout: return "unknownTimeout";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "?";
}

std::optional<SolveStatus> solve_status_from_string(const std::string& s) {
  if (s == "optimal") return SolveStatus::Optimal;
  if (s == "feasibleTimeout") return SolveStatus::FeasibleTimeout;
  if (s == "unknownTimeout") return SolveStatus::UnknownTimeout;
  if (s == "infeasible") return SolveStatus::Infeasible;
  return std::nullopt;
}

namespace {

int status_rank(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return 0;
    case SolveStatus::FeasibleTimeout: return 1;
    case SolveStatus::UnknownTimeout: return 2;
    case SolveStatus::Infeasible: return 3;
  }
  return 3;
}

SolveStatus from_search_status(SearchStatus s) {
  switch (s) {
    case SearchStatus::Optimal: return SolveStatus::Optimal;
    case SearchStatus::FeasibleTimeout: return SolveStatus::FeasibleTimeout;
    case SearchStatus::Infeasible: return SolveStatus::Infeasible;
    case SearchStatus::UnknownTimeout: return SolveStatus::UnknownTimeout;
  }
  return SolveStatus::Infeasible;
}

struct ComponentContext {
  const Component* comp;
  std::vector<PathMetrics> metrics;  // parallel to comp->areas
  std::vector<int> demands;
  long long totalDemand = 0;
};

ComponentModel build_component_model(const ComponentContext& ctx, const Instance& instance,
                                     EvacMode mode, SearchObjective objective, int horizon,
                                     const SolveOptions& opts, bool fixFullFlow) {
  ComponentModel model;
  model.capacityMode =
      mode == EvacMode::Phased ? CapacityMode::Disjunctive : CapacityMode::Cumulative;
  model.objective = objective;

  const Component& comp = *ctx.comp;
  for (size_t i = 0; i < comp.areas.size(); ++i) {
    int ai = comp.areas[i];
    const EvacArea& area = instance.areas[ai];
    AreaTask t;
    t.areaIdx = ai;
    t.areaId = area.node;
    t.demand = area.demand;
    t.transitCeil = ctx.metrics[i].transitCeil;
    t.init = init_task_domains(area, ctx.metrics[i], horizon, mode, opts.rateSet, &t.unevacuable);
    if (fixFullFlow) t.init.flow.tighten_min(area.demand);
    model.tasks.push_back(std::move(t));
  }

  const std::vector<std::string>& edgeIds =
      opts.useAllEdges ? comp.edges : comp.dominatingEdges;
  for (const auto& arcId : edgeIds) {
    EdgeConstraint ec;
    ec.arcId = arcId;
    ec.capacity = instance.find_arc(arcId)->capacity;
    for (size_t i = 0; i < comp.areas.size(); ++i) {
      auto it = ctx.metrics[i].offsets.find(arcId);
      if (it != ctx.metrics[i].offsets.end())
        ec.taskOffsets.emplace_back(static_cast<int>(i), it->second);
    }
    // Single-task edges are vacuous: the rate upper bound already enforces
    // rate <= floor(pathCapacity) <= u_e.
    if (ec.taskOffsets.size() >= 2) model.edges.push_back(std::move(ec));
  }
  return model;
}

struct CompOutcome {
  std::optional<std::vector<AreaAssignment>> sched;
  long long objective = 0;
  SolveStatus status = SolveStatus::UnknownTimeout;
  std::string search;
  SearchStats stats;
  double bestAt = 0.0;  // seconds from component start to the kept incumbent
};

void fold_stats(SearchStats& into, const SearchStats& s) {
  into.nodes += s.nodes;
  into.backtracks += s.backtracks;
  into.restarts += s.restarts;
  into.elapsedSeconds += s.elapsedSeconds;
  for (double l : s.restartBacktrackLimits) into.restartBacktrackLimits.push_back(l);
}

/// Runs the strategies in order with the given per-strategy budget, keeping
/// the best result. Maxflow keeps the largest objective, clearance the
/// smallest; a proved Optimal (or, for sat, Infeasible) ends the portfolio.
CompOutcome run_strategies(const ComponentModel& model, const std::vector<Strategy>& strategies,
                           double perStrategySeconds, const SolveOptions& opts,
                           unsigned long long seedBase) {
  CompOutcome out;
  bool haveResult = false;
  double elapsedBefore = 0.0;
  for (size_t si = 0; si < strategies.size(); ++si) {
    Budget b;
    b.timeLimitSeconds = perStrategySeconds;
    b.nodeLimit = opts.nodeLimit;
    SearchResult r = branch_and_bound(model, strategies[si], b, seedBase + 7919 * si);
    fold_stats(out.stats, r.stats);

    bool better = false;
    if (!haveResult) {
      better = true;
    } else if (r.bestSchedule.has_value() && !out.sched.has_value()) {
      better = true;
    } else if (r.bestSchedule.has_value() && out.sched.has_value()) {
      if (model.objective == SearchObjective::Clearance)
        better = r.bestObjective < out.objective;
      else
        better = r.bestObjective > out.objective;
    }
    if (better || (r.status == SearchStatus::Optimal && r.bestObjective == out.objective) ||
        r.status == SearchStatus::Infeasible) {
      out.sched = r.bestSchedule;
      out.objective = r.bestObjective;
      out.status = from_search_status(r.status);
      out.search = strategy_name(strategies[si]);
      out.bestAt = elapsedBefore + r.stats.bestFoundAt;
      haveResult = true;
    }
    elapsedBefore += r.stats.elapsedSeconds;
    if (r.status == SearchStatus::Optimal || r.status == SearchStatus::Infeasible) break;
  }
  return out;
}

std::vector<Strategy> strategies_for(EvacMode mode, SearchObjective objective,
                                     const SolveOptions& opts) {
  if (mode == EvacMode::Phased) {
    return {objective == SearchObjective::Clearance ? Strategy::CTLabel : Strategy::PhasedMF};
  }
  if (opts.strategy == "auto")
    return {Strategy::S1A2A, Strategy::S1A2B, Strategy::S1B2A, Strategy::S1B2B};
  auto s = strategy_from_string(opts.strategy);
  if (!s) throw std::invalid_argument("unknown strategy '" + opts.strategy + "'");
  return {*s};
}

CompOutcome solve_component(const ComponentContext& ctx, const Instance& instance, EvacMode mode,
                            SearchObjective objective, int horizon, const SolveOptions& opts,
                            std::optional<long long> componentBound, unsigned long long seedBase) {
  // The preemptive relaxation already refutes full evacuation.
  if (objective == SearchObjective::Sat && opts.usePreemptiveBound && componentBound &&
      *componentBound < ctx.totalDemand) {
    CompOutcome out;
    out.status = SolveStatus::Infeasible;
    out.search = "bound";
    return out;
  }

  // Polynomial fast path (phased maxflow over convergent trees).
  if (mode == EvacMode::Phased && objective == SearchObjective::Maxflow && opts.greedyFastPath &&
      theorem3_precondition(*ctx.comp, instance, horizon, opts.rateSet)) {
    auto t0 = std::chrono::steady_clock::now();
    auto sched = phased_greedy_convergent(*ctx.comp, instance, horizon, opts.rateSet);
    CompOutcome out;
    std::vector<AreaAssignment> assigns;
    long long flow = 0;
    for (size_t i = 0; i < ctx.comp->areas.size(); ++i) {
      const AreaSolution& a = sched.at(instance.areas[ctx.comp->areas[i]].node);
      assigns.push_back({a.start, a.dur, a.end, a.rate, a.flow});
      flow += a.flow;
    }
    out.sched = std::move(assigns);
    out.objective = flow;
    out.status = SolveStatus::Optimal;
    out.search = "greedy";
    out.stats.elapsedSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  std::vector<Strategy> strategies = strategies_for(mode, objective, opts);

  if (objective == SearchObjective::Clearance && opts.ctBinarySearch) {
    // Fallback flag: outer binary search over SAT feasibility.
    int hub = horizon;
    int maxTransit = 0;
    for (size_t i = 0; i < ctx.metrics.size(); ++i)
      maxTransit = std::max(maxTransit, ctx.metrics[i].transitCeil);
    int lo = maxTransit + 1, hi = hub;
    int probes = 1;
    for (int span = hi - lo; span > 0; span /= 2) probes += 1;
    double perProbe = opts.timeLimitSeconds / std::max(1, probes) / strategies.size();
    CompOutcome best;
    bool conclusive = true;
    while (lo < hi) {
      int mid = lo + (hi - lo) / 2;
      ComponentModel m =
          build_component_model(ctx, instance, mode, SearchObjective::Sat, mid, opts, true);
      CompOutcome probe = run_strategies(m, strategies, perProbe, opts, seedBase);
      fold_stats(best.stats, probe.stats);
      if (probe.status == SolveStatus::Optimal) {
        best.sched = probe.sched;
        best.objective = mid;  // CT value proven reachable at this horizon
        hi = mid;
      } else {
        if (probe.status != SolveStatus::Infeasible) conclusive = false;
        lo = mid + 1;
      }
    }
    ComponentModel m =
        build_component_model(ctx, instance, mode, SearchObjective::Sat, lo, opts, true);
    CompOutcome fin = run_strategies(m, strategies, perProbe, opts, seedBase);
    fold_stats(best.stats, fin.stats);
    if (fin.status == SolveStatus::Optimal) {
      best.sched = fin.sched;
      // Recompute the exact clearance from the schedule (it can beat `lo`).
      long long ct = 0;
      for (size_t i = 0; i < fin.sched->size(); ++i)
        if ((*fin.sched)[i].flow > 0)
          ct = std::max(ct, static_cast<long long>((*fin.sched)[i].end) + ctx.metrics[i].transitCeil);
      best.objective = ct;
      best.status = conclusive ? SolveStatus::Optimal : SolveStatus::FeasibleTimeout;
    } else if (best.sched) {
      best.status = SolveStatus::FeasibleTimeout;
    } else {
      best.status = conclusive ? SolveStatus::Infeasible : SolveStatus::UnknownTimeout;
    }
    best.search = "binary+" + (strategies.size() == 1 ? strategy_name(strategies[0]) : opts.strategy);
    return best;
  }

  bool wantFullFlow =
      objective == SearchObjective::Sat || objective == SearchObjective::Clearance;

  // SAT warm start for maxflow: a quick full-evacuation attempt closes the
  // component outright when it succeeds.
  double satSpent = 0.0;
  std::optional<long long> mfBound = componentBound;
  if (objective == SearchObjective::Maxflow && opts.satFirst) {
    if (!mfBound || *mfBound >= ctx.totalDemand) {
      ComponentModel satModel =
          build_component_model(ctx, instance, mode, SearchObjective::Sat, horizon, opts, true);
      double satBudget = opts.timeLimitSeconds * opts.satFraction / strategies.size();
      CompOutcome satOut = run_strategies(satModel, strategies, satBudget, opts, seedBase);
      satSpent = satOut.stats.elapsedSeconds;
      if (satOut.status == SolveStatus::Optimal) {
        satOut.objective = ctx.totalDemand;
        satOut.search += "+sat";
        return satOut;
      }
      if (satOut.status == SolveStatus::Infeasible)
        mfBound = std::min(mfBound.value_or(ctx.totalDemand - 1), ctx.totalDemand - 1);
    }
  }

  ComponentModel model =
      build_component_model(ctx, instance, mode, objective, horizon, opts, wantFullFlow);
  if (opts.usePreemptiveBound) model.objectiveBound = mfBound;

  double remaining = std::max(0.01, (opts.timeLimitSeconds - satSpent) / strategies.size());
  CompOutcome out = run_strategies(model, strategies, remaining, opts, seedBase);
  out.bestAt += satSpent;
  return out;
}

Solution solve_any(const Instance& instance, EvacMode mode, SearchObjective objective,
                   int horizonIn, const SolveOptions& opts) {
  if (objective != SearchObjective::Clearance && horizonIn < 1)
    throw std::invalid_argument("horizon must be >= 1");

  int horizon = objective == SearchObjective::Clearance ? clearance_horizon_ub(instance) : horizonIn;

  Solution sol;
  sol.mode = mode;
  sol.objectiveKind = objective;
  sol.horizon = horizon;
  sol.totalDemand = total_demand(instance);
  sol.search = mode == EvacMode::Phased
                   ? strategy_name(objective == SearchObjective::Clearance ? Strategy::CTLabel
                                                                           : Strategy::PhasedMF)
                   : opts.strategy;

  ComponentPartition parts;
  if (opts.decompose) {
    parts = partition_with_dominance(instance, mode);
  } else {
    Component whole;
    std::set<std::string> edges;
    for (size_t i = 0; i < instance.areas.size(); ++i) {
      whole.areas.push_back(static_cast<int>(i));
      for (const auto& arcId : instance.areas[i].path) {
        edges.insert(arcId);
        whole.areasPerEdge[arcId].push_back(static_cast<int>(i));
      }
    }
    whole.edges.assign(edges.begin(), edges.end());
    whole.dominatingEdges = dominating_edges(whole, instance, mode);
    parts.components.push_back(std::move(whole));
  }

  std::vector<ComponentContext> ctxs;
  for (const auto& comp : parts.components) {
    ComponentContext c;
    c.comp = &comp;
    for (int ai : comp.areas) {
      c.metrics.push_back(path_metrics(instance.areas[ai], instance));
      c.demands.push_back(instance.areas[ai].demand);
      c.totalDemand += instance.areas[ai].demand;
    }
    ctxs.push_back(std::move(c));
  }

  // Preemptive relaxation bounds, per component.
  std::vector<std::optional<long long>> compBounds(ctxs.size());
  if (opts.usePreemptiveBound) {
    if (objective == SearchObjective::Clearance) {
      sol.bound = std::nullopt;
      auto lb = preemptive_clearance_lb(instance);
      if (lb) sol.bound = *lb;
    } else {
      long long total = 0;
      for (size_t i = 0; i < ctxs.size(); ++i) {
        TimeExpandedNet net = build_time_expanded_net(instance, *ctxs[i].comp, horizon);
        long long b = max_flow(net);
        compBounds[i] = b;
        total += b;
      }
      sol.bound = total;
    }
  }

  auto solve_one = [&](size_t i) {
    return solve_component(ctxs[i], instance, mode, objective, horizon, opts, compBounds[i],
                           opts.seed + 1000003ULL * i);
  };

  std::vector<CompOutcome> outcomes(ctxs.size());
  if (opts.parallelComponents && ctxs.size() > 1) {
    std::vector<std::future<CompOutcome>> futs;
    for (size_t i = 0; i < ctxs.size(); ++i)
      futs.push_back(std::async(std::launch::async, solve_one, i));
    for (size_t i = 0; i < ctxs.size(); ++i) outcomes[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < ctxs.size(); ++i) outcomes[i] = solve_one(i);
  }

  // Concatenate: per-component statuses aggregate to the weakest.
  SolveStatus overall = SolveStatus::Optimal;
  long long objSum = 0, objMax = 0;
  bool allScheduled = true;
  for (size_t i = 0; i < ctxs.size(); ++i) {
    const CompOutcome& out = outcomes[i];
    ComponentReport rep;
    for (int ai : ctxs[i].comp->areas) rep.areas.push_back(instance.areas[ai].node);
    rep.objective = out.objective;
    rep.status = out.status;
    rep.search = out.search;
    rep.stats = out.stats;
    sol.perComponent.push_back(std::move(rep));

    if (status_rank(out.status) > status_rank(overall)) overall = out.status;
    fold_stats(sol.stats, out.stats);
    sol.stats.bestFoundAt = std::max(sol.stats.bestFoundAt, out.bestAt);

    if (!out.sched) {
      allScheduled = false;
      continue;
    }
    objSum += out.objective;
    objMax = std::max(objMax, out.objective);
    for (size_t t = 0; t < ctxs[i].comp->areas.size(); ++t) {
      const AreaAssignment& a = (*out.sched)[t];
      AreaSolution s{a.start, a.dur, a.end, a.rate, a.flow};
      if (s.flow == 0) s = AreaSolution{};  // canonical unevacuated output
      sol.perArea[instance.areas[ctxs[i].comp->areas[t]].node] = s;
    }
  }

  sol.status = overall;
  if (overall == SolveStatus::Infeasible || overall == SolveStatus::UnknownTimeout || !allScheduled) {
    sol.perArea.clear();
    sol.objectiveValue = 0;
  } else {
    sol.objectiveValue = objective == SearchObjective::Clearance ? objMax : objSum;
  }
  return sol;
}

}  // namespace

Solution solve_nepp(const Instance& instance, SearchObjective objective, int horizon,
                    const SolveOptions& opts) {
  return solve_any(instance, EvacMode::Simultaneous, objective, horizon, opts);
}

Solution solve_npepp(const Instance& instance, SearchObjective objective, int horizon,
                     const SolveOptions& opts) {
  return solve_any(instance, EvacMode::Phased, objective, horizon, opts);
}

// ---------------------------------------------------------------------------
// Theorem 3: phased maxflow on convergent components in polynomial time.

namespace {

int phased_rate(const EvacArea& area, const PathMetrics& m,
                const std::optional<std::vector<int>>& rateSet) {
  IntDomain r(1, std::min(area.demand, m.pathCapacityFloor));
  if (rateSet) r.intersect_values(*rateSet);
  return r.empty() ? 0 : r.ub();
}

}  // namespace

bool theorem3_precondition(const Component& component, const Instance& instance, int horizon,
                           const std::optional<std::vector<int>>& rateSet) {
  std::vector<PathMetrics> metrics;
  for (int ai : component.areas) metrics.push_back(path_metrics(instance.areas[ai], instance));

  std::optional<long long> sharedCompletion;
  for (size_t i = 0; i < component.areas.size(); ++i) {
    const EvacArea& area = instance.areas[component.areas[i]];
    if (phased_rate(area, metrics[i], rateSet) < 1) return false;
    FeasibleWindow w = feasible_window(area, metrics[i], horizon);
    if (w.endUb < 1 || w.startLb > w.endUb - 1) return false;
    long long completion = static_cast<long long>(w.endUb) + metrics[i].transitCeil;
    if (sharedCompletion && completion != *sharedCompletion) return false;
    sharedCompletion = completion;
  }

  // Pairwise convergence: the paths share an arc and coincide from the first
  // shared arc to the safe node.
  for (size_t i = 0; i < component.areas.size(); ++i) {
    const auto& p = instance.areas[component.areas[i]].path;
    for (size_t j = i + 1; j < component.areas.size(); ++j) {
      const auto& q = instance.areas[component.areas[j]].path;
      std::set<std::string> qArcs(q.begin(), q.end());
      size_t pi = 0;
      while (pi < p.size() && !qArcs.count(p[pi])) ++pi;
      if (pi == p.size()) return false;  // arc-disjoint pair (component joined via nodes only)
      size_t qi = 0;
      while (q[qi] != p[pi]) ++qi;
      if (p.size() - pi != q.size() - qi) return false;
      for (size_t k = 0; pi + k < p.size(); ++k)
        if (p[pi + k] != q[qi + k]) return false;
    }
  }
  return true;
}

std::map<std::string, AreaSolution> phased_greedy_convergent(
    const Component& component, const Instance& instance, int horizon,
    const std::optional<std::vector<int>>& rateSet) {
  std::vector<PathMetrics> metrics;
  for (int ai : component.areas) metrics.push_back(path_metrics(instance.areas[ai], instance));

  std::vector<std::string> dom = dominating_edges(component, instance, EvacMode::Phased);
  assert(!dom.empty());
  // The edge with the largest offset (closest to the safe node) carries every
  // path of a convergent component.
  std::string edge = dom.front();
  int bestOff = -1;
  for (const auto& e : dom) {
    for (size_t i = 0; i < component.areas.size(); ++i) {
      auto it = metrics[i].offsets.find(e);
      if (it != metrics[i].offsets.end() && it->second > bestOff) {
        bestOff = it->second;
        edge = e;
      }
    }
  }

  size_t n = component.areas.size();
  std::vector<int> rate(n), est(n), rem(n);
  long long sharedEnd = 0;  // latest usable minute bound on the edge (exclusive)
  for (size_t i = 0; i < n; ++i) {
    const EvacArea& area = instance.areas[component.areas[i]];
    rate[i] = phased_rate(area, metrics[i], rateSet);
    FeasibleWindow w = feasible_window(area, metrics[i], horizon);
    int off = metrics[i].offset_of(edge);
    est[i] = w.startLb + off;
    sharedEnd = static_cast<long long>(w.endUb) + off;  // equal across areas (precondition)
    rem[i] = area.demand;
  }

  // Step 1: preemptive sweep, largest actual flow rate first.
  std::vector<int> firstStartOrder;
  long long t = *std::min_element(est.begin(), est.end());
  while (t < sharedEnd) {
    int pick = -1, pickRate = 0;
    for (size_t i = 0; i < n; ++i) {
      if (rem[i] <= 0 || est[i] > t) continue;
      int actual = std::min(rate[i], rem[i]);
      if (actual > pickRate) {
        pickRate = actual;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) {
      // Nothing eligible: jump to the next earliest start still pending.
      long long next = sharedEnd;
      for (size_t i = 0; i < n; ++i)
        if (rem[i] > 0 && est[i] > t) next = std::min(next, static_cast<long long>(est[i]));
      if (next >= sharedEnd) break;
      t = next;
      continue;
    }
    if (rem[pick] == instance.areas[component.areas[pick]].demand)
      firstStartOrder.push_back(pick);
    rem[pick] -= std::min(rate[pick], rem[pick]);
    t += 1;
  }

  // Step 2: non-preemptive packing in first-start order; flows are unchanged.
  std::map<std::string, AreaSolution> out;
  long long prevEnd = 0;
  for (int i : firstStartOrder) {
    int flow = instance.areas[component.areas[i]].demand - rem[i];
    int dur = (flow + rate[i] - 1) / rate[i];
    long long startOnEdge = std::max<long long>(est[i], prevEnd);
    prevEnd = startOnEdge + dur;
    assert(prevEnd <= sharedEnd);
    int off = metrics[i].offset_of(edge);
    AreaSolution s;
    s.start = static_cast<int>(startOnEdge) - off;
    s.dur = dur;
    s.end = s.start + dur;
    s.rate = rate[i];
    s.flow = flow;
    out[instance.areas[component.areas[i]].node] = s;
  }
  for (size_t i = 0; i < n; ++i) {
    const std::string& id = instance.areas[component.areas[i]].node;
    if (!out.count(id)) out[id] = AreaSolution{};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solution documents.

namespace {

const char* mode_name(EvacMode m) { return m == EvacMode::Phased ? "phased" : "sim"; }

const char* objective_name(SearchObjective o) {
  switch (o) {
    case SearchObjective::Maxflow: return "maxflow";
    case SearchObjective::Sat: return "sat";
    case SearchObjective::Clearance: return "clearance";
  }
  return "?";
}

json stats_to_json(const SearchStats& s) {
  return json{{"nodes", s.nodes},
              {"backtracks", s.backtracks},
              {"restarts", s.restarts},
              {"elapsedSeconds", s.elapsedSeconds},
              {"bestFoundAtSeconds", s.bestFoundAt}};
}

SearchStats stats_from_json(const json& j) {
  SearchStats s;
  s.nodes = j.value("nodes", 0LL);
  s.backtracks = j.value("backtracks", 0LL);
  s.restarts = j.value("restarts", 0);
  s.elapsedSeconds = j.value("elapsedSeconds", 0.0);
  s.bestFoundAt = j.value("bestFoundAtSeconds", 0.0);
  return s;
}

}  // namespace

std::string serialize_solution(const Solution& sol) {
  json doc;
  doc["mode"] = mode_name(sol.mode);
  doc["objective"] = objective_name(sol.objectiveKind);
  doc["horizon"] = sol.horizon;
  doc["objectiveValue"] = sol.objectiveValue;
  doc["status"] = solve_status_name(sol.status);
  doc["search"] = sol.search;
  doc["bound"] = sol.bound ? json(*sol.bound) : json(nullptr);

  double gap = 0.0;
  if (sol.bound && *sol.bound > 0) {
    if (sol.objectiveKind == SearchObjective::Clearance)
      gap = 100.0 * static_cast<double>(sol.objectiveValue - *sol.bound) / static_cast<double>(*sol.bound);
    else
      gap = 100.0 * static_cast<double>(*sol.bound - sol.objectiveValue) / static_cast<double>(*sol.bound);
  }
  doc["gapPercent"] = gap;

  long long flowTotal = 0;
  for (const auto& [id, a] : sol.perArea) flowTotal += a.flow;
  doc["totalDemand"] = sol.totalDemand;
  doc["percentEvacuated"] =
      sol.totalDemand > 0 ? 100.0 * static_cast<double>(flowTotal) / static_cast<double>(sol.totalDemand)
                          : 0.0;
  doc["perArea"] = json::object();
  for (const auto& [id, a] : sol.perArea)
    doc["perArea"][id] = json{{"start", a.start}, {"dur", a.dur}, {"end", a.end},
                              {"rate", a.rate}, {"flow", a.flow}};
  doc["perComponent"] = json::array();
  for (const auto& c : sol.perComponent) {
    json jc{{"areas", c.areas},
            {"objective", c.objective},
            {"status", solve_status_name(c.status)},
            {"search", c.search},
            {"stats", stats_to_json(c.stats)}};
    doc["perComponent"].push_back(std::move(jc));
  }
  doc["stats"] = stats_to_json(sol.stats);
  return doc.dump(2) + "\n";
}

Solution parse_solution(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(ParseError::Kind::Syntax, std::string("malformed solution document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError(ParseError::Kind::Syntax, "solution document must be an object");

  Solution sol;
  std::string mode = doc.value("mode", "sim");
  if (mode == "sim") sol.mode = EvacMode::Simultaneous;
  else if (mode == "phased") sol.mode = EvacMode::Phased;
  else throw ParseError(ParseError::Kind::Semantic, "unknown mode '" + mode + "'");

  std::string obj = doc.value("objective", "maxflow");
  if (obj == "maxflow") sol.objectiveKind = SearchObjective::Maxflow;
  else if (obj == "sat") sol.objectiveKind = SearchObjective::Sat;
  else if (obj == "clearance") sol.objectiveKind = SearchObjective::Clearance;
  else throw ParseError(ParseError::Kind::Semantic, "unknown objective '" + obj + "'");

  if (!doc.contains("horizon") || !doc.at("horizon").is_number_integer())
    throw ParseError(ParseError::Kind::Syntax, "solution document requires an integer 'horizon'");
  sol.horizon = doc.at("horizon").get<int>();
  sol.objectiveValue = doc.value("objectiveValue", 0LL);
  sol.search = doc.value("search", "");
  sol.totalDemand = doc.value("totalDemand", 0LL);
  if (doc.contains("bound") && !doc.at("bound").is_null()) sol.bound = doc.at("bound").get<long long>();
  if (auto st = solve_status_from_string(doc.value("status", "optimal"))) sol.status = *st;
  else throw ParseError(ParseError::Kind::Semantic, "unknown status");

  if (!doc.contains("perArea") || !doc.at("perArea").is_object())
    throw ParseError(ParseError::Kind::Syntax, "solution document requires a 'perArea' object");
  for (auto it = doc.at("perArea").begin(); it != doc.at("perArea").end(); ++it) {
    const json& ja = it.value();
    AreaSolution a;
    a.start = ja.value("start", 0);
    a.dur = ja.value("dur", 0);
    a.end = ja.value("end", 0);
    a.rate = ja.value("rate", 0);
    a.flow = ja.value("flow", 0);
    sol.perArea[it.key()] = a;
  }
  if (doc.contains("perComponent")) {
    for (const json& jc : doc.at("perComponent")) {
      ComponentReport c;
      if (jc.contains("areas"))
        for (const json& a : jc.at("areas")) c.areas.push_back(a.get<std::string>());
      c.objective = jc.value("objective", 0LL);
      if (auto st = solve_status_from_string(jc.value("status", "optimal"))) c.status = *st;
      c.search = jc.value("search", "");
      if (jc.contains("stats")) c.stats = stats_from_json(jc.at("stats"));
      sol.perComponent.push_back(std::move(c));
    }
  }
  if (doc.contains("stats")) sol.stats = stats_from_json(doc.at("stats"));
  return sol;
}

}  // namespace evacsched
