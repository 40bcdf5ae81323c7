#include "evacsched/engine.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>

namespace evacsched {

ShiftedTask edge_view(TaskState& task, const EvacArea& area, const std::string& edge,
                      const PathMetrics& metrics, int areaIdx) {
  ShiftedTask v;
  v.base = &task;
  v.areaIdx = areaIdx;
  v.edgeId = edge;
  v.offset = metrics.offset_of(edge);
  (void)area;
  return v;
}

int TimetableProfile::max_usage() const {
  int usage = 0, best = 0;
  for (const auto& [t, d] : events) {
    usage += d;
    best = std::max(best, usage);
  }
  return best;
}

int TimetableProfile::usage_at(int minute) const {
  int usage = 0;
  for (const auto& [t, d] : events) {
    if (t > minute) break;
    usage += d;
  }
  return usage;
}

TimetableProfile build_profile(const std::vector<ShiftedTask>& tasks, bool disjunctive) {
  TimetableProfile p;
  if (!tasks.empty()) p.edgeId = tasks.front().edgeId;
  for (const auto& t : tasks) {
    int h = disjunctive ? 1 : t.rateLb();
    if (h <= 0) continue;  // deactivated area
    int cs = t.startUb(), ce = t.endLb();
    if (cs >= ce) continue;  // no compulsory part
    p.events.emplace_back(cs, h);
    p.events.emplace_back(ce, -h);
  }
  std::sort(p.events.begin(), p.events.end());
  return p;
}

namespace {

struct Segment {
  int from, to, usage;  // usage over [from, to)
};

std::vector<Segment> profile_segments(const TimetableProfile& p) {
  std::vector<Segment> segs;
  int usage = 0;
  size_t i = 0;
  while (i < p.events.size()) {
    int t = p.events[i].first;
    while (i < p.events.size() && p.events[i].first == t) usage += p.events[i++].second;
    if (!segs.empty()) segs.back().to = t;
    if (i < p.events.size()) segs.push_back({t, t, usage});
  }
  return segs;
}

}  // namespace

bool timetable_consistent(std::vector<ShiftedTask>& tasks, double capacity, CapacityMode mode) {
  bool disjunctive = mode == CapacityMode::Disjunctive;
  double cap = disjunctive ? 1.0 : capacity;

  TimetableProfile profile = build_profile(tasks, disjunctive);
  std::vector<Segment> segs = profile_segments(profile);
  for (const auto& s : segs)
    if (static_cast<double>(s.usage) > cap) return false;

  // Timetable filtering: a task that must run (dur lb >= 1) cannot overlap a
  // minute where the others' mandatory usage plus its own minimum height
  // exceeds the capacity.
  for (auto& t : tasks) {
    int h = disjunctive ? 1 : t.rateLb();
    if (h <= 0 || t.durLb() < 1) continue;
    int cs = t.startUb(), ce = t.endLb();
    bool hasOwn = cs < ce;

    int s = t.startLb();
    for (const auto& seg : segs) {
      if (seg.to <= s) continue;
      if (seg.from >= s + t.durLb()) break;
      int others = seg.usage - ((hasOwn && seg.from >= cs && seg.to <= ce) ? h : 0);
      if (static_cast<double>(others + h) > cap) s = seg.to;
    }
    if (s > t.startLb()) {
      t.tighten_start_min(s);
      if (t.base->start.empty()) return false;
    }

    int e = t.endUb();
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
      if (it->from >= e) continue;
      if (it->to <= e - t.durLb()) break;
      int others = it->usage - ((hasOwn && it->from >= cs && it->to <= ce) ? h : 0);
      if (static_cast<double>(others + h) > cap) e = it->from;
    }
    if (e < t.endUb()) {
      t.tighten_end_max(e);
      if (t.base->end.empty()) return false;
    }
  }
  return true;
}

std::optional<Strategy> strategy_from_string(const std::string& s) {
  if (s == "1A2A") return Strategy::S1A2A;
  if (s == "1A2B") return Strategy::S1A2B;
  if (s == "1B2A") return Strategy::S1B2A;
  if (s == "1B2B") return Strategy::S1B2B;
  if (s == "phasedMF") return Strategy::PhasedMF;
  if (s == "CT") return Strategy::CTLabel;
  return std::nullopt;
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::S1A2A: return "1A2A";
    case Strategy::S1A2B: return "1A2B";
    case Strategy::S1B2A: return "1B2A";
    case Strategy::S1B2B: return "1B2B";
    case Strategy::PhasedMF: return "phasedMF";
    case Strategy::CTLabel: return "CT";
  }
  return "?";
}

std::string search_status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::Optimal: return "optimal";
    case SearchStatus::FeasibleTimeout: return "feasibleTimeout";
    case SearchStatus::Infeasible: return "infeasible";
    case SearchStatus::UnknownTimeout: return "unknownTimeout";
  }
  return "?";
}

namespace {

using Var = Decision::Var;

struct LabelStep {
  Var var;
  bool minFirst;
};

// Per-task variable labeling orders; variables the paper leaves unstated are
// completed with dur ascending, then end ascending.
const std::vector<LabelStep>& label_order(Strategy s) {
  static const std::vector<LabelStep> order2A = {
      {Var::Rate, true}, {Var::Start, true}, {Var::Flow, false}, {Var::Dur, true}, {Var::End, true}};
  static const std::vector<LabelStep> order2B = {
      {Var::Rate, false}, {Var::Flow, false}, {Var::Start, true}, {Var::Dur, true}, {Var::End, true}};
  static const std::vector<LabelStep> orderCT = {
      {Var::Start, true}, {Var::Rate, false}, {Var::Dur, true}, {Var::Flow, false}, {Var::End, true}};
  switch (s) {
    case Strategy::S1A2A:
    case Strategy::S1B2A: return order2A;
    case Strategy::S1A2B:
    case Strategy::S1B2B: return order2B;
    default: return orderCT;
  }
}

IntDomain& var_domain(TaskState& t, Var v) {
  switch (v) {
    case Var::Rate: return t.rate;
    case Var::Start: return t.start;
    case Var::Flow: return t.flow;
    case Var::Dur: return t.dur;
    case Var::End: return t.end;
  }
  return t.rate;
}

const IntDomain& var_domain(const TaskState& t, Var v) {
  return var_domain(const_cast<TaskState&>(t), v);
}

Decision label_task(const SearchState& state, Strategy strategy, int taskIdx) {
  const TaskState& t = state.tasks[taskIdx];
  for (const auto& step : label_order(strategy)) {
    const IntDomain& d = var_domain(t, step.var);
    if (d.fixed()) continue;
    Decision dec;
    dec.taskIdx = taskIdx;
    dec.var = step.var;
    dec.kind = Decision::Kind::Assign;
    dec.value = step.minFirst ? d.lb() : d.ub();
    dec.valueIsMin = step.minFirst;
    return dec;
  }
  assert(false && "label_task called on assigned task");
  return {};
}

std::vector<int> unassigned_tasks(const SearchState& state) {
  std::vector<int> out;
  for (size_t i = 0; i < state.tasks.size(); ++i)
    if (!state.tasks[i].assigned()) out.push_back(static_cast<int>(i));
  return out;
}

Decision decide_phased_mf(const SearchState& state, const ComponentModel& model) {
  // Step 1: fix durations, picking the task with the highest remaining actual
  // flow rate (min of its rate and what it can still evacuate).
  int pick = -1;
  long long pickRate = -1;
  for (size_t i = 0; i < state.tasks.size(); ++i) {
    const TaskState& t = state.tasks[i];
    if (t.dur.fixed()) continue;
    long long actual = std::min<long long>(t.rate.ub(), t.flow.ub());
    if (actual > pickRate) {
      pickRate = actual;
      pick = static_cast<int>(i);
    }
  }
  if (pick >= 0) {
    const IntDomain& dur = state.tasks[pick].dur;
    Decision dec;
    dec.taskIdx = pick;
    dec.var = Var::Dur;
    if (dur.lb() <= dur.ub() - 2) {
      dec.kind = Decision::Kind::SplitGeq;
      dec.value = dur.ub() - 1;  // refutation imposes dur <= ub - 2
    } else {
      dec.kind = Decision::Kind::Assign;
      dec.value = dur.ub();
      dec.valueIsMin = false;
    }
    return dec;
  }
  // Step 2: durations fixed; label start times by earliest start.
  (void)model;
  std::vector<int> cand = unassigned_tasks(state);
  pick = cand.front();
  for (int i : cand)
    if (state.tasks[i].start.lb() < state.tasks[pick].start.lb()) pick = i;
  return label_task(state, Strategy::PhasedMF, pick);
}

Decision decide_ct(const SearchState& state, const ComponentModel& model) {
  // Smallest earliest start among dominating-edge tasks, ties by maximal rate.
  std::vector<int> cand = unassigned_tasks(state);
  (void)model;
  int pick = cand.front();
  for (int i : cand) {
    const TaskState& t = state.tasks[i];
    const TaskState& p = state.tasks[pick];
    if (t.start.lb() < p.start.lb() ||
        (t.start.lb() == p.start.lb() && t.rate.ub() > p.rate.ub()))
      pick = i;
  }
  return label_task(state, Strategy::CTLabel, pick);
}

Decision decide_1b(const SearchState& state, const ComponentModel& model, Strategy strategy) {
  // Dominating edge with the greatest number of tasks (ties toward the
  // smaller arc id), then its unassigned task with the largest demand.
  const EdgeConstraint* bestEdge = nullptr;
  for (const auto& e : model.edges) {
    bool hasUnassigned = false;
    for (const auto& [ti, off] : e.taskOffsets)
      if (!state.tasks[ti].assigned()) hasUnassigned = true;
    if (!hasUnassigned) continue;
    if (!bestEdge || e.taskOffsets.size() > bestEdge->taskOffsets.size() ||
        (e.taskOffsets.size() == bestEdge->taskOffsets.size() && e.arcId < bestEdge->arcId))
      bestEdge = &e;
  }
  int pick = -1;
  if (bestEdge) {
    for (const auto& [ti, off] : bestEdge->taskOffsets) {
      if (state.tasks[ti].assigned()) continue;
      if (pick < 0 || model.tasks[ti].demand > model.tasks[pick].demand) pick = ti;
    }
  } else {
    pick = unassigned_tasks(state).front();  // tasks off every edge (single private arcs)
  }
  return label_task(state, strategy, pick);
}

}  // namespace

Decision strategy_decide(const SearchState& state, const ComponentModel& model, Strategy strategy,
                         std::mt19937_64& rng) {
  if (strategy == Strategy::PhasedMF) return decide_phased_mf(state, model);
  if (strategy == Strategy::CTLabel) return decide_ct(state, model);

  // A selected task stays selected until all five variables are assigned.
  if (state.currentTask >= 0 && !state.tasks[state.currentTask].assigned())
    return label_task(state, strategy, state.currentTask);

  if (strategy == Strategy::S1B2A || strategy == Strategy::S1B2B)
    return decide_1b(state, model, strategy);

  std::vector<int> cand = unassigned_tasks(state);
  int pick = cand[static_cast<size_t>(rng() % cand.size())];
  return label_task(state, strategy, pick);
}

// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

class Search {
public:
  Search(const ComponentModel& model, Strategy strategy, const Budget& budget,
         unsigned long long seed, std::vector<DecisionRecord>* trace)
      : model_(model), strategy_(strategy), budget_(budget), rng_(seed), trace_(trace) {
    totalDemand_ = 0;
    for (const auto& t : model_.tasks) totalDemand_ += t.demand;
  }

  SearchResult run() {
    auto t0 = Clock::now();
    start_ = t0;

    SearchState root;
    for (const auto& t : model_.tasks) root.tasks.push_back(t.init);

    if (model_.objective == SearchObjective::Maxflow) seed_zero_incumbent(root);

    bool restarts = strategy_ == Strategy::S1A2A || strategy_ == Strategy::S1A2B;
    double limit = 2.0 * 5.0 * static_cast<double>(model_.tasks.size());

    SearchStatus status;
    while (true) {
      if (restarts) result_.stats.restartBacktrackLimits.push_back(limit);
      PassEnd end = pass(root, restarts ? limit : -1.0);
      if (end == PassEnd::Restart) {
        limit *= 1.5;
        continue;
      }
      if (end == PassEnd::Exhausted || end == PassEnd::Stop) {
        bool found = result_.bestSchedule.has_value();
        status = found ? SearchStatus::Optimal : SearchStatus::Infeasible;
      } else {  // budget exhausted
        bool found = result_.bestSchedule.has_value();
        status = found ? SearchStatus::FeasibleTimeout : SearchStatus::UnknownTimeout;
      }
      break;
    }

    result_.status = status;
    result_.stats.elapsedSeconds =
        std::chrono::duration<double>(Clock::now() - t0).count();
    return std::move(result_);
  }

private:
  enum class PassEnd { Exhausted, Restart, Budget, Stop };

  struct Frame {
    SearchState saved;
    Decision dec;
  };

  void seed_zero_incumbent(const SearchState& root) {
    std::vector<AreaAssignment> zero;
    for (size_t i = 0; i < model_.tasks.size(); ++i) {
      AreaAssignment a;
      a.start = root.tasks[i].start.lb();
      a.end = a.start;
      a.rate = root.tasks[i].rate.fixed() ? root.tasks[i].rate.value() : root.tasks[i].rate.lb();
      zero.push_back(a);
    }
    result_.bestSchedule = std::move(zero);
    result_.bestObjective = 0;
    hasIncumbent_ = true;
  }

  bool budget_exceeded() {
    if (budget_.nodeLimit && result_.stats.nodes >= *budget_.nodeLimit) return true;
    if (budget_.timeLimitSeconds < 1e17) {
      double el = std::chrono::duration<double>(Clock::now() - start_).count();
      if (el >= budget_.timeLimitSeconds) return true;
    }
    return false;
  }

  bool objective_reached() const {
    if (!hasIncumbent_) return false;
    if (model_.objective == SearchObjective::Maxflow) {
      long long ub = totalDemand_;
      if (model_.objectiveBound) ub = std::min(ub, *model_.objectiveBound);
      return result_.bestObjective >= ub;
    }
    if (model_.objective == SearchObjective::Clearance && model_.objectiveBound)
      return result_.bestObjective <= *model_.objectiveBound;
    return false;
  }

  enum class BtOutcome { Advanced, Restart, Exhausted, Budget };

  PassEnd pass(const SearchState& rootTemplate, double backtrackLimit) {
    SearchState cur = rootTemplate;
    cur.currentTask = -1;
    std::vector<Frame> stack;
    long long passBacktracks = 0;

    if (objective_reached()) return PassEnd::Stop;
    if (!propagate(cur)) return PassEnd::Exhausted;

    while (true) {
      if (budget_exceeded()) return PassEnd::Budget;

      if (all_assigned(cur)) {
        record_incumbent(cur);
        if (model_.objective == SearchObjective::Sat) return PassEnd::Stop;
        if (objective_reached()) return PassEnd::Stop;
        switch (backtrack(cur, stack, passBacktracks, backtrackLimit)) {
          case BtOutcome::Advanced: continue;
          case BtOutcome::Restart: return PassEnd::Restart;
          case BtOutcome::Exhausted: return PassEnd::Exhausted;
          case BtOutcome::Budget: return PassEnd::Budget;
        }
      }

      Decision dec = strategy_decide(cur, model_, strategy_, rng_);
      stack.push_back(Frame{cur, dec});
      apply(cur, dec, true);
      cur.currentTask = dec.taskIdx;
      result_.stats.nodes += 1;

      if (!propagate(cur)) {
        switch (backtrack(cur, stack, passBacktracks, backtrackLimit)) {
          case BtOutcome::Advanced: break;
          case BtOutcome::Restart: return PassEnd::Restart;
          case BtOutcome::Exhausted: return PassEnd::Exhausted;
          case BtOutcome::Budget: return PassEnd::Budget;
        }
      }
    }
  }

  // Pops frames, applying refutations until one propagates.
  BtOutcome backtrack(SearchState& cur, std::vector<Frame>& stack, long long& passBacktracks,
                      double backtrackLimit) {
    while (!stack.empty()) {
      if (budget_exceeded()) return BtOutcome::Budget;
      Frame f = std::move(stack.back());
      stack.pop_back();
      cur = std::move(f.saved);
      apply(cur, f.dec, false);
      cur.currentTask = f.dec.taskIdx;
      result_.stats.nodes += 1;
      result_.stats.backtracks += 1;
      passBacktracks += 1;
      if (backtrackLimit > 0 && static_cast<double>(passBacktracks) >= backtrackLimit) {
        result_.stats.restarts += 1;
        return BtOutcome::Restart;
      }
      if (propagate(cur)) return BtOutcome::Advanced;
    }
    return BtOutcome::Exhausted;
  }

  void apply(SearchState& st, const Decision& dec, bool left) {
    IntDomain& d = var_domain(st.tasks[dec.taskIdx], dec.var);
    if (dec.kind == Decision::Kind::Assign) {
      if (left)
        d.assign(dec.value);
      else if (dec.valueIsMin)
        d.tighten_min(dec.value + 1);
      else
        d.tighten_max(dec.value - 1);
    } else {  // SplitGeq
      if (left)
        d.tighten_min(dec.value);
      else
        d.tighten_max(dec.value - 1);
    }
    if (trace_) trace_->push_back({dec.taskIdx, dec.var, dec.kind, dec.value, left});
  }

  bool all_assigned(const SearchState& st) const {
    for (const auto& t : st.tasks)
      if (!t.assigned()) return false;
    return true;
  }

  void record_incumbent(const SearchState& st) {
    long long obj = 0;
    if (model_.objective == SearchObjective::Clearance) {
      for (size_t i = 0; i < st.tasks.size(); ++i)
        if (st.tasks[i].flow.value() > 0)
          obj = std::max(obj, static_cast<long long>(st.tasks[i].end.value()) +
                                  model_.tasks[i].transitCeil);
    } else {
      for (const auto& t : st.tasks) obj += t.flow.value();
    }
    std::vector<AreaAssignment> sched;
    for (const auto& t : st.tasks)
      sched.push_back({t.start.value(), t.dur.value(), t.end.value(), t.rate.value(),
                       t.flow.value()});
    result_.bestSchedule = std::move(sched);
    result_.bestObjective = obj;
    hasIncumbent_ = true;
    result_.stats.bestFoundAt = std::chrono::duration<double>(Clock::now() - start_).count();
  }

  // Fixpoint of arithmetic links, objective bounding, and per-edge timetable
  // consistency. Returns false on failure; never throws.
  bool propagate(SearchState& st) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < st.tasks.size(); ++i)
        if (!propagate_task(st.tasks[i], model_.tasks[i].demand, changed)) return false;
      if (!propagate_objective(st, changed)) return false;
      for (const auto& e : model_.edges) {
        std::vector<ShiftedTask> views;
        views.reserve(e.taskOffsets.size());
        for (const auto& [ti, off] : e.taskOffsets) {
          ShiftedTask v;
          v.base = &st.tasks[ti];
          v.areaIdx = ti;
          v.offset = off;
          views.push_back(v);
        }
        std::vector<std::pair<int, int>> before;
        before.reserve(views.size());
        for (const auto& v : views) before.emplace_back(v.base->start.lb(), v.base->end.ub());
        if (!timetable_consistent(views, e.capacity, model_.capacityMode)) return false;
        for (size_t vi = 0; vi < views.size(); ++vi) {
          if (views[vi].base->failed()) return false;
          if (before[vi].first != views[vi].base->start.lb() ||
              before[vi].second != views[vi].base->end.ub())
            changed = true;
        }
      }
    }
    return true;
  }

  bool propagate_task(TaskState& t, int demand, bool& changed) {
    changed |= t.end.tighten_min(t.start.lb() + t.dur.lb());
    changed |= t.end.tighten_max(t.start.ub() + t.dur.ub());
    changed |= t.start.tighten_min(t.end.lb() - t.dur.ub());
    changed |= t.start.tighten_max(t.end.ub() - t.dur.lb());
    changed |= t.dur.tighten_min(t.end.lb() - t.start.ub());
    changed |= t.dur.tighten_max(t.end.ub() - t.start.lb());

    long long lo = std::min<long long>(1LL * t.dur.lb() * t.rate.lb(), demand);
    long long hi = std::min<long long>(1LL * t.dur.ub() * t.rate.ub(), demand);
    changed |= t.flow.tighten_min(static_cast<int>(lo));
    changed |= t.flow.tighten_max(static_cast<int>(hi));

    if (t.flow.lb() >= 1) {
      if (t.rate.ub() >= 1)
        changed |= t.dur.tighten_min(static_cast<int>(ceil_div(t.flow.lb(), t.rate.ub())));
      if (t.dur.ub() >= 1)
        changed |= t.rate.tighten_min(static_cast<int>(ceil_div(t.flow.lb(), t.dur.ub())));
    }
    if (t.flow.ub() < demand) {
      if (t.rate.lb() >= 1) changed |= t.dur.tighten_max(t.flow.ub() / t.rate.lb());
      if (t.dur.lb() >= 1) changed |= t.rate.tighten_max(t.flow.ub() / t.dur.lb());
    }
    // Canonical placement of tasks that cannot run.
    if (!t.dur.empty() && t.dur.ub() == 0 && !t.start.fixed())
      changed |= t.start.tighten_max(t.start.lb());
    return !t.failed();
  }

  bool propagate_objective(SearchState& st, bool& changed) {
    if (!hasIncumbent_) return true;
    if (model_.objective == SearchObjective::Maxflow) {
      long long target = result_.bestObjective + 1;
      long long sumUb = 0;
      for (const auto& t : st.tasks) sumUb += t.flow.ub();
      if (sumUb < target) return false;
      long long slack = sumUb - target;
      for (auto& t : st.tasks) {
        long long need = t.flow.ub() - slack;
        if (need > t.flow.lb()) {
          changed |= t.flow.tighten_min(static_cast<int>(need));
          if (t.flow.empty()) return false;
        }
      }
    } else if (model_.objective == SearchObjective::Clearance) {
      long long target = result_.bestObjective - 1;
      for (size_t i = 0; i < st.tasks.size(); ++i) {
        long long bound = target - model_.tasks[i].transitCeil;
        changed |= st.tasks[i].end.tighten_max(static_cast<int>(bound));
        if (st.tasks[i].end.empty()) return false;
      }
    }
    return true;
  }

  const ComponentModel& model_;
  Strategy strategy_;
  Budget budget_;
  std::mt19937_64 rng_;
  std::vector<DecisionRecord>* trace_;
  Clock::time_point start_;
  long long totalDemand_ = 0;
  bool hasIncumbent_ = false;
  SearchResult result_;
};

}  // namespace

SearchResult branch_and_bound(const ComponentModel& model, Strategy strategy, const Budget& budget,
                              unsigned long long seed, std::vector<DecisionRecord>* trace) {
  return Search(model, strategy, budget, seed, trace).run();
}

}  // namespace evacsched
