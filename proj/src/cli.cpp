#include "evacsched/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "evacsched/bounds.hpp"
#include "evacsched/decompose.hpp"
#include "evacsched/validate.hpp"

namespace evacsched {

using json = nlohmann::ordered_json;

std::string report_departure_profile(const Solution& solution, const Instance& instance) {
  std::ostringstream csv;
  csv << "areaId,minute,vehiclesDeparting\n";
  for (const auto& area : instance.areas) {
    auto it = solution.perArea.find(area.node);
    if (it == solution.perArea.end()) continue;
    const AreaSolution& a = it->second;
    int remaining = a.flow;
    for (int t = a.start; t < a.end && remaining > 0; ++t) {
      int batch = std::min(a.rate, remaining);
      csv << area.node << ',' << t << ',' << batch << '\n';
      remaining -= batch;
    }
  }
  return csv.str();
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  out << content;
}

void emit(const std::string& outPath, const std::string& content) {
  if (outPath.empty())
    std::cout << content;
  else
    write_file(outPath, content);
}

EvacMode parse_mode(const std::string& s) {
  if (s == "sim") return EvacMode::Simultaneous;
  if (s == "phased") return EvacMode::Phased;
  throw CLI::ValidationError("--mode must be sim or phased");
}

SearchObjective parse_objective(const std::string& s) {
  if (s == "maxflow") return SearchObjective::Maxflow;
  if (s == "sat") return SearchObjective::Sat;
  if (s == "clearance") return SearchObjective::Clearance;
  throw CLI::ValidationError("--objective must be maxflow, sat or clearance");
}

json partition_to_json(const Instance& inst, EvacMode mode) {
  ComponentPartition parts = partition_with_dominance(inst, mode);
  json doc;
  doc["mode"] = mode == EvacMode::Phased ? "phased" : "sim";
  doc["components"] = json::array();
  for (const auto& c : parts.components) {
    json jc;
    jc["areas"] = json::array();
    for (int ai : c.areas) jc["areas"].push_back(inst.areas[ai].node);
    jc["edges"] = c.edges;
    jc["dominatingEdges"] = c.dominatingEdges;
    doc["components"].push_back(std::move(jc));
  }
  return doc;
}

struct CliFlags {
  std::string input, output, solutionPath;
  std::string mode = "sim";
  std::string modeOverride;
  std::string objective = "maxflow";
  std::string strategy = "auto";
  std::string treeShape = "convergentForest";
  std::string ratesCsv;
  int horizon = 0;
  double timeLimit = 60.0;
  long long nodeLimit = 0;
  unsigned long long seed = 1;
  int areas = 3, maxDemand = 6, maxCapacity = 3, maxTravel = 3, arcTarget = 0;
  double cutoffProb = 0.0;
  bool noSatFirst = false, noBound = false, allEdges = false, noDecompose = false,
       noGreedy = false, ctBinary = false, sequential = false;
  bool profile = false, partition = false;
};

std::optional<std::vector<int>> parse_rates(const std::string& csv) {
  if (csv.empty()) return std::nullopt;
  std::vector<int> rates;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    rates.push_back(std::stoi(tok));
  }
  if (rates.empty()) return std::nullopt;
  return rates;
}

int cmd_solve(const CliFlags& f) {
  Instance inst = parse_instance(read_file(f.input));
  SearchObjective obj = parse_objective(f.objective);
  if (obj != SearchObjective::Clearance && f.horizon < 1) {
    std::cerr << "error: --horizon is required for maxflow/sat\n";
    return 2;
  }
  SolveOptions opts;
  opts.timeLimitSeconds = f.timeLimit;
  if (f.nodeLimit > 0) opts.nodeLimit = f.nodeLimit;
  opts.strategy = f.strategy;
  opts.rateSet = parse_rates(f.ratesCsv);
  opts.seed = f.seed;
  opts.satFirst = !f.noSatFirst;
  opts.usePreemptiveBound = !f.noBound;
  opts.useAllEdges = f.allEdges;
  opts.decompose = !f.noDecompose;
  opts.greedyFastPath = !f.noGreedy;
  opts.ctBinarySearch = f.ctBinary;
  opts.parallelComponents = !f.sequential;

  EvacMode mode = parse_mode(f.mode);
  Solution sol = mode == EvacMode::Phased ? solve_npepp(inst, obj, f.horizon, opts)
                                          : solve_nepp(inst, obj, f.horizon, opts);
  emit(f.output, serialize_solution(sol));
  std::cerr << "status=" << solve_status_name(sol.status) << " objective=" << sol.objectiveValue
            << (sol.bound ? " bound=" + std::to_string(*sol.bound) : "") << "\n";
  return sol.status == SolveStatus::Optimal || sol.status == SolveStatus::FeasibleTimeout ? 0 : 1;
}

int cmd_validate(const CliFlags& f) {
  Instance inst = parse_instance(read_file(f.input));
  Solution sol = parse_solution(read_file(f.solutionPath));
  EvacMode mode = f.modeOverride.empty() ? sol.mode : parse_mode(f.modeOverride);
  int horizon = f.horizon > 0 ? f.horizon : sol.horizon;
  ValidationReport rep = simulate(sol.perArea, inst, mode, horizon);

  json doc;
  doc["ok"] = rep.ok;
  doc["clearanceTime"] = rep.clearanceTime;
  doc["evacueesBySafeNode"] = json::object();
  for (const auto& [node, n] : rep.evacueesBySafeNode) doc["evacueesBySafeNode"][node] = n;
  doc["violations"] = json::array();
  for (const auto& v : rep.violations)
    doc["violations"].push_back(json{{"kind", violation_kind_name(v.kind)},
                                     {"entity", v.entity},
                                     {"minute", v.minute},
                                     {"detail", v.detail}});
  emit(f.output, doc.dump(2) + "\n");
  return rep.ok ? 0 : 1;
}

int cmd_bound(const CliFlags& f) {
  Instance inst = parse_instance(read_file(f.input));
  if (f.horizon < 1) {
    std::cerr << "error: --horizon is required\n";
    return 2;
  }
  std::vector<ComponentBound> per;
  long long bound = preemptive_max_flow(inst, f.horizon, &per);
  json doc;
  doc["horizon"] = f.horizon;
  doc["bound"] = bound;
  doc["perComponent"] = json::array();
  for (const auto& cb : per)
    doc["perComponent"].push_back(json{{"areas", cb.areas}, {"bound", cb.bound}});
  emit(f.output, doc.dump(2) + "\n");
  return 0;
}

int cmd_gen(const CliFlags& f) {
  GenParams p;
  p.areas = f.areas;
  p.maxDemand = f.maxDemand;
  p.maxCapacity = f.maxCapacity;
  p.maxTravel = f.maxTravel;
  p.cutoffProbability = f.cutoffProb;
  p.arcTarget = f.arcTarget;
  if (f.treeShape == "convergentForest") p.treeShape = TreeShape::ConvergentForest;
  else if (f.treeShape == "randomPaths") p.treeShape = TreeShape::RandomPaths;
  else {
    std::cerr << "error: --tree-shape must be convergentForest or randomPaths\n";
    return 2;
  }
  Instance inst = generate_instance(p, f.seed);
  emit(f.output, serialize_instance(inst));
  return 0;
}

int cmd_report(const CliFlags& f) {
  Instance inst = parse_instance(read_file(f.input));
  if (f.partition) {
    emit(f.output, partition_to_json(inst, parse_mode(f.mode)).dump(2) + "\n");
    return 0;
  }
  if (!f.profile) {
    std::cerr << "error: report needs --profile or --partition\n";
    return 2;
  }
  Solution sol = parse_solution(read_file(f.solutionPath));
  ValidationReport rep = simulate(sol.perArea, inst, sol.mode, sol.horizon);
  if (!rep.ok) {
    std::cerr << "error: solution does not validate (" << rep.violations.size()
              << " violations); profile not written\n";
    return 1;
  }
  emit(f.output, report_departure_profile(sol, inst));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Non-preemptive controlled-evacuation scheduling"};
  app.require_subcommand(1);
  CliFlags f;

  auto add_io = [&](CLI::App* cmd, bool needInput) {
    auto* opt = cmd->add_option("-i,--input", f.input, "instance document");
    if (needInput) opt->required();
    cmd->add_option("-o,--output", f.output, "output file (default: stdout)");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve a scheduling model");
  add_io(solve, true);
  solve->add_option("--mode", f.mode, "sim | phased");
  solve->add_option("--objective", f.objective, "maxflow | sat | clearance");
  solve->add_option("--horizon", f.horizon, "scheduling horizon in minutes");
  solve->add_option("--time-limit", f.timeLimit, "seconds per strongly connected component");
  solve->add_option("--node-limit", f.nodeLimit, "search node budget (0 = unlimited)");
  solve->add_option("--strategy", f.strategy, "1A2A | 1A2B | 1B2A | 1B2B | auto");
  solve->add_option("--rates", f.ratesCsv, "restrict flow rates to this comma-separated set");
  solve->add_option("--seed", f.seed, "random seed (strategy 1A)");
  solve->add_flag("--no-sat-first", f.noSatFirst, "skip the SAT warm start before maxflow");
  solve->add_flag("--no-bound", f.noBound, "disable preemptive-bound pruning and reporting");
  solve->add_flag("--all-edges", f.allEdges, "constrain every edge, not only dominating ones");
  solve->add_flag("--no-decompose", f.noDecompose, "solve without component decomposition");
  solve->add_flag("--no-greedy", f.noGreedy, "disable the polynomial phased fast path");
  solve->add_flag("--ct-binary-search", f.ctBinary, "clearance via binary search over SAT");
  solve->add_flag("--sequential", f.sequential, "solve components one at a time");

  CLI::App* validate = app.add_subcommand("validate", "replay a solution against an instance");
  add_io(validate, true);
  validate->add_option("-s,--solution", f.solutionPath, "solution document")->required();
  validate->add_option("--mode", f.modeOverride, "override mode (default: the solution's)");
  validate->add_option("--horizon", f.horizon, "override horizon (default: the solution's)");

  CLI::App* bound = app.add_subcommand("bound", "preemptive max-flow bound");
  add_io(bound, true);
  bound->add_option("--horizon", f.horizon, "scheduling horizon in minutes")->required();

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic instance");
  add_io(gen, false);
  gen->add_option("--areas", f.areas, "number of evacuation areas");
  gen->add_option("--max-demand", f.maxDemand, "demand upper bound");
  gen->add_option("--max-capacity", f.maxCapacity, "capacity upper bound");
  gen->add_option("--max-travel", f.maxTravel, "travel-time upper bound (minutes)");
  gen->add_option("--tree-shape", f.treeShape, "convergentForest | randomPaths");
  gen->add_option("--cutoff-prob", f.cutoffProb, "per-arc probability of a finite cutoff");
  gen->add_option("--arc-target", f.arcTarget, "exact arc count (0 = free)");
  gen->add_option("--seed", f.seed, "generator seed");

  CLI::App* report = app.add_subcommand("report", "partition dump or departure profile");
  add_io(report, true);
  report->add_option("-s,--solution", f.solutionPath, "solution document (for --profile)");
  report->add_flag("--profile", f.profile, "departure-profile CSV");
  report->add_flag("--partition", f.partition, "component partition document");
  report->add_option("--mode", f.mode, "dominance mode for --partition (sim | phased)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(f);
    if (validate->parsed()) return cmd_validate(f);
    if (bound->parsed()) return cmd_bound(f);
    if (gen->parsed()) return cmd_gen(f);
    if (report->parsed()) return cmd_report(f);
  } catch (const ParseError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace evacsched
