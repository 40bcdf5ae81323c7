#include "evacsched/model.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

#include "json.hpp"

namespace evacsched {

using json = nlohmann::ordered_json;

const Node* Instance::find_node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

const Arc* Instance::find_arc(const std::string& id) const {
  for (const auto& a : arcs)
    if (a.id == id) return &a;
  return nullptr;
}

int Instance::area_index(const std::string& node) const {
  for (size_t i = 0; i < areas.size(); ++i)
    if (areas[i].node == node) return static_cast<int>(i);
  return -1;
}

namespace {

[[noreturn]] void semantic_error(const std::string& msg) {
  throw ParseError(ParseError::Kind::Semantic, msg);
}

[[noreturn]] void syntax_error(const std::string& msg) {
  throw ParseError(ParseError::Kind::Syntax, msg);
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void reject_unknown_fields(const json& obj, const std::set<std::string>& known,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) syntax_error("unknown field '" + it.key() + "' in " + where);
}

int require_int(const json& obj, const std::string& field, const std::string& where) {
  if (!obj.contains(field)) syntax_error("missing field '" + field + "' in " + where);
  const json& v = obj.at(field);
  if (!v.is_number_integer()) syntax_error("field '" + field + "' in " + where + " must be an integer");
  return v.get<int>();
}

double require_number(const json& obj, const std::string& field, const std::string& where) {
  if (!obj.contains(field)) syntax_error("missing field '" + field + "' in " + where);
  const json& v = obj.at(field);
  if (!v.is_number()) syntax_error("field '" + field + "' in " + where + " must be a number");
  return v.get<double>();
}

std::string require_string(const json& obj, const std::string& field, const std::string& where) {
  if (!obj.contains(field)) syntax_error("missing field '" + field + "' in " + where);
  const json& v = obj.at(field);
  if (!v.is_string()) syntax_error("field '" + field + "' in " + where + " must be a string");
  return v.get<std::string>();
}

}  // namespace

void validate_instance(const Instance& inst) {
  std::unordered_map<std::string, const Node*> nodeById;
  for (const auto& n : inst.nodes) {
    if (!valid_id(n.id)) semantic_error("node id '" + n.id + "' must match [A-Za-z0-9_-]+");
    if (!nodeById.emplace(n.id, &n).second) semantic_error("duplicate node id '" + n.id + "'");
  }
  std::unordered_map<std::string, const Arc*> arcById;
  for (const auto& a : inst.arcs) {
    if (!valid_id(a.id)) semantic_error("arc id '" + a.id + "' must match [A-Za-z0-9_-]+");
    if (!arcById.emplace(a.id, &a).second) semantic_error("duplicate arc id '" + a.id + "'");
    if (!nodeById.count(a.tail)) semantic_error("arc '" + a.id + "' references missing tail node '" + a.tail + "'");
    if (!nodeById.count(a.head)) semantic_error("arc '" + a.id + "' references missing head node '" + a.head + "'");
    if (a.travelTime < 0) semantic_error("arc '" + a.id + "' has negative travel time");
    if (!(a.capacity > 0)) semantic_error("arc '" + a.id + "' must have positive capacity");
    if (!(a.cutoff > 0)) semantic_error("arc '" + a.id + "' must have positive cutoff");
  }
  std::set<std::string> areaNodes;
  for (const auto& k : inst.areas) {
    if (!nodeById.count(k.node)) semantic_error("area references missing node '" + k.node + "'");
    if (nodeById.at(k.node)->kind != NodeKind::Evacuation)
      semantic_error("area node '" + k.node + "' is not an evacuation node");
    if (!areaNodes.insert(k.node).second) semantic_error("duplicate area for node '" + k.node + "'");
    if (k.demand < 1) semantic_error("area '" + k.node + "' must have demand >= 1");
    if (k.path.empty()) semantic_error("area '" + k.node + "' has an empty path");
    std::string at = k.node;
    for (const auto& arcId : k.path) {
      auto it = arcById.find(arcId);
      if (it == arcById.end())
        semantic_error("area '" + k.node + "' path references missing arc '" + arcId + "'");
      if (it->second->tail != at)
        semantic_error("area '" + k.node + "' path is disconnected at arc '" + arcId + "'");
      at = it->second->head;
    }
    if (nodeById.at(at)->kind != NodeKind::Safe)
      semantic_error("area '" + k.node + "': path must end at safe node (ends at '" + at + "')");
    if (k.minStart && *k.minStart < 0) semantic_error("area '" + k.node + "' has negative minStart");
    if (k.maxEnd && *k.maxEnd < 0) semantic_error("area '" + k.node + "' has negative maxEnd");
  }
  // Every evacuation node must carry a demand entry.
  for (const auto& n : inst.nodes)
    if (n.kind == NodeKind::Evacuation && !areaNodes.count(n.id))
      semantic_error("evacuation node '" + n.id + "' has no area entry");
}

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    syntax_error(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) syntax_error("top-level document must be an object");
  reject_unknown_fields(doc, {"nodes", "arcs", "areas", "name", "seed"}, "document");
  for (const char* field : {"nodes", "arcs", "areas"}) {
    if (!doc.contains(field)) syntax_error(std::string("missing field '") + field + "'");
    if (!doc.at(field).is_array()) syntax_error(std::string("field '") + field + "' must be an array");
  }

  Instance inst;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) syntax_error("field 'name' must be a string");
    inst.name = doc.at("name").get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
      syntax_error("field 'seed' must be an integer");
    inst.seed = doc.at("seed").get<unsigned long long>();
  }

  for (const json& jn : doc.at("nodes")) {
    if (!jn.is_object()) syntax_error("node entries must be objects");
    reject_unknown_fields(jn, {"id", "kind"}, "node");
    Node n;
    n.id = require_string(jn, "id", "node");
    std::string kind = require_string(jn, "kind", "node '" + n.id + "'");
    if (kind == "evacuation") n.kind = NodeKind::Evacuation;
    else if (kind == "transit") n.kind = NodeKind::Transit;
    else if (kind == "safe") n.kind = NodeKind::Safe;
    else syntax_error("node '" + n.id + "' has unknown kind '" + kind + "'");
    inst.nodes.push_back(std::move(n));
  }

  for (const json& ja : doc.at("arcs")) {
    if (!ja.is_object()) syntax_error("arc entries must be objects");
    reject_unknown_fields(ja, {"id", "tail", "head", "travelTime", "capacity", "cutoff"}, "arc");
    Arc a;
    a.id = require_string(ja, "id", "arc");
    a.tail = require_string(ja, "tail", "arc '" + a.id + "'");
    a.head = require_string(ja, "head", "arc '" + a.id + "'");
    a.travelTime = require_number(ja, "travelTime", "arc '" + a.id + "'");
    a.capacity = require_number(ja, "capacity", "arc '" + a.id + "'");
    if (ja.contains("cutoff") && !ja.at("cutoff").is_null()) {
      if (!ja.at("cutoff").is_number()) syntax_error("arc '" + a.id + "': cutoff must be a number or null");
      a.cutoff = ja.at("cutoff").get<double>();
    }
    inst.arcs.push_back(std::move(a));
  }

  for (const json& jk : doc.at("areas")) {
    if (!jk.is_object()) syntax_error("area entries must be objects");
    reject_unknown_fields(jk, {"node", "demand", "path", "minStart", "maxEnd"}, "area");
    EvacArea k;
    k.node = require_string(jk, "node", "area");
    k.demand = require_int(jk, "demand", "area '" + k.node + "'");
    if (!jk.contains("path") || !jk.at("path").is_array())
      syntax_error("area '" + k.node + "' must have a path array");
    for (const json& p : jk.at("path")) {
      if (!p.is_string()) syntax_error("area '" + k.node + "' path entries must be arc id strings");
      k.path.push_back(p.get<std::string>());
    }
    if (jk.contains("minStart")) k.minStart = require_int(jk, "minStart", "area '" + k.node + "'");
    if (jk.contains("maxEnd")) k.maxEnd = require_int(jk, "maxEnd", "area '" + k.node + "'");
    inst.areas.push_back(std::move(k));
  }

  validate_instance(inst);
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  json doc;
  if (!inst.name.empty()) doc["name"] = inst.name;
  if (inst.seed) doc["seed"] = *inst.seed;
  doc["nodes"] = json::array();
  for (const auto& n : inst.nodes) {
    const char* kind = n.kind == NodeKind::Evacuation ? "evacuation"
                       : n.kind == NodeKind::Transit  ? "transit"
                                                      : "safe";
    doc["nodes"].push_back(json{{"id", n.id}, {"kind", kind}});
  }
  doc["arcs"] = json::array();
  for (const auto& a : inst.arcs) {
    json ja{{"id", a.id}, {"tail", a.tail}, {"head", a.head},
            {"travelTime", a.travelTime}, {"capacity", a.capacity}};
    ja["cutoff"] = a.hasCutoff() ? json(a.cutoff) : json(nullptr);
    doc["arcs"].push_back(std::move(ja));
  }
  doc["areas"] = json::array();
  for (const auto& k : inst.areas) {
    json jk{{"node", k.node}, {"demand", k.demand}, {"path", k.path}};
    if (k.minStart) jk["minStart"] = *k.minStart;
    if (k.maxEnd) jk["maxEnd"] = *k.maxEnd;
    doc["areas"].push_back(std::move(jk));
  }
  return doc.dump(2) + "\n";
}

PathMetrics path_metrics(const EvacArea& area, const Instance& instance) {
  PathMetrics m;
  int offset = 0;
  bool anyCutoff = false;
  double minSlack = std::numeric_limits<double>::infinity();
  m.pathCapacity = std::numeric_limits<double>::infinity();
  for (const auto& arcId : area.path) {
    const Arc* a = instance.find_arc(arcId);
    m.offsets[arcId] = offset;
    int step = static_cast<int>(std::ceil(a->travelTime));
    offset += step;  // offset is now tau_{k, a.head}
    m.pathCapacity = std::min(m.pathCapacity, a->capacity);
    if (a->hasCutoff()) {
      anyCutoff = true;
      minSlack = std::min(minSlack, a->cutoff - offset);
    }
  }
  m.transitCeil = offset;
  m.pathCapacityFloor = static_cast<int>(std::floor(m.pathCapacity));
  if (anyCutoff) m.lastDep = static_cast<int>(std::floor(minSlack));
  return m;
}

FeasibleWindow feasible_window(const EvacArea& area, const PathMetrics& metrics, int horizon) {
  FeasibleWindow w;
  w.startLb = std::max(0, area.minStart.value_or(0));
  long long endUb = static_cast<long long>(horizon) - metrics.transitCeil;
  if (metrics.lastDep) endUb = std::min(endUb, static_cast<long long>(*metrics.lastDep));
  if (area.maxEnd) endUb = std::min(endUb, static_cast<long long>(*area.maxEnd));
  w.endUb = static_cast<int>(std::max<long long>(endUb, -1));
  return w;
}

TaskState init_task_domains(const EvacArea& area, const PathMetrics& metrics, int horizon,
                            EvacMode mode, const std::optional<std::vector<int>>& rateSet,
                            bool* unevacuable) {
  if (unevacuable) *unevacuable = false;
  FeasibleWindow w = feasible_window(area, metrics, horizon);

  IntDomain rate(1, std::min(area.demand, metrics.pathCapacityFloor));
  if (rateSet) rate.intersect_values(*rateSet);
  if (mode == EvacMode::Phased && !rate.empty()) rate.tighten_min(rate.ub());

  TaskState t;
  if (w.endUb < 0 || w.startLb > w.endUb || rate.empty()) {
    // Degenerate area: fixed unevacuated so objectives stay well-defined.
    if (unevacuable) *unevacuable = true;
    int s = std::max(0, w.startLb);
    t.start = IntDomain::singleton(s);
    t.dur = IntDomain::singleton(0);
    t.end = IntDomain::singleton(s);
    t.flow = IntDomain::singleton(0);
    t.rate = IntDomain::singleton(0);
    return t;
  }
  t.start = IntDomain(w.startLb, w.endUb);
  t.end = IntDomain(0, w.endUb);
  t.dur = IntDomain(0, area.demand);
  t.flow = IntDomain(0, area.demand);
  t.rate = rate;
  return t;
}

int clearance_horizon_ub(const Instance& instance) {
  int maxTransit = 0;
  long long sumDemand = 0;
  for (const auto& k : instance.areas) {
    maxTransit = std::max(maxTransit, path_metrics(k, instance).transitCeil);
    sumDemand += k.demand;
  }
  return static_cast<int>(maxTransit + sumDemand);
}

long long total_demand(const Instance& instance) {
  long long s = 0;
  for (const auto& k : instance.areas) s += k.demand;
  return s;
}

}  // namespace evacsched
