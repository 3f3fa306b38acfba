#include <cstdio>

#include <json.hpp>

#include "c2pl/metrics/metrics.hpp"

namespace c2pl {

namespace {

using Field = int64_t FunctionMetrics::*;

const std::vector<std::pair<const char*, Field>>& fields() {
  static const std::vector<std::pair<const char*, Field>> f = {
      {"callGraphEdges", &FunctionMetrics::callGraphEdges},
      {"cfgEdges", &FunctionMetrics::cfgEdges},
      {"basicBlocks", &FunctionMetrics::basicBlocks},
      {"cyclomatic", &FunctionMetrics::cyclomatic},
      {"knotCount", &FunctionMetrics::knotCount},
  };
  return f;
}

FunctionMetrics measure(const Cfg& g, std::string kind, int64_t calls) {
  FunctionMetrics m;
  m.name = g.name;
  m.kind = std::move(kind);
  m.callGraphEdges = calls;
  m.cfgEdges = static_cast<int64_t>(g.edges.size());
  m.basicBlocks = static_cast<int64_t>(g.nodes.size());
  m.cyclomatic = cyclomatic(g);
  m.knotCount = knotCount(g);
  return m;
}

void add(ProgramMetrics& p, Cfg g, std::string kind, int64_t calls) {
  p.functions.push_back(measure(g, std::move(kind), calls));
  p.graphs.push_back(std::move(g));
}

// pl_mark, one argument per parameter and slot, pl_var, pl_query, the
// result read and pl_release.
int64_t wrapperCalls(const PredicateSpec& s, bool returnsValue) {
  return static_cast<int64_t>(s.params.size() + s.slots.size()) + 4 + (returnsValue ? 1 : 0);
}

nlohmann::json metricsJson(const FunctionMetrics& m) {
  nlohmann::json j;
  j["name"] = m.name;
  j["kind"] = m.kind;
  for (const auto& [name, field] : fields()) j[name] = m.*field;
  return j;
}

nlohmann::json programJson(const ProgramMetrics& p) {
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : p.functions) fs.push_back(metricsJson(f));
  nlohmann::json total = metricsJson(p.total());
  total.erase("name");
  total.erase("kind");
  return {{"functions", fs}, {"total", total}};
}

}  // namespace

FunctionMetrics ProgramMetrics::total() const {
  FunctionMetrics t;
  t.name = "total";
  for (const auto& f : functions)
    for (const auto& [name, field] : fields()) t.*field += f.*field;
  return t;
}

std::optional<double> CfgReport::ratio(Field field) const {
  const int64_t a = original.total().*field;
  const int64_t b = obfuscated.total().*field;
  if (a == 0) return b == 0 ? std::optional<double>(1.0) : std::nullopt;
  return static_cast<double>(b) / static_cast<double>(a);
}

std::string CfgReport::toJson() const {
  nlohmann::json j;
  j["measurement"] = "source-level CFGs and resolution CFGs, not binary-level graphs";
  j["level"] = config.level;
  j["seed"] = config.seed;
  j["maskIntegers"] = config.maskIntegers;
  j["selected"] = selected;
  j["original"] = programJson(original);
  j["obfuscated"] = programJson(obfuscated);
  nlohmann::json r;
  for (const auto& [name, field] : fields()) {
    auto v = ratio(field);
    r[name] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  }
  j["ratios"] = r;
  return j.dump(2) + "\n";
}

std::string CfgReport::toText() const {
  std::string out = "# source-level CFGs and resolution CFGs, not binary-level graphs\n";
  out += "# level " + std::to_string(config.level) + ", seed " + std::to_string(config.seed) + ", " +
         std::to_string(selected.size()) + " function(s) translated\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-16s %10s %12s %8s\n", "metric", "original", "obfuscated", "ratio");
  out += line;
  const FunctionMetrics a = original.total(), b = obfuscated.total();
  for (const auto& [name, field] : fields()) {
    const auto r = ratio(field);
    char rt[32];
    if (r) std::snprintf(rt, sizeof rt, "%.3f", *r);
    else std::snprintf(rt, sizeof rt, "n/a");
    std::snprintf(line, sizeof line, "%-16s %10lld %12lld %8s\n", name, static_cast<long long>(a.*field),
                  static_cast<long long>(b.*field), rt);
    out += line;
  }
  return out;
}

CfgReport report(const TranslationUnit& original, const Translation& t, const ObfuscationConfig& cfg) {
  CfgReport r;
  r.config = cfg;
  r.selected = t.selected;
  for (const auto& f : original.functions) {
    const Cfg g = buildCfg(lowerExpressions(f, original));
    add(r.original, g, "c", callSites(f));
    const PredicateSpec* spec = t.selected.count(f.name) ? t.manifest.find(f.name) : nullptr;
    if (!spec) {
      add(r.obfuscated, g, "c", callSites(f));
      continue;
    }
    Cfg w;
    w.name = f.name;
    w.addNode("B0");
    add(r.obfuscated, std::move(w), "wrapper", wrapperCalls(*spec, !f.retType.isVoid()));
  }
  for (const auto& c : t.program.clauses) add(r.obfuscated, buildResolutionCfg(c), "predicate", callSites(c));
  return r;
}

CfgReport report(const TranslationUnit& original, const ObfuscationConfig& cfg, const NormalizeOptions& nopts) {
  NormalizedUnit nu = normalize(original, nopts);
  return report(original, translateUnit(nu, selectFunctions(original, cfg), cfg), cfg);
}

}  // namespace c2pl
