#include <json.hpp>

#include "c2pl/error.hpp"
#include "c2pl/translate/translate.hpp"

namespace c2pl {

using nlohmann::json;

const PredicateSpec* Manifest::find(const std::string& cName) const {
  for (const auto& f : functions)
    if (f.cName == cName) return &f;
  return nullptr;
}

std::string Manifest::toJson() const {
  json fs = json::array();
  for (const auto& f : functions) {
    json ps = json::array();
    for (const auto& p : f.params)
      ps.push_back({{"name", p.name},
                    {"kind", p.kind == ParamSpec::Kind::Value ? "value" : "address"},
                    {"size", p.size},
                    {"align", p.align}});
    json ss = json::array();
    for (const auto& s : f.slots) ss.push_back({{"name", s.name}, {"size", s.size}, {"align", s.align}});
    fs.push_back({{"cName", f.cName},
                  {"predName", f.predName},
                  {"arity", f.arity()},
                  {"helper", f.helper},
                  {"params", ps},
                  {"slots", ss},
                  {"retSize", f.retSize}});
  }
  json j{{"level", level}, {"seed", seed}, {"maskIntegers", maskIntegers}, {"conservativePta", conservativePta}, {"selected", selected}};
  if (!source.empty()) j["source"] = source;
  j["functions"] = fs;
  return j.dump(2) + "\n";
}

Manifest Manifest::fromJson(const std::string& text) {
  Manifest m;
  try {
    const json j = json::parse(text);
    m.level = j.value("level", 0);
    m.seed = j.value("seed", uint64_t{0});
    m.maskIntegers = j.value("maskIntegers", true);
    m.conservativePta = j.value("conservativePta", false);
    m.selected = j.value("selected", std::vector<std::string>{});
    m.source = j.value("source", std::string());
    for (const auto& f : j.at("functions")) {
      PredicateSpec s;
      s.cName = f.at("cName").get<std::string>();
      s.predName = f.at("predName").get<std::string>();
      s.helper = f.value("helper", false);
      for (const auto& p : f.at("params")) {
        ParamSpec ps;
        ps.name = p.at("name").get<std::string>();
        ps.kind = p.at("kind").get<std::string>() == "address" ? ParamSpec::Kind::Address : ParamSpec::Kind::Value;
        ps.size = p.at("size").get<int64_t>();
        ps.align = p.value("align", ps.size);
        s.params.push_back(ps);
      }
      for (const auto& sl : f.value("slots", json::array()))
        s.slots.push_back({sl.at("name").get<std::string>(), sl.at("size").get<int64_t>(), sl.at("align").get<int64_t>()});
      s.retSize = f.at("retSize").get<int64_t>();
      m.functions.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Syntax, std::string("manifest: ") + e.what());
  }
  return m;
}

}  // namespace c2pl
