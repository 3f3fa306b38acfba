#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "c2pl/engine/term.hpp"
#include "c2pl/frontend/ast.hpp"
#include "c2pl/translate/translate.hpp"

namespace c2pl {

/// Control-flow graph of one function or predicate. Node 0 is the entry;
/// node order is syntactic and is the linear order used by knotCount.
struct Cfg {
  std::string name;
  std::vector<std::string> nodes;
  std::vector<std::pair<size_t, size_t>> edges;

  size_t addNode(std::string label) {
    nodes.push_back(std::move(label));
    return nodes.size() - 1;
  }
};

/// Basic blocks of a function after lowerExpressions. Calls are not edges.
Cfg buildCfg(const FuncDef& f);

/// Goal-level graph of a translated clause: one node per goal, a join per
/// disjunction, and when any goal can fail a failure handler node with
/// edges to each untried alternative and to a final fail node.
Cfg buildResolutionCfg(const Clause& c);

/// e - n + 2.
int64_t cyclomatic(const Cfg& g);

/// Pairs of edges whose spans strictly interleave in node order.
int64_t knotCount(const Cfg& g);

std::string toDot(const Cfg& g);

/// Static call sites, duplicates kept.
int64_t callSites(const FuncDef& f);
/// Goals that call a predicate, foreign or not; control constructs,
/// evaluation and comparison are not calls.
int64_t callSites(const Clause& c);

struct FunctionMetrics {
  std::string name;
  std::string kind;  // "c", "wrapper" or "predicate"
  int64_t callGraphEdges = 0;
  int64_t cfgEdges = 0;
  int64_t basicBlocks = 0;
  int64_t cyclomatic = 0;
  int64_t knotCount = 0;
};

struct ProgramMetrics {
  std::vector<FunctionMetrics> functions;
  std::vector<Cfg> graphs;  // parallel to functions

  FunctionMetrics total() const;
};

/// Source-level and resolution-CFG measurements, not binary ones.
struct CfgReport {
  ObfuscationConfig config;
  std::set<std::string> selected;
  ProgramMetrics original;
  ProgramMetrics obfuscated;

  /// Obfuscated over original total; nullopt when the original is 0 and
  /// the obfuscated value is not.
  std::optional<double> ratio(int64_t FunctionMetrics::*field) const;
  std::string toJson() const;
  std::string toText() const;
};

/// Original: every function of tu. Obfuscated: residual C functions, one
/// wrapper per selected function and every translated predicate.
CfgReport report(const TranslationUnit& original, const Translation& t, const ObfuscationConfig& cfg);

/// Normalizes, selects and translates, then reports.
CfgReport report(const TranslationUnit& original, const ObfuscationConfig& cfg, const NormalizeOptions& nopts = {});

}  // namespace c2pl
