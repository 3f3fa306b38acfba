#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <json.hpp>
#include <random>

#include "c2pl/engine/syntax.hpp"
#include "c2pl/frontend/parser.hpp"
#include "c2pl/metrics/metrics.hpp"
#include "corpus.hpp"

using namespace c2pl;

namespace {

Cfg cfgOf(const std::string& src, const std::string& fn) {
  TranslationUnit tu = parse(src);
  return buildCfg(lowerExpressions(*tu.findFunction(fn), tu));
}

Cfg fromSpans(size_t n, const std::vector<std::pair<size_t, size_t>>& edges) {
  Cfg g;
  for (size_t i = 0; i < n; ++i) g.addNode("n" + std::to_string(i));
  g.edges = edges;
  return g;
}

int64_t bruteKnots(const Cfg& g) {
  int64_t k = 0;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    for (size_t j = i + 1; j < g.edges.size(); ++j) {
      auto [a, b] = g.edges[i];
      auto [c, d] = g.edges[j];
      if (a == b || c == d) continue;
      if (a > b) std::swap(a, b);
      if (c > d) std::swap(c, d);
      if ((a < c && c < b && b < d) || (c < a && a < d && d < b)) ++k;
    }
  }
  return k;
}

Cfg randomCfg(std::mt19937_64& rng) {
  const size_t n = 2 + rng() % 80;
  const size_t e = rng() % 201;
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t i = 0; i < e; ++i) edges.push_back({rng() % n, rng() % n});
  return fromSpans(n, edges);
}

const char* kFoo =
    "int foo(int sel, int x, int y) { int ret; if (sel == 1) ret = x; else ret = y; return ret; }\n"
    "int main() { return foo(1, 2, 3); }";

}  // namespace

TEST(Cfg, StraightLine) {
  Cfg g = cfgOf("int f(int a) { int b = a + 1; b = b * 2; print_int(b); return b; } int main() { return 0; }", "f");
  EXPECT_EQ(g.nodes.size(), 1u);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(cyclomatic(g), 1);
  EXPECT_EQ(knotCount(g), 0);
}

TEST(Cfg, SelectFunctionIsADiamond) {
  Cfg g = cfgOf(kFoo, "foo");
  EXPECT_EQ(g.nodes.size(), 4u);
  const std::vector<std::pair<size_t, size_t>> want = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  auto got = g.edges;
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, want);
  EXPECT_EQ(cyclomatic(g), 2);
}

TEST(Cfg, LoopWithBreakAndContinue) {
  Cfg g = cfgOf(
      "int f(int n) { int i; int s = 0; for (i = 0; i < n; i++) { if (i == 2) continue; if (i == 5) break; s += i; }"
      " return s; } int main() { return 0; }",
      "f");
  EXPECT_EQ(g.nodes.size(), 9u);
  EXPECT_EQ(g.edges.size(), 11u);
  EXPECT_EQ(cyclomatic(g), 4);
}

TEST(Cfg, WhileTrueHasNoFallthroughExit) {
  Cfg g = cfgOf("int f(int n) { while (1) { if (n > 9) return n; n++; } } int main() { return 0; }", "f");
  // entry, header, body, return arm, join
  EXPECT_EQ(g.nodes.size(), 5u);
  EXPECT_EQ(g.edges.size(), 5u);
}

TEST(Cfg, DeadCodeAfterReturnIsDropped) {
  Cfg g = cfgOf("int f(int n) { if (n) return 1; else return 2; n = 3; } int main() { return 0; }", "f");
  EXPECT_EQ(g.nodes.size(), 3u);
  EXPECT_EQ(g.edges.size(), 2u);
}

TEST(Cfg, EveryNodeReachable) {
  for (const auto& p : corpus_util::corpus()) {
    TranslationUnit tu = parse(p.source);
    for (const auto& f : tu.functions) {
      Cfg g = buildCfg(lowerExpressions(f, tu));
      std::vector<bool> seen(g.nodes.size(), false);
      std::vector<size_t> work = {0};
      seen[0] = true;
      while (!work.empty()) {
        const size_t n = work.back();
        work.pop_back();
        for (auto [u, v] : g.edges)
          if (u == n && !seen[v]) seen[v] = true, work.push_back(v);
      }
      EXPECT_EQ(std::count(seen.begin(), seen.end(), true), static_cast<long>(g.nodes.size())) << p.name << " " << f.name;
    }
  }
}

TEST(ResolutionCfg, SelectPredicate) {
  Clause c = readProgram("pfoo(Sel, X, Y, R) :- (Sel =:= 1 -> R is X) ; (R is Y).").clauses[0];
  Cfg g = buildResolutionCfg(c);
  // head, Sel =:= 1, R is X, R is Y, join, handler, fail
  ASSERT_EQ(g.nodes.size(), 7u);
  EXPECT_EQ(g.nodes[2], "R is X");
  EXPECT_EQ(g.nodes[3], "R is Y");
  EXPECT_EQ(g.nodes[5], "handler");
  EXPECT_EQ(g.nodes[6], "fail");
  // 4 success edges, 3 failure edges, handler to the else arm and to fail
  EXPECT_EQ(g.edges.size(), 9u);
  EXPECT_EQ(cyclomatic(g), 4);
  EXPECT_GT(cyclomatic(g), cyclomatic(cfgOf(kFoo, "foo")));
  EXPECT_GT(g.edges.size(), cfgOf(kFoo, "foo").edges.size());
}

TEST(ResolutionCfg, TrivialBodies) {
  Cfg t = buildResolutionCfg(readProgram("p(R) :- true.").clauses[0]);
  EXPECT_EQ(t.nodes.size(), 2u);
  EXPECT_EQ(t.edges.size(), 1u);
  Cfg chain = buildResolutionCfg(
      readProgram("p(A, R) :- '$mark'(M), wrPtrInt(A, 4, 1), '$alloc'(4, 4, B), '$release'(M).").clauses[0]);
  EXPECT_EQ(chain.nodes.size(), 5u);
  EXPECT_EQ(chain.edges.size(), 4u);
  for (size_t i = 0; i < chain.edges.size(); ++i) EXPECT_EQ(chain.edges[i], (std::pair<size_t, size_t>{i, i + 1}));
}

TEST(ResolutionCfg, TranslatedFunctionsGainEdges) {
  for (const auto& p : corpus_util::corpus()) {
    TranslationUnit tu = parse(p.source);
    NormalizedUnit nu = normalize(tu);
    ObfuscationConfig cfg;
    cfg.level = 100;
    Translation t = translateUnit(nu, selectFunctions(tu, cfg), cfg);
    // A translated function owns its predicate and the helper predicates after it.
    std::map<std::string, size_t> predEdges;
    std::string owner;
    for (size_t i = 0; i < t.manifest.functions.size(); ++i) {
      const auto& spec = t.manifest.functions[i];
      if (!spec.helper) owner = spec.cName;
      predEdges[owner] += buildResolutionCfg(t.program.clauses[i]).edges.size();
    }
    for (const auto& name : t.selected) {
      const size_t src = buildCfg(lowerExpressions(*tu.findFunction(name), tu)).edges.size();
      EXPECT_GT(predEdges[name], src) << p.name << " " << name;
    }
  }
}

TEST(Knots, Intervals) {
  EXPECT_EQ(knotCount(fromSpans(5, {{1, 4}, {2, 3}})), 0);
  EXPECT_EQ(knotCount(fromSpans(5, {{1, 3}, {2, 4}})), 1);
  EXPECT_EQ(knotCount(fromSpans(5, {{3, 1}, {4, 2}})), 1);
  EXPECT_EQ(knotCount(fromSpans(5, {{1, 3}, {3, 4}})), 0);
  EXPECT_EQ(knotCount(fromSpans(5, {{1, 3}, {1, 3}, {2, 2}})), 0);
  EXPECT_EQ(knotCount(fromSpans(5, {{0, 1}, {1, 2}, {2, 3}})), 0);
}

TEST(KnotsProperty, MatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    Cfg g = randomCfg(rng);
    ASSERT_EQ(knotCount(g), bruteKnots(g)) << i;
  }
}

TEST(CyclomaticProperty, EdgesMinusNodesPlusTwoUnderRelabeling) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    Cfg g = randomCfg(rng);
    EXPECT_EQ(cyclomatic(g), static_cast<int64_t>(g.edges.size()) - static_cast<int64_t>(g.nodes.size()) + 2);
    std::vector<size_t> perm(g.nodes.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Cfg h = g;
    for (auto& [u, v] : h.edges) u = perm[u], v = perm[v];
    EXPECT_EQ(cyclomatic(h), cyclomatic(g));
  }
}

TEST(Report, LevelZeroIsIdentity) {
  ObfuscationConfig cfg;
  cfg.level = 0;
  for (const auto& p : corpus_util::corpus()) {
    CfgReport r = report(parse(p.source), cfg);
    for (auto field : {&FunctionMetrics::callGraphEdges, &FunctionMetrics::cfgEdges, &FunctionMetrics::basicBlocks,
                       &FunctionMetrics::cyclomatic, &FunctionMetrics::knotCount})
      EXPECT_EQ(r.ratio(field), 1.0) << p.name;
  }
}

TEST(Report, CyclomaticTotalIsSumOverFunctions) {
  TranslationUnit tu = parse(corpus_util::corpus()[5].source);
  ObfuscationConfig cfg;
  CfgReport r = report(tu, cfg);
  int64_t sum = 0;
  for (const auto& g : r.obfuscated.graphs) sum += cyclomatic(g);
  EXPECT_EQ(r.obfuscated.total().cyclomatic, sum);
  EXPECT_EQ(r.obfuscated.graphs.size(), r.obfuscated.functions.size());
}

TEST(Report, JsonAndTextAreDeterministic) {
  TranslationUnit tu = parse(kFoo);
  ObfuscationConfig cfg;
  cfg.level = 100;
  const std::string a = report(tu, cfg).toJson();
  EXPECT_EQ(a, report(tu, cfg).toJson());
  auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["selected"], nlohmann::json::array({"foo"}));
  EXPECT_EQ(j["original"]["total"]["cfgEdges"], 4);
  // residual main plus the wrapper, then the predicate
  EXPECT_EQ(j["obfuscated"]["functions"].size(), 3u);
  EXPECT_EQ(j["obfuscated"]["functions"][2]["kind"], "predicate");
  EXPECT_EQ(j["obfuscated"]["functions"][2]["cfgEdges"], 9);
  EXPECT_NE(report(tu, cfg).toText().find("cfgEdges"), std::string::npos);
}

TEST(Report, DotListsNodesAndEdges) {
  const std::string dot = toDot(cfgOf(kFoo, "foo"));
  EXPECT_EQ(dot.rfind("digraph \"foo\" {", 0), 0u);
  EXPECT_NE(dot.find("n0 -> n1;"), std::string::npos);
  EXPECT_NE(dot.find("n2 -> n3;"), std::string::npos);
}

TEST(ReportProperty, PotencyGrowsAtLevelThirty) {
  for (const auto& p : corpus_util::corpus()) {
    ObfuscationConfig cfg;
    CfgReport r = report(parse(p.source), cfg);
    const FunctionMetrics a = r.original.total(), b = r.obfuscated.total();
    EXPECT_GT(b.cfgEdges, a.cfgEdges) << p.name;
    EXPECT_GT(b.basicBlocks, a.basicBlocks) << p.name;
    EXPECT_GE(b.callGraphEdges, a.callGraphEdges) << p.name;
    EXPECT_GE(b.knotCount, a.knotCount) << p.name;
  }
}
