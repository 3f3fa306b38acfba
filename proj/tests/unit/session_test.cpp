#include <gtest/gtest.h>

#include "c2pl/cexec/session.hpp"
#include "c2pl/error.hpp"
#include "c2pl/frontend/parser.hpp"
#include "corpus.hpp"

using namespace c2pl;

namespace {

ObfuscationConfig only(std::vector<std::string> names) {
  ObfuscationConfig cfg;
  cfg.include = std::move(names);
  return cfg;
}

void expectSame(const std::string& src, const ObfuscationConfig& cfg, const std::vector<int64_t>& input = {}) {
  TranslationUnit tu = parse(src);
  RunResult want = runOriginal(tu, input);
  RunResult got = runObfuscated(tu, cfg, input);
  EXPECT_TRUE(got.sameBehavior(want)) << traceText(want.trace) << "--\n"
                                      << traceText(got.trace) << got.errorMessage;
}

const char* kSelect =
    "int foo(int sel, int x, int y) { int ret; if (sel == 1) ret = x; else ret = y; return ret; }\n"
    "int main() { int s = read_int(); print_int(foo(s, 10, 20)); return 0; }";

}  // namespace

TEST(Session, SelectFunctionBothArms) {
  TranslationUnit tu = parse(kSelect);
  for (int64_t sel : {1, 0, 2, -1}) {
    RunResult r = runObfuscated(tu, only({"foo"}), {sel});
    ASSERT_FALSE(r.error) << r.errorMessage;
    EXPECT_EQ(traceText(r.trace), sel == 1 ? "I 10\n" : "I 20\n");
  }
}

TEST(Session, ElseArmRestoresChoicePoint) {
  TranslationUnit tu = parse(kSelect);
  EngineStats taken, other;
  runObfuscated(tu, only({"foo"}), {1}, {}, {}, &taken);
  runObfuscated(tu, only({"foo"}), {2}, {}, {}, &other);
  EXPECT_GE(other.restores, 1u);
  EXPECT_GE(other.choicePoints, 1u);
  EXPECT_EQ(taken.restores, 0u);
}

TEST(Session, LevelZeroIsTheOriginal) {
  ObfuscationConfig cfg;
  cfg.level = 0;
  for (const auto& p : corpus_util::corpus()) {
    TranslationUnit tu = parse(p.source);
    RunResult got = runObfuscated(tu, cfg, p.input);
    EXPECT_TRUE(got.sameBehavior(runOriginal(tu, p.input))) << p.name;
  }
}

TEST(Session, AliasingThroughSlots) {
  const std::string src =
      "void fig() { int a, b, c, d; int *p; a = 0; p = &a; a = 1; b = *p; c = 0; p = &c; c = 1; *p = 3; d = c;"
      " print_int(b); print_int(d); }\nint main() { fig(); return 0; }";
  RunResult r = runObfuscated(parse(src), only({"fig"}), {});
  ASSERT_FALSE(r.error) << r.errorMessage;
  EXPECT_EQ(traceText(r.trace), "I 1\nI 3\n");
  ObfuscationConfig cfg = only({"fig"});
  NormalizeOptions nopts;
  nopts.conservativePta = true;
  EXPECT_EQ(traceText(runObfuscated(parse(src), cfg, {}, {}, nopts).trace), "I 1\nI 3\n");
}

TEST(Session, AlternatingFramesNest) {
  const std::string src =
      "int d5(int x) { return x + 1; }\n"
      "int d4(int x) { return d5(x) * 2; }\n"
      "int d3(int x) { return d4(x) + 3; }\n"
      "int d2(int x) { return d3(x) * 5; }\n"
      "int d1(int x) { return d2(x) - 7; }\n"
      "int main() { print_int(d1(1)); print_int(d1(2)); return 0; }";
  TranslationUnit tu = parse(src);
  NormalizedUnit nu = normalize(tu);
  ObfuscationConfig cfg = only({"d1", "d3", "d5"});
  Translation t = translateUnit(nu, selectFunctions(tu, cfg), cfg);
  Session s(nu.tu, t);
  const int64_t stackBefore = s.memory().stackTop();
  RunResult r = s.run({});
  ASSERT_FALSE(r.error) << r.errorMessage;
  EXPECT_EQ(traceText(r.trace), "I 28\nI 38\n");
  EXPECT_EQ(s.maxQueryDepth(), 3u);
  EXPECT_EQ(s.topLevelQueries(), 2u);
  EXPECT_EQ(s.heapLeaks(), 0u);
  EXPECT_EQ(s.engine().openQueries(), 0u);
  EXPECT_EQ(s.engine().heapTop(), s.engine().heapBase());
  EXPECT_EQ(s.memory().stackTop(), stackBefore);
}

TEST(Session, IndirectCallsCrossTheBoundary) {
  expectSame(
      "int inc(int x) { return x + 1; }\n"
      "int sq(int x) { return x * x; }\n"
      "int twice(int (*f)(int), int v) { return f(f(v)); }\n"
      "int main() { int (*h)(int) = sq; print_int(twice(inc, 3)); print_int(twice(sq, 3)); print_int(h(9));"
      " h = inc; print_int(h(5)); return 0; }",
      only({"twice", "sq"}));
}

TEST(Session, PrologCallsBuiltins) {
  expectSame(
      "int emit(int n) { int i; for (i = 0; i < n; i++) { putchar(65 + i); print_float(i * 0.5); } return read_int(); }\n"
      "int main() { print_int(emit(3)); return 0; }",
      only({"emit"}), {99});
}

TEST(Session, GlobalsAndHeapShared) {
  expectSame(
      "int counter = 5; long *cells;\n"
      "void bump(int by) { counter = counter + by; cells[by] = counter; }\n"
      "int main() { int i; cells = malloc(8 * 4); for (i = 0; i < 4; i++) bump(i); for (i = 0; i < 4; i++)"
      " print_int(cells[i]); print_int(counter); free(cells); return 0; }",
      only({"bump"}));
}

TEST(Session, RuntimeErrorCarriesStacks) {
  TranslationUnit tu = parse(
      "int divide(int a, int b) { return a / b; }\n"
      "int outer(int a) { return divide(a, a - 3); }\n"
      "int main() { print_int(outer(6)); print_int(outer(3)); return 0; }");
  RunResult r = runObfuscated(tu, only({"divide"}), {});
  ASSERT_TRUE(r.error);
  EXPECT_EQ(*r.error, ErrorCode::Div0);
  EXPECT_EQ(r.exitCode, 3);
  EXPECT_EQ(traceText(r.trace), "I 2\n");
  EXPECT_NE(r.errorMessage.find("c call stack: main > outer > divide"), std::string::npos) << r.errorMessage;
  EXPECT_NE(r.errorMessage.find("prolog goals:"), std::string::npos) << r.errorMessage;
  EXPECT_TRUE(r.sameBehavior(runOriginal(tu, {})));
}

TEST(Session, DepthLimitIsReported) {
  TranslationUnit tu = parse("int down(int n) { if (n == 0) return 0; return 1 + down(n - 1); }\n"
                             "int main() { print_int(down(100000)); return 0; }");
  SessionOptions opts;
  opts.engine.maxDepth = 2000;
  RunResult r = runObfuscated(tu, only({"down"}), {}, opts);
  ASSERT_TRUE(r.error);
  EXPECT_EQ(*r.error, ErrorCode::Depth);
}

// Every corpus program behaves like the original at every level and seed.
TEST(SessionProperty, CorpusDifferential) {
  const auto programs = corpus_util::corpus();
  ASSERT_GE(programs.size(), 30u);
  for (const auto& p : programs) {
    TranslationUnit tu = parse(p.source);
    RunResult want = runOriginal(tu, p.input);
    for (int level : {0, 10, 20, 30, 40, 50, 100}) {
      for (uint64_t seed : {1u, 42u, 2024u}) {
        ObfuscationConfig cfg;
        cfg.level = level;
        cfg.seed = seed;
        RunResult got = runObfuscated(tu, cfg, p.input);
        EXPECT_TRUE(got.sameBehavior(want)) << p.name << " level " << level << " seed " << seed << "\n"
                                            << got.errorMessage;
      }
    }
  }
}
