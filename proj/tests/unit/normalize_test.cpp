#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "c2pl/cexec/interp.hpp"
#include "c2pl/frontend/parser.hpp"
#include "c2pl/frontend/printer.hpp"
#include "c2pl/normalize/normalize.hpp"
#include "corpus.hpp"

using namespace c2pl;

namespace {

RunResult runAfter(const TranslationUnit& tu, const std::string& pass, const std::vector<int64_t>& input,
                   bool conservative = false) {
  NormalizeOptions o;
  o.stopAfter = pass;
  o.conservativePta = conservative;
  NormalizedUnit n = normalize(tu, o);
  return runOriginal(n.tu, input);
}

void expectPreserved(const std::string& src, const std::vector<int64_t>& input = {}) {
  TranslationUnit tu = parse(src);
  RunResult want = runOriginal(tu, input);
  for (const auto& pass : passNames()) {
    RunResult got = runAfter(tu, pass, input);
    EXPECT_TRUE(got.sameBehavior(want)) << "after " << pass << "\nwant:\n"
                                        << traceText(want.trace) << "got:\n"
                                        << traceText(got.trace) << got.errorMessage;
  }
}

const FuncDef& fn(const NormalizedUnit& n, const std::string& name) {
  const FuncDef* f = n.tu.findFunction(name);
  if (!f) throw std::runtime_error("no function " + name);
  return *f;
}

bool anyStmt(const StmtList& l, const std::function<bool(const Stmt&)>& p) {
  for (const auto& s : l) {
    if (p(*s)) return true;
    for (const StmtList* c : {&s->body, &s->alt, &s->pre, &s->step})
      if (anyStmt(*c, p)) return true;
    for (const auto& c : s->cases)
      if (anyStmt(c.body, p)) return true;
  }
  return false;
}

// No statement may follow an if that contains a return, and every path ends in a return.
bool cutFree(const StmtList& l) {
  for (size_t i = 0; i < l.size(); ++i) {
    const Stmt& s = *l[i];
    if (s.kind == StmtKind::Return) return i + 1 == l.size();
    if (s.kind == StmtKind::If) {
      const bool hasRet = anyStmt(s.body, [](const Stmt& x) { return x.kind == StmtKind::Return; }) ||
                          anyStmt(s.alt, [](const Stmt& x) { return x.kind == StmtKind::Return; });
      if (hasRet) return i + 1 == l.size() && cutFree(s.body) && cutFree(s.alt);
    }
  }
  return false;
}

}  // namespace

TEST(Normalize, PassOrder) {
  const std::vector<std::string> want = {"lower", "loops", "cuts", "pointerize", "pointsto", "flush", "ssa", "simplify"};
  EXPECT_EQ(passNames(), want);
}

TEST(Normalize, SelectFunctionBecomesTwoReturns) {
  TranslationUnit tu = parse(
      "int foo(int sel, int x, int y) { int ret; if (sel == 1) ret = x; else ret = y; return ret; }\n"
      "int main() { return foo(1, 2, 3); }");
  NormalizedUnit n = normalize(tu);
  const FuncDef& f = fn(n, "foo");
  ASSERT_EQ(f.body.size(), 1u);
  const Stmt& s = *f.body[0];
  ASSERT_EQ(s.kind, StmtKind::If);
  ASSERT_EQ(s.body.size(), 1u);
  ASSERT_EQ(s.alt.size(), 1u);
  EXPECT_EQ(s.body[0]->kind, StmtKind::Return);
  EXPECT_EQ(s.body[0]->expr->name, "x");
  EXPECT_EQ(s.alt[0]->expr->name, "y");
  EXPECT_TRUE(f.locals.empty());
}

TEST(Normalize, SsaVersionsEachAssignment) {
  TranslationUnit tu = parse("int f(int z) { int a; a = z; a = a + 1; print_int(a); return a; } int main() { return f(2); }");
  NormalizeOptions o;
  o.stopAfter = "ssa";
  NormalizedUnit n = normalize(tu, o);
  std::map<std::string, int> defs;
  anyStmt(fn(n, "f").body, [&](const Stmt& s) {
    if (s.kind == StmtKind::Expr && s.expr->kind == ExprKind::Assign && s.expr->kids[0]->kind == ExprKind::Var)
      ++defs[s.expr->kids[0]->name];
    return false;
  });
  for (const auto& [v, k] : defs) EXPECT_EQ(k, 1) << v;
  EXPECT_GE(defs.size(), 2u);
}

TEST(Normalize, CutsLeaveNothingAfterReturningIf) {
  for (const auto& p : corpus_util::corpus()) {
    NormalizeOptions o;
    o.stopAfter = "cuts";
    NormalizedUnit n = normalize(parse(p.source), o);
    for (const auto& f : n.tu.functions) EXPECT_TRUE(cutFree(f.body)) << p.name << ": " << f.name;
  }
}

TEST(Normalize, LoopsBecomeHelpers) {
  TranslationUnit tu = parse(
      "int f(int n) { int s = 0; int i; for (i = 0; i < n; i++) { int j = 0; while (j < i) { s += j; j++; } } return s; }"
      "int main() { print_int(f(6)); return 0; }");
  NormalizedUnit n = normalize(tu);
  int helpers = 0;
  for (const auto& f : n.tu.functions) {
    EXPECT_FALSE(anyStmt(f.body, [](const Stmt& s) {
      return s.kind == StmtKind::For || s.kind == StmtKind::While || s.kind == StmtKind::DoWhile;
    })) << f.name;
    if (f.helperOf == "f") ++helpers;
  }
  EXPECT_EQ(helpers, 2);
}

TEST(Normalize, AndersenExample) {
  TranslationUnit tu = parse(
      "void g(int *r) { *r = 1; }\n"
      "int main() { int a, b, c; int *p, *q; p = &a; q = p; if (a) q = &b; g(&c); return *q + c; }");
  NormalizeOptions o;
  o.stopAfter = "pointsto";
  NormalizedUnit n = normalize(tu, o);
  const std::set<std::string> pa = {PointsTo::localLoc("main", "a")};
  const std::set<std::string> pab = {PointsTo::localLoc("main", "a"), PointsTo::localLoc("main", "b")};
  EXPECT_EQ(n.pts.of("main", "p"), pa);
  EXPECT_EQ(n.pts.of("main", "q"), pab);
  EXPECT_EQ(n.pts.of("g", "r"), std::set<std::string>{PointsTo::localLoc("main", "c")});
}

TEST(Normalize, AliasingThroughPointer) {
  expectPreserved(
      "int main() { int a, b, c, d; int *p; a = 0; p = &a; a = 1; b = *p; c = 0; p = &c; c = 1; *p = 3; d = c;"
      " print_int(b); print_int(d); return 0; }");
}

TEST(Normalize, SwitchFallthroughAndLoops) {
  expectPreserved(
      "int g(int c) { int s = 0; switch (c) { case 1: s += 1; case 2: s += 2; break; default: s = 7; case 9: s++; } return s; }\n"
      "int h(int n) { int i = 0; int t = 0; while (1) { i++; if (i % 3 == 0) continue; if (i > n) break; t += i;"
      " if (t > 40) return -t; } return t; }\n"
      "int main() { int i; for (i = 0; i < 11; i++) { print_int(g(i)); print_int(h(i * 2)); } return 0; }");
}

TEST(Normalize, SideEffectOrder) {
  expectPreserved(
      "int k = 0; int bump() { k = k * 10 + 1; return k; }\n"
      "int main() { int a[4] = {0, 0, 0, 0}; int i = 0; int x = i++ + i++; a[i++] = i; print_int(x); print_int(a[2]);"
      " print_int(a[3]); x = bump() - bump(); print_int(x); x = (k > 0 && bump() > 0) || bump(); print_int(k);"
      " x = x ? bump() : -bump(); print_int(x); return 0; }");
}

TEST(Normalize, CorpusPreservedByEveryPass) {
  for (const auto& p : corpus_util::corpus()) {
    TranslationUnit tu = parse(p.source);
    RunResult want = runOriginal(tu, p.input);
    for (const auto& pass : passNames()) {
      RunResult got = runAfter(tu, pass, p.input);
      EXPECT_TRUE(got.sameBehavior(want)) << p.name << " after " << pass << ": " << got.errorMessage;
    }
  }
}

TEST(Normalize, ConservativeAgreesWithAndersen) {
  for (const auto& p : corpus_util::corpus()) {
    TranslationUnit tu = parse(p.source);
    RunResult a = runAfter(tu, "simplify", p.input, false);
    RunResult b = runAfter(tu, "simplify", p.input, true);
    EXPECT_TRUE(a.sameBehavior(b)) << p.name;
  }
}

TEST(Normalize, DumpPrintsRequestedPass) {
  TranslationUnit tu = parse("int f(int x) { while (x > 3) x--; return x; } int main() { return f(9); }");
  for (const auto& pass : passNames()) {
    std::ostringstream out;
    NormalizeOptions o;
    o.dumpPass = pass;
    o.dump = &out;
    normalize(tu, o);
    EXPECT_FALSE(out.str().empty()) << pass;
  }
}
