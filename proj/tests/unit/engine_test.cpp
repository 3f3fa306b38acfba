#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "c2pl/cexec/memory.hpp"
#include "c2pl/engine/engine.hpp"
#include "c2pl/engine/syntax.hpp"
#include "c2pl/error.hpp"
#include "random_terms.hpp"

using namespace c2pl;
using namespace c2pl::test_terms;

namespace {

// Collects every binding of Var over all solutions of goal.
std::vector<std::string> solutions(Engine& e, const std::string& goal, const std::string& var) {
  std::vector<std::string> out;
  size_t q = e.openQuery(*readTerm(goal));
  while (e.nextSolution(q)) out.push_back(writeTerm(*e.toTerm(e.queryVar(q, var))));
  e.closeQuery(q);
  return out;
}

std::string first(Engine& e, const std::string& goal, const std::string& var) {
  auto s = solutions(e, goal, var);
  return s.empty() ? "<none>" : s.front();
}

ErrorCode errorOf(Engine& e, const std::string& goal) {
  try {
    size_t q = e.openQuery(*readTerm(goal));
    e.nextSolution(q);
  } catch (const Error& err) {
    e.reset();
    return err.code();
  }
  e.reset();
  ADD_FAILURE() << "no error for " << goal;
  return ErrorCode::State;
}

}  // namespace

TEST(Syntax, ReadsClausesAndOperators) {
  Program p = readProgram(
      "% comment\n"
      "inc(Input, R) :- R is Input + 1.\n"
      "pfoo(Sel,X,Y,R) :- (Sel =:= 1 -> R is X);(R is Y).\n"
      "fact(0x1F, 0'a, 16#ff, -3, 2.5e1, 'it''s'). /* block */\n");
  ASSERT_EQ(p.clauses.size(), 3u);
  EXPECT_EQ(writeClause(p.clauses[0]), "inc(Input, R) :- R is Input + 1.");
  EXPECT_EQ(writeClause(p.clauses[1]), "pfoo(Sel, X, Y, R) :- Sel =:= 1 -> R is X ; R is Y.");
  EXPECT_EQ(writeClause(p.clauses[2]), "fact(0x1F, 97, 255, -3, 25.0, 'it\\'s').");
  EXPECT_EQ(static_cast<int64_t>(p.clauses[2].head->args[0]->ival), 31);
}

TEST(Syntax, PrecedenceAndAssociativity) {
  EXPECT_EQ(*readTerm("1 - 2 - 3"), *readTerm("-(-(1, 2), 3)"));
  EXPECT_EQ(*readTerm("a , b , c"), *readTerm("','(a, ','(b, c))"));
  EXPECT_EQ(*readTerm("X is A + B * C"), *readTerm("is(X, +(A, *(B, C)))"));
  EXPECT_EQ(*readTerm("- 1"), *readTerm("-(1)"));
  EXPECT_EQ(*readTerm("-1"), *Term::integer(-1));
  EXPECT_EQ(*readTerm("a - -1"), *readTerm("-(a, -1)"));
  EXPECT_EQ(*readTerm("\\+ \\+ a"), *readTerm("\\+(\\+(a))"));
  EXPECT_EQ(writeTerm(*readTerm("(a :- b)")), "a :- b");
  EXPECT_EQ(writeTerm(*readTerm("f((a , b))")), "f((a, b))");
  EXPECT_EQ(writeTerm(*readTerm("1 - (2 - 3)")), "1 - (2 - 3)");
  EXPECT_EQ(writeTerm(*readTerm("-(1)")), "- (1)");
  EXPECT_EQ(writeTerm(*readTerm("[1,2|T]")), "[1, 2 | T]");
}

TEST(Syntax, ErrorsCarryPosition) {
  try {
    readProgram("a :- b.\nc :- (d.\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Syntax);
    EXPECT_NE(std::string(e.what()).find("2:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(readProgram("a :- b"), Error);
  EXPECT_THROW(readProgram("'unterminated"), Error);
}

TEST(SyntaxProperty, WriteThenReadIsIdentity) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    TermPtr t = randomTerm(rng, 4);
    std::string text = writeTerm(*t);
    TermPtr back = readTerm(text);
    ASSERT_EQ(*back, *t) << text;
  }
}

TEST(Engine, UnifyNestedStructures) {
  Engine e;
  size_t a = e.buildTerm(*readTerm("k(s(g), Y)"));
  size_t b = e.buildTerm(*readTerm("k(X, t(k))"));
  ASSERT_TRUE(e.unify(a, b));
  EXPECT_EQ(writeTerm(*e.toTerm(a)), "k(s(g), t(k))");
  EXPECT_EQ(writeTerm(*e.toTerm(e.cell(b).ref + 1)), "s(g)");
  EXPECT_EQ(writeTerm(*e.toTerm(e.cell(a).ref + 2)), "t(k)");
}

TEST(Engine, UnifyTrivialCases) {
  Engine e;
  size_t x = e.buildTerm(*readTerm("X"));
  size_t mark = e.trailMark();
  EXPECT_TRUE(e.unify(x, x));
  EXPECT_EQ(e.trailMark(), mark);
  size_t a = e.buildTerm(*readTerm("f(X, X)"));
  size_t b = e.buildTerm(*readTerm("f(1, 2)"));
  EXPECT_FALSE(e.unify(a, b));
  e.undoTrail(mark);
  EXPECT_EQ(e.cell(e.deref(e.cell(a).ref + 1)).tag, Tag::Ref);
}

TEST(Engine, IncAndPfoo) {
  Engine e;
  e.consultText(
      "inc(Input, R) :- R is Input + 1.\n"
      "pfoo(Sel, X, Y, R) :- (Sel =:= 1 -> R is X ; R is Y).\n");
  EXPECT_EQ(solutions(e, "inc(1, R)", "R"), std::vector<std::string>{"2"});
  e.resetStats();
  EXPECT_EQ(solutions(e, "pfoo(0, 7, 9, R)", "R"), std::vector<std::string>{"9"});
  EXPECT_GE(e.stats().restores, 1u);
  EXPECT_EQ(solutions(e, "pfoo(1, 7, 9, R)", "R"), std::vector<std::string>{"7"});
  EXPECT_TRUE(solutions(e, "fail", "X").empty());
}

TEST(Engine, BacktrackingOverClauses) {
  Engine e;
  e.consultText(
      "color(red). color(green). color(blue).\n"
      "pair(X, Y) :- color(X), color(Y), X \\== Y.\n"
      "first(X) :- color(X), !.\n"
      "notred(X) :- color(X), \\+ X = red.\n");
  EXPECT_EQ(solutions(e, "color(C)", "C"), (std::vector<std::string>{"red", "green", "blue"}));
  EXPECT_EQ(solutions(e, "pair(X, Y)", "X").size(), 6u);
  EXPECT_EQ(solutions(e, "first(X)", "X"), std::vector<std::string>{"red"});
  EXPECT_EQ(solutions(e, "notred(X)", "X"), (std::vector<std::string>{"green", "blue"}));
  EXPECT_EQ(solutions(e, "(color(X), X = blue ; X = none)", "X"), (std::vector<std::string>{"blue", "none"}));
  EXPECT_EQ(solutions(e, "(color(X) -> true ; X = none)", "X"), std::vector<std::string>{"red"});
}

TEST(Engine, Arithmetic) {
  Engine e;
  EXPECT_EQ(first(e, "X is 1 + 1", "X"), "2");
  const uint64_t oracle = (uint64_t{0x7FFFFFFF} + 1) & 0xFFFFFFFFu;
  EXPECT_EQ(first(e, "X is (16#7FFFFFFF + 1) /\\ 16#FFFFFFFF", "X"), std::to_string(oracle));
  EXPECT_EQ(first(e, "X is float(3)", "X"), "3.0");
  EXPECT_EQ(first(e, "X is -7 // 2", "X"), std::to_string(-7 / 2));
  EXPECT_EQ(first(e, "X is -7 rem 2", "X"), std::to_string(-7 % 2));
  EXPECT_EQ(first(e, "X is -7 mod 2", "X"), "1");
  EXPECT_EQ(first(e, "X is 1 << 40 >> 38", "X"), "4");
  EXPECT_EQ(first(e, "X is \\ 0", "X"), "-1");
  EXPECT_EQ(first(e, "X is truncate(-2.7)", "X"), "-2");
  EXPECT_EQ(first(e, "X is 7 / 2", "X"), "3.5");
  EXPECT_EQ(first(e, "X is float32(3.2)", "X"), "3.200000047683716");
  EXPECT_EQ(first(e, "X is 1.0 / 0.0", "X"), "inf");
  EXPECT_EQ(first(e, "(2.0 =:= 2 -> X = yes ; X = no)", "X"), "yes");
  EXPECT_EQ(errorOf(e, "X is Y + 1"), ErrorCode::Unbound);
  EXPECT_EQ(errorOf(e, "X is foo + 1"), ErrorCode::Type);
  EXPECT_EQ(errorOf(e, "X is 1 // 0"), ErrorCode::Div0);
  EXPECT_EQ(errorOf(e, "X is 2.0 /\\ 1"), ErrorCode::Type);
}

TEST(Engine, OverflowOnlyWhenChecked) {
  Engine wrap;
  EXPECT_EQ(first(wrap, "X is 16#7FFFFFFFFFFFFFFF * 4", "X"), "36893488147419103228");
  EngineOptions o;
  o.checkOverflow = true;
  Engine checkedEngine(o);
  EXPECT_EQ(first(checkedEngine, "X is 16#FFFFFFFFFFFFFFF - 1", "X"), "1152921504606846974");
  EXPECT_EQ(errorOf(checkedEngine, "X is 16#FFFFFFFFFFFFFFF + 1"), ErrorCode::Overflow);
}

TEST(EngineProperty, MaskedAdditionMatchesInt32) {
  Engine e;
  e.consultText("add(A, B, R) :- R is (((A + B) /\\ 16#FFFFFFFF) xor 16#80000000) - 16#80000000.\n");
  std::vector<int32_t> edge = {0, 1, -1, 2, -2, INT32_MAX, INT32_MIN, INT32_MAX - 1, INT32_MIN + 1, 0x40000000};
  std::mt19937 rng(11);
  std::vector<std::pair<int32_t, int32_t>> cases;
  for (int32_t a : edge)
    for (int32_t b : edge) cases.emplace_back(a, b);
  for (int i = 0; i < 3000; ++i) cases.emplace_back(static_cast<int32_t>(rng()), static_cast<int32_t>(rng()));
  for (auto [a, b] : cases) {
    const auto expect = static_cast<int32_t>(static_cast<uint32_t>(a) + static_cast<uint32_t>(b));
    size_t q = e.openQuery("add", {QArg::integer(a), QArg::integer(b), QArg::var()});
    ASSERT_TRUE(e.nextSolution(q));
    ASSERT_EQ(static_cast<int64_t>(e.intArg(e.queryArg(q, 2))), expect) << a << " + " << b;
    e.closeQuery(q);
  }
}

TEST(Engine, MemoryPredicates) {
  SimMemory mem(0x10000);
  Engine e;
  e.attachMemory(&mem);
  const int64_t a = mem.malloc(16);
  const std::string p = std::to_string(a);
  EXPECT_EQ(first(e, "wrPtrInt(" + p + ", 4, -1), rdPtrInt(" + p + ", 4, C)", "C"), "4294967295");
  EXPECT_EQ(first(e, "wrPtrFloat(" + p + ", 8, 2.5), rdPtrFloat(" + p + ", 8, C)", "C"), "2.5");
  EXPECT_EQ(first(e, "wrPtrFloat(" + p + ", 4, 3.2), rdPtrInt(" + p + ", 4, C)", "C"), std::to_string(0x404CCCCD));
  EXPECT_EQ(errorOf(e, "wrPtrInt(" + p + ", 4, V)"), ErrorCode::Inst);
  EXPECT_EQ(errorOf(e, "rdPtrInt(8, 4, V)"), ErrorCode::Segv);
}

TEST(Engine, Errors) {
  Engine e;
  e.consultText("loop(N) :- M is N + 1, loop(M).\n");
  EXPECT_EQ(errorOf(e, "nothere(1)"), ErrorCode::UnknownPred);
  EngineOptions o;
  o.maxDepth = 1000;
  Engine shallow(o);
  shallow.consultText("loop(N) :- M is N + 1, loop(M).\n");
  try {
    size_t q = shallow.openQuery(*readTerm("loop(0)"));
    shallow.nextSolution(q);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::Depth);
    EXPECT_NE(std::string(err.what()).find("loop/1 <- loop/1"), std::string::npos);
  }
  EngineOptions small;
  small.maxHeapCells = 5000;
  Engine tiny(small);
  tiny.consultText("loop(N) :- M is N + 1, loop(M).\n");
  EXPECT_EQ(errorOf(tiny, "loop(0)"), ErrorCode::Oom);
  EXPECT_EQ(tiny.heapTop(), tiny.heapBase());
}

TEST(Engine, QueryLifoAndHeapReset) {
  Engine e;
  e.consultText("inc(I, R) :- R is I + 1.\n");
  const size_t base = e.heapTop();
  size_t q1 = e.openQuery("inc", {QArg::integer(1), QArg::var()});
  ASSERT_TRUE(e.nextSolution(q1));
  size_t q2 = e.openQuery("inc", {QArg::integer(5), QArg::var()});
  EXPECT_THROW(e.closeQuery(q1), Error);
  try {
    e.closeQuery(q1);
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::State);
  }
  ASSERT_TRUE(e.nextSolution(q2));
  EXPECT_EQ(e.intArg(e.queryArg(q2, 1)), 6);
  e.closeQuery(q2);
  EXPECT_EQ(e.intArg(e.queryArg(q1, 1)), 2);
  e.closeQuery(q1);
  EXPECT_EQ(e.heapTop(), base);
  EXPECT_EQ(e.heapTop(), e.heapBase());
  EXPECT_EQ(e.choicePointCount(), 0u);
}

TEST(Engine, ReentrantForeignCalls) {
  // p(N, R) calls the host, which opens a nested query on p(N-1, _).
  Engine e;
  e.consultText("p(0, R) :- R is 100.\np(N, R) :- N > 0, host(N, V), R is V + 1.\n");
  size_t maxOpen = 0;
  e.registerForeign("host", 2, [&](Engine& eng, std::span<const size_t> a) {
    const Int128 n = eng.intArg(a[0]);
    maxOpen = std::max(maxOpen, eng.openQueries());
    size_t q = eng.openQuery("p", {QArg::integer(n - 1), QArg::var()});
    if (!eng.nextSolution(q)) {
      eng.closeQuery(q);
      return false;
    }
    const Int128 v = eng.intArg(eng.queryArg(q, 1));
    eng.closeQuery(q);
    return eng.unify(a[1], eng.newInt(v * 2));
  });
  EXPECT_EQ(solutions(e, "p(3, R)", "R"), std::vector<std::string>{"807"});
  EXPECT_EQ(maxOpen, 3u);
  EXPECT_EQ(e.openQueries(), 0u);
  EXPECT_EQ(e.heapTop(), e.heapBase());
}

TEST(Engine, TraceStream) {
  Engine e;
  std::ostringstream os;
  e.setTrace(&os);
  e.consultText("pfoo(Sel, X, Y, R) :- (Sel =:= 1 -> R is X ; R is Y).\n");
  first(e, "pfoo(0, 7, 9, R)", "R");
  EXPECT_EQ(os.str(), "push 0 alt\nrestore 0\n");
}

TEST(EngineProperty, TrailRestoresHeapExactly) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    Engine e;
    size_t a = e.buildTerm(*randomTerm(rng, 4));
    size_t b = e.buildTerm(*renameVars(randomTerm(rng, 4), "b"));
    std::vector<Cell> before;
    for (size_t k = 0; k < e.heapTop(); ++k) before.push_back(e.cell(k));
    const size_t mark = e.trailMark();
    e.unify(a, b);
    e.undoTrail(mark);
    for (size_t k = 0; k < before.size(); ++k) {
      ASSERT_EQ(e.cell(k).tag, before[k].tag);
      if (before[k].tag == Tag::Ref) ASSERT_EQ(e.cell(k).ref, before[k].ref);
    }
  }
}

TEST(EngineProperty, UnifyIsSymmetric) {
  std::mt19937_64 rng(5);
  int successes = 0;
  for (int i = 0; i < 1000; ++i) {
    TermPtr x = randomTerm(rng, 3);
    TermPtr y = renameVars(randomTerm(rng, 3), "b");
    if (i % 3 == 0) y = renameVars(x, "b");
    std::string ground[2];
    bool ok[2];
    for (int dir = 0; dir < 2; ++dir) {
      Engine e;
      size_t a = e.buildTerm(*x);
      size_t b = e.buildTerm(*y);
      ok[dir] = dir == 0 ? e.unify(a, b) : e.unify(b, a);
      if (ok[dir]) {
        ground[dir] = writeTerm(*e.toTerm(a)) + " / " + writeTerm(*e.toTerm(b));
      }
    }
    ASSERT_EQ(ok[0], ok[1]) << writeTerm(*x) << " = " << writeTerm(*y);
    if (ok[0]) {
      ++successes;
      ASSERT_EQ(anonymized(ground[0]), anonymized(ground[1]));
    }
  }
  EXPECT_GT(successes, 300);
}

TEST(EngineProperty, DeterministicAcrossRuns) {
  const char* prog =
      "n(1). n(2). n(3).\n"
      "t(X, Y, Z) :- n(X), n(Y), Z is X * 10 + Y, Z mod 3 =\\= 0.\n";
  std::vector<std::string> ref;
  for (int run = 0; run < 5; ++run) {
    Engine e;
    e.consultText(prog);
    auto s = solutions(e, "t(X, Y, Z)", "Z");
    if (run == 0) ref = s;
    ASSERT_EQ(s, ref);
  }
  EXPECT_EQ(ref.size(), 6u);
}
