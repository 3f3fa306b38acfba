#include <gtest/gtest.h>

#include <random>

#include "c2pl/engine/engine.hpp"
#include "c2pl/engine/syntax.hpp"
#include "c2pl/error.hpp"
#include "c2pl/frontend/parser.hpp"
#include "c2pl/translate/translate.hpp"
#include "corpus.hpp"

using namespace c2pl;

namespace {

const char* kFoo =
    "int foo(int sel, int x, int y) { int ret; if (sel == 1) ret = x; else ret = y; return ret; }\n"
    "int main() { return foo(1, 2, 3); }";

Translation translateAll(const std::string& src, bool mask = true, std::vector<std::string> only = {}) {
  TranslationUnit tu = parse(src);
  NormalizedUnit nu = normalize(tu);
  ObfuscationConfig cfg;
  cfg.level = 100;
  cfg.maskIntegers = mask;
  cfg.include = std::move(only);
  return translateUnit(nu, selectFunctions(tu, cfg), cfg);
}

const Clause& clauseFor(const Translation& t, const std::string& pred) {
  for (const auto& c : t.program.clauses)
    if (c.head->name == pred) return c;
  throw std::runtime_error("no clause " + pred);
}

std::string manyFunctions(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += "int f" + std::to_string(i) + "(int x) { return x + " + std::to_string(i) + "; }\n";
  return s + "int main() { return 0; }";
}

// Evaluates pred(A, B, R) on the engine and returns R.
Int128 query2(Engine& e, const std::string& pred, Int128 a, Int128 b) {
  const size_t q = e.openQuery(pred, {QArg::integer(a), QArg::integer(b), QArg::var()});
  EXPECT_TRUE(e.nextSolution(q));
  const Int128 r = e.intArg(e.queryArg(q, 2));
  e.closeQuery(q);
  return r;
}

}  // namespace

TEST(Select, CeilingOfLevel) {
  TranslationUnit tu = parse(manyFunctions(10));
  ObfuscationConfig cfg;
  cfg.level = 30;
  EXPECT_EQ(selectFunctions(tu, cfg).size(), 3u);
  cfg.level = 31;
  EXPECT_EQ(selectFunctions(tu, cfg).size(), 4u);
  cfg.level = 0;
  EXPECT_TRUE(selectFunctions(tu, cfg).empty());
  cfg.level = 100;
  EXPECT_EQ(selectFunctions(tu, cfg).size(), 10u);
  EXPECT_FALSE(selectFunctions(tu, cfg).count("main"));
}

TEST(Select, DeterministicPerSeed) {
  TranslationUnit tu = parse(manyFunctions(20));
  ObfuscationConfig cfg;
  cfg.level = 40;
  cfg.seed = 7;
  const auto a = selectFunctions(tu, cfg);
  EXPECT_EQ(a, selectFunctions(tu, cfg));
  bool differs = false;
  for (uint64_t s = 0; s < 8 && !differs; ++s) {
    cfg.seed = s;
    differs = selectFunctions(tu, cfg) != a;
  }
  EXPECT_TRUE(differs);
}

TEST(Select, ExplicitLists) {
  TranslationUnit tu = parse(manyFunctions(5));
  ObfuscationConfig cfg;
  cfg.include = {"f1", "f3"};
  EXPECT_EQ(selectFunctions(tu, cfg), (std::set<std::string>{"f1", "f3"}));
  cfg.include = {"nope"};
  try {
    selectFunctions(tu, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownFunc);
  }
  cfg.include.clear();
  cfg.exclude = {"f0", "f1", "f2", "f3"};
  cfg.level = 100;
  EXPECT_EQ(selectFunctions(tu, cfg), std::set<std::string>{"f4"});
}

TEST(Translate, SelectFunctionClause) {
  Translation t = translateAll(kFoo);
  const Clause& c = clauseFor(t, "foo");
  const Clause want = readProgram("foo(Sel, X, Y, R) :- (Sel =:= 1 -> R is X) ; (R is Y).").clauses[0];
  EXPECT_EQ(c, want);
  EXPECT_EQ(emitProlog(t.program), "% c2pl: 1 translated predicate(s)\n\nfoo(Sel, X, Y, R) :- (Sel =:= 1 -> R is X ; R is Y).\n");
}

TEST(Translate, IncWithoutMasking) {
  Translation t = translateAll("int inc(int input) { return input + 1; } int main() { return inc(1); }", false);
  EXPECT_NE(emitProlog(t.program).find("\ninc(Input, R) :- R is Input + 1.\n"), std::string::npos);
}

TEST(Translate, IncWithMasking) {
  Translation t = translateAll("int inc(int input) { return input + 1; } int main() { return inc(1); }");
  EXPECT_NE(emitProlog(t.program).find("R is (((Input + 1) /\\ 0xFFFFFFFF) xor 0x80000000) - 0x80000000."),
            std::string::npos);
}

TEST(Translate, PointerArithmeticScales) {
  Translation t = translateAll("int *adv(int *p, long k) { return p + k; } int main() { return 0; }", false);
  EXPECT_EQ(writeClause(clauseFor(t, "adv")), "adv(P, K, R) :- R is P + 4 * K.");
}

TEST(Translate, LoadsAndStoresUseMemoryPredicates) {
  Translation t = translateAll("void put(double *d, char *c) { *d = *d + 1.0; *c = *c; } int main() { return 0; }");
  const std::string text = writeClause(clauseFor(t, "put"));
  EXPECT_NE(text.find("rdPtrFloat(D, 8, "), std::string::npos);
  EXPECT_NE(text.find("wrPtrFloat(D, 8, "), std::string::npos);
  EXPECT_NE(text.find("rdPtrInt(C, 1, "), std::string::npos);
  EXPECT_NE(text.find("xor 0x80) - 0x80"), std::string::npos);
  EXPECT_NE(text.find("R = 0"), std::string::npos);
}

TEST(Translate, CallForms) {
  Translation t = translateAll(
      "int sq(int x) { return x * x; } int ap(int (*f)(int), int v) { print_int(v); return f(v) + sq(v); }\n"
      "int main() { return ap(sq, 3); }",
      true, {"ap"});
  const std::string text = writeClause(clauseFor(t, "ap"));
  EXPECT_NE(text.find("'c:print_int'("), std::string::npos);
  EXPECT_NE(text.find(", _)"), std::string::npos);
  EXPECT_NE(text.find("'$icall'(F, V, "), std::string::npos);
  EXPECT_NE(text.find("'c:sq'(V, "), std::string::npos);
}

TEST(Translate, ReservedNamesAreMangled) {
  EXPECT_EQ(predicateName("foo"), "foo");
  EXPECT_EQ(predicateName("call"), "p__call");
  EXPECT_EQ(predicateName("rdPtrInt"), "p__rdPtrInt");
}

TEST(Translate, NameMapIsInjective) {
  for (const auto& p : corpus_util::corpus()) {
    NormalizedUnit nu = normalize(parse(p.source));
    for (const auto& f : nu.tu.functions) {
      NameMap nm(f);
      std::set<std::string> seen;
      for (const auto& [c, pl] : nm.entries()) {
        EXPECT_TRUE(seen.insert(pl).second) << p.name << ": " << pl;
        EXPECT_NE(pl, "R");
        EXPECT_TRUE(std::isupper(static_cast<unsigned char>(pl[0]))) << pl;
      }
      const std::string fresh = nm.fresh("T");
      EXPECT_FALSE(seen.count(fresh));
    }
  }
}

TEST(Translate, ManifestSlots) {
  Translation t = translateAll(
      "void set(int *p) { *p = 5; } int g(int a) { int v; set(&v); return v + a; } int main() { return g(1); }", true,
      {"g"});
  const PredicateSpec* s = t.manifest.find("g");
  ASSERT_NE(s, nullptr);
  ASSERT_EQ(s->slots.size(), 1u);
  EXPECT_EQ(s->slots[0].name, "v");
  EXPECT_EQ(s->slots[0].size, 4);
  EXPECT_EQ(s->slots[0].align, 4);
  ASSERT_EQ(s->params.size(), 1u);
  EXPECT_EQ(s->params[0].kind, ParamSpec::Kind::Value);
  EXPECT_EQ(s->arity(), 3u);
  Manifest back = Manifest::fromJson(t.manifest.toJson());
  ASSERT_EQ(back.functions.size(), 1u);
  EXPECT_EQ(back.functions[0].slots[0].size, 4);
  EXPECT_EQ(back.functions[0].predName, "g");
}

TEST(Translate, AddressTakenParameter) {
  Translation t = translateAll("int h(long a) { long *p = &a; *p = *p + 1; return (int)a; } int main() { return h(1); }");
  const PredicateSpec* s = t.manifest.find("h");
  ASSERT_NE(s, nullptr);
  ASSERT_EQ(s->params.size(), 1u);
  EXPECT_EQ(s->params[0].kind, ParamSpec::Kind::Address);
  EXPECT_EQ(s->params[0].size, 8);
}

TEST(Translate, WrappersAndEmptySelection) {
  Translation t = translateAll("int foo(int arg) { return arg * 2; } int main() { return foo(2); }");
  const std::string w = emitWrappers(parse("int foo(int arg) { return arg * 2; } int main() { return foo(2); }"), t);
  EXPECT_NE(w.find("int foo(int arg) {"), std::string::npos);
  EXPECT_NE(w.find("a[0] = pl_int((long)arg);"), std::string::npos);
  EXPECT_NE(w.find("pl_query(\"foo\", 2, a);"), std::string::npos);

  TranslationUnit tu = parse(kFoo);
  ObfuscationConfig cfg;
  cfg.level = 0;
  Translation none = translateUnit(normalize(tu), selectFunctions(tu, cfg), cfg);
  EXPECT_TRUE(none.manifest.functions.empty());
  EXPECT_EQ(emitProlog(none.program), "% c2pl: 0 translated predicate(s)\n");
  EXPECT_EQ(emitWrappers(tu, none).find(" {\n"), std::string::npos);
  EXPECT_NE(none.manifest.toJson().find("\"functions\": []"), std::string::npos);
}

TEST(Translate, UntranslatableGuard) {
  TranslationUnit tu = parse("int f(int n) { while (n > 0) n--; return n; } int main() { return f(3); }");
  NormalizedUnit nu = normalize(tu);
  Manifest m;
  try {
    translateFunction(*tu.findFunction("f"), nu, m, ObfuscationConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Untranslatable);
  }
}

TEST(Translate, EmitParsesBackToSameClauses) {
  for (const auto& p : corpus_util::corpus()) {
    for (bool mask : {true, false}) {
      Translation t = translateAll(p.source, mask);
      const std::string text = emitProlog(t.program);
      EXPECT_EQ(readProgram(text), t.program) << p.name;
      EXPECT_EQ(emitProlog(readProgram(text)), text) << p.name;
    }
  }
}

// Masked translated arithmetic agrees with two's-complement C arithmetic.
TEST(TranslateProperty, MaskedIntArithmetic) {
  Translation t = translateAll(
      "int add(int a, int b) { return a + b; } int sub(int a, int b) { return a - b; }\n"
      "int mul(int a, int b) { return a * b; } int shl(int a, int b) { return a << b; }\n"
      "unsigned uadd(unsigned a, unsigned b) { return a + b; } unsigned usub(unsigned a, unsigned b) { return a - b; }\n"
      "long lmul(long a, long b) { return a * b; }\n"
      "int main() { return 0; }");
  Engine e;
  e.consult(t.program);
  std::vector<int64_t> edge = {0, 1, -1, 2, -2, 0x7FFFFFFF, -0x7FFFFFFF - 1, 0x7FFFFFFE, -0x7FFFFFFF, 65536, 46341, -46341};
  std::vector<std::pair<int32_t, int32_t>> cases;
  for (int64_t a : edge)
    for (int64_t b : edge) cases.push_back({static_cast<int32_t>(a), static_cast<int32_t>(b)});
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 3000; ++i) cases.push_back({static_cast<int32_t>(rng()), static_cast<int32_t>(rng())});
  for (auto [a, b] : cases) {
    const auto ua = static_cast<uint32_t>(a), ub = static_cast<uint32_t>(b);
    ASSERT_EQ(query2(e, "add", a, b), static_cast<int32_t>(ua + ub)) << a << " " << b;
    ASSERT_EQ(query2(e, "sub", a, b), static_cast<int32_t>(ua - ub)) << a << " " << b;
    ASSERT_EQ(query2(e, "mul", a, b), static_cast<int32_t>(ua * ub)) << a << " " << b;
    ASSERT_EQ(query2(e, "shl", a, b), static_cast<int32_t>(ua << (ub & 31))) << a << " " << b;
    ASSERT_EQ(query2(e, "uadd", ua, ub), static_cast<uint32_t>(ua + ub));
    ASSERT_EQ(query2(e, "usub", ua, ub), static_cast<uint32_t>(ua - ub));
    const int64_t la = static_cast<int64_t>(rng()), lb = static_cast<int64_t>(rng());
    ASSERT_EQ(query2(e, "lmul", la, lb),
              static_cast<int64_t>(static_cast<uint64_t>(la) * static_cast<uint64_t>(lb)));
  }
}
