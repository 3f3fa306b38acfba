#include <gtest/gtest.h>

#include "c2pl/error.hpp"
#include "c2pl/frontend/parser.hpp"
#include "c2pl/frontend/printer.hpp"

using namespace c2pl;

namespace {

ErrorCode parseError(const std::string& src) {
  try {
    parse(src);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error for: " << src;
  return ErrorCode::BadFunc;
}

void expectRoundTrip(const std::string& src) {
  TranslationUnit a = parse(src);
  std::string text = printC(a);
  TranslationUnit b;
  ASSERT_NO_THROW(b = parse(text)) << text;
  EXPECT_EQ(dumpAst(a), dumpAst(b)) << text;
  EXPECT_EQ(text, printC(b));
}

}  // namespace

TEST(Frontend, MinimalFunction) {
  TranslationUnit tu = parse("int inc(int x){return x+1;}");
  ASSERT_EQ(tu.functions.size(), 1u);
  const FuncDef& f = tu.functions[0];
  EXPECT_EQ(f.name, "inc");
  ASSERT_EQ(f.params.size(), 1u);
  EXPECT_EQ(f.params[0].name, "x");
  EXPECT_EQ(f.retType, CType::intType());
}

TEST(Frontend, SelectorFunction) {
  TranslationUnit tu = parse(
      "int foo(int sel, int x, int y) {\n"
      "  int ret;\n"
      "  if (sel == 1) ret = x; else ret = y;\n"
      "  return ret;\n"
      "}\n");
  const FuncDef& f = tu.functions[0];
  ASSERT_EQ(f.body.size(), 3u);
  const Stmt& s = *f.body[1];
  ASSERT_EQ(s.kind, StmtKind::If);
  ASSERT_EQ(s.body.size(), 1u);
  ASSERT_EQ(s.alt.size(), 1u);
  EXPECT_EQ(s.body[0]->expr->kind, ExprKind::Assign);
  EXPECT_EQ(s.alt[0]->expr->kind, ExprKind::Assign);
  EXPECT_EQ(s.body[0]->expr->kids[0]->name, "ret");
}

TEST(Frontend, GotoRejected) {
  EXPECT_EQ(parseError("void f(){ L: goto L; }"), ErrorCode::Goto);
  EXPECT_EQ(parseError("void f(){ goto L; }"), ErrorCode::Goto);
}

TEST(Frontend, SubsetRestrictions) {
  EXPECT_EQ(parseError("int f(int n, ...){ return n; }"), ErrorCode::Unsupported);
  EXPECT_EQ(parseError("int f(int n){ int a[n]; return 0; }"), ErrorCode::Unsupported);
  EXPECT_EQ(parseError("struct s { int a : 3; };"), ErrorCode::Unsupported);
  EXPECT_EQ(parseError("int f(){ static int c; return c; }"), ErrorCode::Unsupported);
  EXPECT_EQ(parseError("int f(){ return longjmp; }"), ErrorCode::Unsupported);
  EXPECT_EQ(parseError("#include <stdio.h>\nint x;"), ErrorCode::Syntax);
  EXPECT_EQ(parseError("int f({"), ErrorCode::Syntax);
  EXPECT_EQ(parseError("int f(){ return y; }"), ErrorCode::Type);
  EXPECT_EQ(parseError("int f(){ int *p; double d; p = d; return 0; }"), ErrorCode::Type);
  EXPECT_EQ(parseError("struct t { int a; }; int f(struct t *p){ return p->zz; }"), ErrorCode::NoField);
}

TEST(Frontend, ErrorCarriesPosition) {
  try {
    parse("int f() {\n  return @;\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("2:10"), std::string::npos) << e.what();
  }
}

TEST(Frontend, LocalsRenamedUniquely) {
  TranslationUnit tu = parse("int f(int x){ int y = x; { int y = 2; x = y; } return y + x; }");
  const FuncDef& f = tu.functions[0];
  ASSERT_EQ(f.locals.size(), 2u);
  EXPECT_EQ(f.locals[0].name, "y");
  EXPECT_EQ(f.locals[1].name, "y_1");
}

TEST(Frontend, BuiltinsAndFuncTable) {
  TranslationUnit tu = parse("int g(void); int h(){return g();} int g(){return 1;} int main(){print_int(h()); return 0;}");
  ASSERT_GE(tu.funcTable.size(), 3u);
  EXPECT_EQ(tu.funcTable[0], "h");
  EXPECT_EQ(tu.funcTable[1], "g");
  EXPECT_EQ(tu.funcTable[2], "main");
  for (const char* b : {"print_int", "print_float", "putchar", "read_int", "memset", "memcpy", "malloc"})
    EXPECT_TRUE(tu.functionType(b).has_value()) << b;
  EXPECT_EQ(functionAddress(tu, "h"), kFuncBase);
  EXPECT_EQ(functionAtAddress(tu, kFuncBase + kFuncStride), "g");
}

TEST(Frontend, UndefinedFunctionRejected) {
  EXPECT_EQ(parseError("int g(int); int main(){ return g(1); }"), ErrorCode::UnknownFunc);
}

TEST(Frontend, ConstantsFolded) {
  TranslationUnit tu = parse("long f(){ return sizeof(int) * 3 + (1 << 4) - 'a'; }");
  const Expr& e = *tu.functions[0].body[0]->expr;
  ASSERT_EQ(e.kind, ExprKind::IntConst);
  EXPECT_EQ(e.ival, 12 + 16 - 97);
}

TEST(Frontend, RoundTrip) {
  expectRoundTrip("int inc(int x){return x+1;}");
  expectRoundTrip(
      "struct ty { int a; int b; };\n"
      "union u { int i; float f; };\n"
      "typedef struct node { long v; struct node *next; } node;\n"
      "int g = 5; int arr[3] = {1, 2, 3}; int *gp = &g; double dd = -2.5;\n"
      "int inc(int);\n"
      "int (*fp)(int) = inc;\n"
      "int inc(int x) { return x + 1; }\n"
      "float half(float x) { return x / 2.0f; }\n"
      "unsigned long mix(unsigned int a, long b, char c) {\n"
      "  unsigned long r = a * 3u + b - c;\n"
      "  r ^= r >> 7; r <<= 2; r %= 1000;\n"
      "  return r;\n"
      "}\n"
      "int main() {\n"
      "  struct ty s[2]; union u w; node n; node *p = &n;\n"
      "  int i, j = 0, *q = &j;\n"
      "  memset((void *)s, 0, 3 * sizeof(int));\n"
      "  s[1].b = -2147483647 - 1;\n"
      "  w.f = 3.2f; p->v = 7; p->next = 0;\n"
      "  for (i = 0; i < 10; i++) { if (i == 3) continue; if (i > 7) break; j += i; }\n"
      "  for (int k = 0, m = 2; k < m; ++k) j--;\n"
      "  while (j > 100) j = j / 2;\n"
      "  do { j = j - 1; } while (j > 50 && !(j % 7 == 0) || j == 99);\n"
      "  switch (j) { case 1: j = 2; break; case -3: case 4: j = 5; default: j = fp(j); }\n"
      "  j = j > 3 ? *q : (int)w.f;\n"
      "  print_int(j); print_float((double)half(1.5f)); putchar('A');\n"
      "  return s[0].a + (int)sizeof(struct ty) + (int)(p != 0) + -j + ~j;\n"
      "}\n");
}

TEST(Layout, Scalars) {
  RecordTable rt;
  EXPECT_EQ(rt.layout(CType::intType()), (Layout{4, 4}));
  EXPECT_EQ(rt.layout(CType::charType()), (Layout{1, 1}));
  EXPECT_EQ(rt.layout(CType::doubleType()), (Layout{8, 8}));
  EXPECT_EQ(rt.layout(CType::pointerTo(CType::charType())), (Layout{8, 8}));
  EXPECT_EQ(rt.layout(CType::arrayOf(CType::longType(), 5)), (Layout{40, 8}));
}

TEST(Layout, Records) {
  TranslationUnit tu = parse(
      "struct ty { int a; int b; };\n"
      "union u { int i; float f; };\n"
      "struct mixed { char c; double d; int i; };\n");
  EXPECT_EQ(tu.records.sizeOf(CType::record("ty")), 8);
  EXPECT_EQ(tu.records.fieldOffset("ty", "a"), 0);
  EXPECT_EQ(tu.records.fieldOffset("ty", "b"), 4);
  EXPECT_EQ(tu.records.fieldOffset("u", "f"), 0);
  EXPECT_EQ(tu.records.fieldOffset("mixed", "d"), 8);
  EXPECT_EQ(tu.records.fieldOffset("mixed", "i"), 16);
  EXPECT_EQ(tu.records.layout(CType::record("mixed")), (Layout{24, 8}));
  EXPECT_THROW(tu.records.fieldOffset("ty", "zz"), Error);
}

TEST(Layout, IncompleteTypes) {
  RecordTable rt;
  try {
    rt.layout(CType::voidType());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Incomplete);
  }
}
