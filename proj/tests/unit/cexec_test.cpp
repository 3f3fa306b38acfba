#include <gtest/gtest.h>

#include "c2pl/cexec/interp.hpp"
#include "c2pl/frontend/parser.hpp"

using namespace c2pl;

namespace {

RunResult run(const std::string& src, std::vector<int64_t> input = {}) {
  return runOriginal(parse(src), input);
}

std::string text(const RunResult& r) { return traceText(r.trace); }

}  // namespace

TEST(Memory, IntRoundTripAndZeroExtension) {
  SimMemory m(0x10010);
  m.storeInt(0x10000, 4, static_cast<uint64_t>(-1));
  EXPECT_EQ(m.loadInt(0x10000, 4), 4294967295u);
  m.storeFloat(0x10008, 4, 3.2);
  EXPECT_EQ(m.loadInt(0x10008, 4), 0x404CCCCDu);
  m.storeFloat(0x10008, 8, 2.5);
  EXPECT_EQ(m.loadFloat(0x10008, 8), 2.5);
}

TEST(Memory, RegionChecks) {
  SimMemory m(0x10008);
  EXPECT_THROW(m.loadInt(0, 4), Error);
  EXPECT_THROW(m.loadInt(kFuncBase, 4), Error);
  EXPECT_THROW(m.loadInt(0x10006, 4), Error);  // crosses the end of globals
  int64_t mark = m.stackTop();
  int64_t a = m.stackAlloc(8);
  m.storeInt(a, 8, 7);
  m.stackRelease(mark);
  EXPECT_THROW(m.loadInt(a, 8), Error);
  int64_t h = m.malloc(4);
  EXPECT_EQ(m.loadInt(h, 4), 0u);
  try {
    m.storeInt(h + 4096, 4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Segv);
  }
}

TEST(Interp, IncProgram) {
  RunResult r = run("int inc(int x){return x+1;} int main(){ print_int(inc(41)); return 0; }");
  EXPECT_EQ(text(r), "I 42\n");
  EXPECT_EQ(r.exitCode, 0);
  EXPECT_FALSE(r.error);
}

TEST(Interp, MemsetStructArray) {
  RunResult r = run(
      "struct ty { int a; int b; } s[2];\n"
      "int main() {\n"
      "  s[0].a = 1; s[0].b = 2; s[1].a = 3; s[1].b = 4;\n"
      "  memset((void*)s, 0, 3*sizeof(int));\n"
      "  print_int(s[0].a); print_int(s[0].b); print_int(s[1].a); print_int(s[1].b);\n"
      "  return 0;\n"
      "}\n");
  EXPECT_EQ(text(r), "I 0\nI 0\nI 0\nI 4\n");
}

TEST(Interp, AliasingSnippet) {
  RunResult r = run(
      "int main() {\n"
      "  int a, b, c, d; int *p;\n"
      "  a = 0; p = &a; a = 1; b = *p;\n"
      "  c = 0; p = &c; c = 1; *p = 3; d = c;\n"
      "  print_int(b); print_int(d);\n"
      "  return 0;\n"
      "}\n");
  EXPECT_EQ(text(r), "I 1\nI 3\n");
}

TEST(Interp, ArithmeticSemantics) {
  RunResult r = run(
      "int main() {\n"
      "  int big = 2147483647; unsigned int u = 0u; long l = -7; char c = 127;\n"
      "  int m = -2147483647 - 1;\n"
      "  print_int(big + 1); print_int(u - 1u); print_int(l / 2); print_int(l % 2);\n"
      "  c++; print_int(c); print_int(m / -1); print_int(1 << 33); print_int(-16 >> 2);\n"
      "  print_int((int)2.9); print_int((int)-2.9);\n"
      "  print_float(1.0 / 3.0); print_float((double)(1.0f / 3.0f));\n"
      "  putchar(65 + 256);\n"
      "  return 300;\n"
      "}\n");
  EXPECT_EQ(text(r),
            "I -2147483648\nI 4294967295\nI -3\nI -1\nI -128\nI -2147483648\nI 2\nI -4\nI 2\nI -2\n"
            "F 0.3333333333333333\nF 0.3333333432674408\nC 65\n");
  EXPECT_EQ(r.exitCode, 300 & 0xFF);
}

TEST(Interp, ControlFlow) {
  RunResult r = run(
      "int f(int n) {\n"
      "  int s = 0, i;\n"
      "  for (i = 0; i < n; i++) { if (i == 2) continue; if (i == 6) break; s += i; }\n"
      "  do { s = s + 100; } while (s < 300);\n"
      "  switch (n) { case 1: s = -1; break; case 10: s = s + 1; case 11: s = s + 2; break; default: s = 0; }\n"
      "  while (1) { if (s > 0) return s; s = 5; }\n"
      "}\n"
      "int main() { print_int(f(10)); print_int(f(1)); print_int(f(3)); return 0; }\n");
  EXPECT_EQ(text(r), "I 316\nI 5\nI 5\n");
}

TEST(Interp, IndirectCallsAndRecursion) {
  RunResult r = run(
      "int fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }\n"
      "int twice(int x) { return 2 * x; }\n"
      "int apply(int (*f)(int), int v) { return f(v); }\n"
      "int depth(int n) { if (n == 0) return 0; return 1 + depth(n - 1); }\n"
      "int main() { int (*g)(int) = fact; print_int(apply(g, 5)); print_int(apply(twice, 4));\n"
      "  print_int(depth(50000)); return 0; }\n");
  EXPECT_EQ(text(r), "I 120\nI 8\nI 50000\n");
}

TEST(Interp, RuntimeErrors) {
  RunResult a = run("int main() { int *p = (int*)8; *p = 1; return 0; }");
  ASSERT_TRUE(a.error);
  EXPECT_EQ(*a.error, ErrorCode::Segv);
  EXPECT_EQ(a.exitCode, 3);
  RunResult b = run("int main() { int z = 0; print_int(1); return 5 / z; }");
  ASSERT_TRUE(b.error);
  EXPECT_EQ(*b.error, ErrorCode::Div0);
  EXPECT_EQ(text(b), "I 1\n");
  RunResult c = run("int main() { return read_int() + read_int(); }", {1});
  ASSERT_TRUE(c.error);
  EXPECT_EQ(*c.error, ErrorCode::StdinExhausted);
  RunResult d = run("int main() { int (*f)(int) = (int (*)(int))12345; return f(1); }");
  ASSERT_TRUE(d.error);
  EXPECT_EQ(*d.error, ErrorCode::BadFunc);
}

TEST(Interp, StdinAndHeap) {
  RunResult r = run(
      "struct node { int v; struct node *next; };\n"
      "int main() {\n"
      "  int n = read_int(), i; struct node *head = 0;\n"
      "  for (i = 0; i < n; i++) { struct node *x = (struct node*)malloc(sizeof(struct node)); x->v = read_int(); x->next = head; head = x; }\n"
      "  while (head) { print_int(head->v); head = head->next; }\n"
      "  return n;\n"
      "}\n",
      parseStdin("3 10 -20\n30"));
  EXPECT_EQ(text(r), "I 30\nI -20\nI 10\n");
  EXPECT_EQ(r.exitCode, 3);
}
