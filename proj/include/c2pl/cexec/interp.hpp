#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "c2pl/cexec/memory.hpp"
#include "c2pl/error.hpp"
#include "c2pl/frontend/arith.hpp"
#include "c2pl/frontend/ast.hpp"

namespace c2pl {

struct TraceEvent {
  enum class Kind { PrintInt, PrintFloat, Putchar };
  Kind kind = Kind::PrintInt;
  int64_t ival = 0;
  double fval = 0.0;

  bool operator==(const TraceEvent& o) const;
  /// "I 42", "F 2.5" or "C 65".
  std::string str() const;
};

using Trace = std::vector<TraceEvent>;

std::string traceText(const Trace& t);
/// Whitespace-separated integers; E_SYNTAX on anything else.
std::vector<int64_t> parseStdin(const std::string& text);

/// Outcome of one program run. A runtime error ends the run early; the
/// trace produced up to that point is kept.
struct RunResult {
  Trace trace;
  int exitCode = 0;
  std::optional<ErrorCode> error;
  std::string errorMessage;

  /// Observable equivalence: same trace, same exit code, same error kind.
  bool sameBehavior(const RunResult& o) const {
    return trace == o.trace && exitCode == o.exitCode && error == o.error;
  }
};

/// Program-wide I/O state shared by every interpreter in one run.
struct RunIo {
  Trace trace;
  std::deque<int64_t> input;
};

/// Runs fn on a thread with a large native stack, so that deeply recursive
/// interpreted programs do not overflow the host stack. Exceptions thrown by
/// fn are rethrown on the calling thread.
void runWithLargeStack(const std::function<void()>& fn);

/// Big-step interpreter for the C subset over SimMemory. Every variable
/// lives in a stack slot; pointers are plain integers.
class Interpreter {
 public:
  /// Handles a call before the interpreter looks for a body. Returning
  /// nullopt means "not mine".
  using CallHook = std::function<std::optional<CValue>(const std::string& name, const std::vector<CValue>& args)>;

  Interpreter(const TranslationUnit& tu, SimMemory& mem, RunIo& io);

  /// Writes global initializers into memory. Called once per run.
  void initGlobals();
  void setCallHook(CallHook hook) { hook_ = std::move(hook); }

  /// Calls a user function or builtin by name.
  CValue call(const std::string& name, const std::vector<CValue>& args);
  /// Calls whatever function lives at a function-table address (E_BADFUNC).
  CValue callAddress(int64_t addr, const std::vector<CValue>& args);
  /// Executes a builtin natively; nullopt if name is not a builtin.
  std::optional<CValue> callBuiltin(const std::string& name, const std::vector<CValue>& args);

  /// Interprets main() and returns its result masked to 8 bits.
  int runMain();

  const TranslationUnit& unit() const { return tu_; }
  SimMemory& memory() { return mem_; }
  int64_t globalAddress(const std::string& name) const;
  /// C-side call stack, innermost last, for diagnostics.
  std::vector<std::string> callStack() const;

  void setMaxDepth(int depth) { maxDepth_ = depth; }

 private:
  struct FrameLayout {
    std::unordered_map<std::string, int64_t> offset;
    int64_t size = 0;
  };
  struct Frame {
    const FuncDef* fn = nullptr;
    const FrameLayout* layout = nullptr;
    int64_t base = 0;
    CValue ret;
  };
  enum class Flow { Normal, Break, Continue, Return };

  const FrameLayout& layoutOf(const FuncDef& f);
  CValue callUser(const FuncDef& f, const std::vector<CValue>& args);

  int64_t address(const Expr& place);
  CValue load(int64_t addr, const CType& t);
  void store(int64_t addr, const CType& t, CValue v);
  CValue eval(const Expr& e);
  CValue evalBinary(const Expr& e);
  void initialize(int64_t addr, const CType& t, const Expr& init);

  Flow exec(const Stmt& s);
  Flow execList(const StmtList& list);

  const TranslationUnit& tu_;
  SimMemory& mem_;
  RunIo& io_;
  GlobalLayout globals_;
  CallHook hook_;
  std::unordered_map<const FuncDef*, FrameLayout> layouts_;
  std::vector<Frame> frames_;
  int maxDepth_ = 200000;
};

/// Interprets a checked unit from main(). Runtime errors are captured in
/// the result rather than thrown.
RunResult runOriginal(const TranslationUnit& tu, const std::vector<int64_t>& input);

}  // namespace c2pl
