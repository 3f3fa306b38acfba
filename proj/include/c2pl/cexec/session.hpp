#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "c2pl/cexec/interp.hpp"
#include "c2pl/engine/engine.hpp"
#include "c2pl/translate/translate.hpp"

namespace c2pl {

struct SessionOptions {
  EngineOptions engine;
  /// Receives one line per choice-point push and restore.
  std::ostream* engineTrace = nullptr;
};

/// One mixed C and Prolog execution: residual C functions run in the
/// interpreter, translated ones as predicates, over one shared SimMemory.
class Session {
 public:
  /// tu is the normalized unit the translation was made from.
  Session(const TranslationUnit& tu, const Translation& t, SessionOptions opts = {});
  ~Session();

  /// Runs main(). Errors end the run; the message carries the C call stack
  /// and, for engine errors, the Prolog goal stack.
  RunResult run(const std::vector<int64_t>& input);

  Engine& engine() { return engine_; }
  SimMemory& memory() { return *mem_; }
  Interpreter& interpreter() { return *interp_; }
  /// Deepest nesting of open Prolog queries seen so far.
  size_t maxQueryDepth() const { return maxQueryDepth_; }
  size_t topLevelQueries() const { return topLevelQueries_; }
  /// Top-level queries after which the heap was not back at its base.
  size_t heapLeaks() const { return heapLeaks_; }

 private:
  CValue callPredicate(const PredicateSpec& spec, const FuncDef& f, const std::vector<CValue>& args);
  void registerForeign();
  CValue fromProlog(size_t a, const CType& t) const;
  QArg toQuery(const CType& t, CValue v) const;
  size_t toHeap(const CType& t, CValue v);
  std::vector<CValue> foreignArgs(std::span<const size_t> a, size_t first, const CType& fnType) const;

  const TranslationUnit& tu_;
  const Translation& tr_;
  Engine engine_;
  RunIo io_;
  std::unique_ptr<SimMemory> mem_;
  std::unique_ptr<Interpreter> interp_;
  size_t maxQueryDepth_ = 0;
  size_t topLevelQueries_ = 0;
  size_t heapLeaks_ = 0;
  bool annotated_ = false;
};

/// Normalizes, translates the selected functions and runs the result.
RunResult runObfuscated(const TranslationUnit& original, const ObfuscationConfig& cfg,
                        const std::vector<int64_t>& input, const SessionOptions& opts = {},
                        const NormalizeOptions& nopts = {}, EngineStats* stats = nullptr);

}  // namespace c2pl
