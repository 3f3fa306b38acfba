#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "c2pl/engine/memory_port.hpp"
#include "c2pl/engine/term.hpp"

namespace c2pl {

enum class Tag : uint8_t { Ref, Str, Int, Flt, Fun };

/// One heap word. Fun cells head a structure (atom, arity); an atom is a
/// Fun cell of arity 0 stored in place.
struct Cell {
  Tag tag = Tag::Ref;
  uint32_t arity = 0;
  uint32_t atom = 0;
  union {
    size_t ref = 0;
    Int128 ival;
    double fval;
  };
};

struct EngineOptions {
  size_t maxDepth = 1'000'000;
  size_t maxHeapCells = size_t{1} << 23;
  /// Keep integers inside the signed 61-bit range (E_OVERFLOW otherwise).
  bool checkOverflow = false;
};

struct EngineStats {
  uint64_t restores = 0;
  uint64_t unifications = 0;
  uint64_t choicePoints = 0;
  uint64_t inferences = 0;
  size_t peakHeap = 0;
};

/// Query argument for openQuery by name.
struct QArg {
  enum class Kind { Int, Float, Var };
  Kind kind = Kind::Var;
  Int128 ival = 0;
  double fval = 0.0;

  static QArg integer(Int128 v) { return {Kind::Int, v, 0.0}; }
  static QArg flt(double v) { return {Kind::Float, 0, v}; }
  static QArg var() { return {}; }
};

class Engine;
/// Host predicate. args are heap addresses of the goal arguments; the
/// callback may re-enter the engine through openQuery.
using Foreign = std::function<bool(Engine&, std::span<const size_t> args)>;

class Engine {
 public:
  explicit Engine(EngineOptions opts = {});

  void consult(const Program& p);
  void consultText(std::string_view text);
  void registerForeign(const std::string& name, uint32_t arity, Foreign fn);
  /// One callback for every arity of name.
  void registerForeignAnyArity(const std::string& name, Foreign fn);
  /// Installs rdPtrInt/3, wrPtrInt/3, rdPtrFloat/3, wrPtrFloat/3.
  void attachMemory(MemoryPort* mem);
  bool hasPredicate(const std::string& name, uint32_t arity) const;

  size_t openQuery(const std::string& pred, const std::vector<QArg>& args);
  size_t openQuery(const Term& goal);
  bool nextSolution(size_t q);
  void closeQuery(size_t q);
  /// Heap address of argument i of the query goal.
  size_t queryArg(size_t q, size_t i) const;
  /// Binding of a named variable of a query opened from a Term.
  size_t queryVar(size_t q, const std::string& name) const;
  size_t openQueries() const { return queries_.size(); }
  /// Drops every open query and returns to the base state.
  void reset();

  // Heap access for foreign predicates and tests.
  size_t deref(size_t a) const;
  const Cell& cell(size_t a) const { return heap_[a]; }
  bool unify(size_t a, size_t b);
  size_t newInt(Int128 v);
  size_t newFloat(double v);
  size_t buildTerm(const Term& t);
  /// Dereferenced integer value; E_INST when unbound, E_TYPE otherwise.
  Int128 intArg(size_t a) const;
  double floatArg(size_t a) const;
  TermPtr toTerm(size_t a) const;
  std::string atomName(uint32_t id) const { return atoms_[id]; }

  size_t heapTop() const { return heap_.size(); }
  size_t heapBase() const { return base_; }
  size_t trailMark() const { return trail_.size(); }
  void undoTrail(size_t mark);
  size_t choicePointCount() const { return cps_.size(); }

  const EngineStats& stats() const { return stats_; }
  void resetStats() { stats_ = {}; }
  /// One line per choice-point push and restore.
  void setTrace(std::ostream* os) { trace_ = os; }
  const EngineOptions& options() const { return opts_; }

 private:
  enum class PredKind : uint8_t { User, Builtin, Foreign };
  enum class Builtin : uint8_t {
    True, Fail, Conj, Disj, IfThen, Not, Call, Cut, Is, Unify, NotUnify, Identical, NotIdentical,
    ArithEq, ArithNe, Lt, Gt, Le, Ge,
  };
  struct Pred {
    PredKind kind = PredKind::User;
    Builtin builtin = Builtin::True;
    std::string name;
    uint32_t arity = 0;
    std::vector<std::vector<Cell>> clauses;  // templates: [0] head, [1] body
    Foreign foreign;
  };
  struct Frame {
    size_t goal = 0;
    int64_t next = -1;
    int64_t caller = -1;
    uint32_t depth = 0;
    uint32_t cutBarrier = 0;
    bool isCut = false;
  };
  struct ChoicePoint {
    bool clauses = false;
    size_t trailMark = 0, heapMark = 0, arenaMark = 0;
    size_t goal = 0;
    uint32_t pred = 0, nextClause = 0;
    int64_t cont = -1, caller = -1;
    uint32_t depth = 0, cutBarrier = 0;
  };
  struct Query {
    size_t id = 0;
    size_t goal = 0;
    size_t heapMark = 0, trailMark = 0, cpBase = 0, arenaMark = 0;
    std::vector<std::pair<std::string, size_t>> vars;
    bool started = false, done = false;
  };
  struct Num {
    bool isFloat = false;
    Int128 i = 0;
    double f = 0.0;
  };

  uint32_t intern(const std::string& s);
  uint32_t lookupPred(uint32_t atom, uint32_t arity) const;
  uint32_t ensurePred(const std::string& name, uint32_t arity);
  void addBuiltin(const std::string& name, uint32_t arity, Builtin b);
  void push(const Cell& c);
  static void fill(size_t at, const Term& t, std::vector<Cell>& out,
                   std::unordered_map<std::string, size_t>& vars, Engine& e);
  size_t copyTemplate(const std::vector<Cell>& tpl);
  void bind(size_t var, size_t to);
  int64_t pushFrame(size_t goal, int64_t next, int64_t caller, uint32_t depth, uint32_t cutBarrier);
  int64_t pushCut(uint32_t height, int64_t next);
  void pushChoice(ChoicePoint cp);
  bool solve(Query& q, bool retry);
  bool step(int64_t frameIdx, int64_t& cont);
  void reserveCells(size_t n);
  bool tryClauses(size_t goal, uint32_t pred, uint32_t first, int64_t& cont, int64_t caller, uint32_t depth);
  bool backtrack(const Query& q, int64_t& cont);
  bool callBuiltin(Builtin b, size_t goal, const Frame& f, int64_t frameIdx, int64_t& cont);
  Num eval(size_t a) const;
  Num evalStruct(uint32_t atom, uint32_t arity, size_t f) const;
  Int128 checked(Int128 v) const;
  static bool compareNum(Builtin op, const Num& a, const Num& b);
  bool identical(size_t a, size_t b) const;
  size_t argAddr(size_t goal, size_t i) const;
  std::string indicator(size_t goal) const;
  std::string goalStack(int64_t frameIdx) const;
  Query& topQuery(size_t q, const char* op);

  EngineOptions opts_;
  EngineStats stats_;
  std::vector<Cell> heap_;
  std::vector<size_t> trail_;
  std::vector<Frame> arena_;
  std::vector<ChoicePoint> cps_;
  std::vector<Query> queries_;
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, uint32_t> atomIds_;
  std::vector<Pred> preds_;
  std::unordered_map<uint64_t, uint32_t> predIndex_;
  std::unordered_map<uint32_t, Foreign> anyArity_;
  std::vector<uint8_t> arith1_, arith2_;  // evaluable op per atom id
  MemoryPort* mem_ = nullptr;
  std::ostream* trace_ = nullptr;
  size_t base_ = 0;
  size_t trueCell_ = 0, failCell_ = 0;
  size_t nextQueryId_ = 1;
};

}  // namespace c2pl
