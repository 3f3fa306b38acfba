#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "c2pl/frontend/ast.hpp"

namespace c2pl {

// Every pass maps a valid unit to a valid unit: its output still runs under
// the interpreter with the same observable behaviour.

/// Three-address form. Structured control flow survives; switch, ternary,
/// && and || become if-chains, struct assignment becomes memcpy, and every
/// operator gets operands that are constants or variables.
FuncDef lowerExpressions(const FuncDef& f, const TranslationUnit& tu);

/// Replaces each loop by a call to a tail-recursive helper function.
/// Helpers return 1 when the loop executed a return of the enclosing
/// function (the value is stored through an extra pointer parameter) and
/// 0 otherwise. Returns the new helpers; nested loops are lowered too.
std::vector<FuncDef> lowerLoops(FuncDef& f, const TranslationUnit& tu);

/// Afterwards no statement follows an if that contains a return, and the
/// body ends in a return on every path.
void eliminateCuts(FuncDef& f);

/// One memory slot per address-taken local, reached through its holder.
struct Slot {
  std::string var;     // the local or parameter
  std::string holder;  // pointer variable holding &var
  CType type;
  int64_t size = 0;
  int64_t align = 1;
  bool isParam = false;
};

struct FuncInfo {
  std::vector<Slot> slots;
  const Slot* slotOf(const std::string& var) const;
  const Slot* slotByHolder(const std::string& holder) const;
};

/// Makes memory explicit: globals and aggregates are read and written
/// through typed pointers only, and every address-taken scalar keeps a value
/// variable plus a slot. Scalar declarations become assignments.
FuncInfo pointerize(FuncDef& f, const TranslationUnit& tu);

/// Inclusion-based, flow- and field-insensitive points-to sets.
class PointsTo {
 public:
  /// Abstract location of a local slot, a global or a malloc site.
  static std::string localLoc(const std::string& fn, const std::string& var) { return fn + "::" + var; }

  const std::set<std::string>& of(const std::string& fn, const std::string& var) const;
  /// Locations an operand of fn may point to (variables and constant addresses).
  std::set<std::string> ofOperand(const std::string& fn, const Expr& e) const;
  /// Closure of roots under "may hold a pointer to".
  std::set<std::string> reach(const std::set<std::string>& roots) const;
  const std::set<std::string>& contents(const std::string& loc) const;
  const std::set<std::string>& globalLocs() const { return globals_; }
  bool conservative() const { return conservative_; }
  /// Every variable node, keyed "v|fn|var".
  const std::map<std::string, std::set<std::string>>& vars() const { return vars_; }

 private:
  friend PointsTo pointsTo(const TranslationUnit& tu, const std::map<std::string, FuncInfo>& info, bool conservative);
  std::map<std::string, std::set<std::string>> vars_;
  std::map<std::string, std::set<std::string>> contents_;
  std::set<std::string> globals_;
  bool conservative_ = false;
};

/// Runs on a pointerized unit. With conservative set, every memory access is
/// assumed to alias every slot.
PointsTo pointsTo(const TranslationUnit& tu, const std::map<std::string, FuncInfo>& info, bool conservative = false);

/// Stores address-taken scalars to their slots before any access that may
/// observe them, and reloads them after any access that may change them.
void insertFlushReload(FuncDef& f, const FuncInfo& info, const PointsTo& pts, const TranslationUnit& tu);

/// Static single assignment over structured code: each assignment defines a
/// fresh version v__k, parameters keep their names, and both arms of an if
/// end by copying into a common version for variables live after it.
void ssaRename(FuncDef& f, const FuncInfo& info);

/// Copy propagation and removal of unused pure assignments.
void simplify(FuncDef& f, const FuncInfo& info);

struct NormalizeOptions {
  bool conservativePta = false;
  /// When set, the unit is printed to dump after the named pass.
  std::string dumpPass;
  std::ostream* dump = nullptr;
  /// Ends the pipeline after the named pass (empty runs every pass).
  std::string stopAfter;
};

struct NormalizedUnit {
  /// Every function normalized, loop helpers appended after their parent.
  TranslationUnit tu;
  std::map<std::string, FuncInfo> info;
  PointsTo pts;
};

/// Names accepted by --dump-pass, in pipeline order.
const std::vector<std::string>& passNames();

NormalizedUnit normalize(const TranslationUnit& tu, const NormalizeOptions& opts = {});

/// A name not yet used by any parameter or local of f.
std::string freshName(const FuncDef& f, const std::string& stem);

}  // namespace c2pl
