#pragma once

#include <functional>
#include <set>
#include <string>

#include "c2pl/frontend/ast.hpp"

namespace c2pl::norm {

/// Constant, variable or function designator.
inline bool isAtom(const Expr& e) {
  return e.isConst() || e.kind == ExprKind::Var || e.kind == ExprKind::FuncRef;
}

inline bool isLocalVar(const Expr& e) { return e.kind == ExprKind::Var && e.scope == VarScope::Local; }

ExprPtr zeroOf(const CType& t);
ExprPtr localVar(const FuncDef& f, const std::string& name);
bool hasSideEffects(const Expr& e);
bool containsReturn(const StmtList& list);
bool alwaysReturns(const StmtList& list);

/// Pre-order visit of every expression node, including nested statements.
void forEachExpr(const StmtList& list, const std::function<void(const Expr&)>& fn);
void forEachExpr(const Expr& e, const std::function<void(const Expr&)>& fn);
void forEachStmt(const StmtList& list, const std::function<void(const Stmt&)>& fn);
void forEachStmt(StmtList& list, const std::function<void(Stmt&)>& fn);
/// Child statement lists of s (body, alt, init, pre, step, case bodies).
std::vector<const StmtList*> childLists(const Stmt& s);
std::vector<StmtList*> childLists(Stmt& s);

/// Locals read or written anywhere in list.
std::set<std::string> localsUsed(const StmtList& list);
/// Locals whose address is taken (AddrOf or Decay of the variable itself).
std::set<std::string> addressTaken(const StmtList& list);

/// Replaces every Var named `from` by a copy of `to` (types must agree).
void substituteVar(Expr& e, const std::string& from, const Expr& to);

StmtPtr assignStmt(ExprPtr place, ExprPtr value);
StmtPtr declStmt(const std::string& name, const CType& t, ExprPtr init);

}  // namespace c2pl::norm
