#include "util.hpp"

#include "c2pl/error.hpp"
#include "c2pl/normalize/normalize.hpp"

namespace c2pl {

std::string freshName(const FuncDef& f, const std::string& stem) {
  for (int k = 1;; ++k) {
    std::string n = stem + "__" + std::to_string(k);
    if (!f.hasVar(n)) return n;
  }
}

namespace norm {

ExprPtr zeroOf(const CType& t) {
  if (t.isFloating()) return Expr::floatConst(0.0, t);
  return Expr::intConst(0, t);
}

ExprPtr localVar(const FuncDef& f, const std::string& name) {
  const VarDecl* v = f.findVar(name);
  if (!v) fail(ErrorCode::Type, "no local '" + name + "' in " + f.name);
  return Expr::var(name, v->type, VarScope::Local);
}

bool hasSideEffects(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Assign:
    case ExprKind::CompoundAssign:
    case ExprKind::IncDec:
    case ExprKind::Call:
    case ExprKind::IndCall:
      return true;
    default:
      break;
  }
  for (const auto& k : e.kids)
    if (hasSideEffects(*k)) return true;
  return false;
}

bool containsReturn(const StmtList& list) {
  bool found = false;
  forEachStmt(list, [&](const Stmt& s) { found = found || s.kind == StmtKind::Return; });
  return found;
}

bool alwaysReturns(const StmtList& list) {
  for (const auto& s : list) {
    if (s->kind == StmtKind::Return) return true;
    if (s->kind == StmtKind::If && alwaysReturns(s->body) && alwaysReturns(s->alt)) return true;
    if (s->kind == StmtKind::Block && alwaysReturns(s->body)) return true;
  }
  return false;
}

std::vector<const StmtList*> childLists(const Stmt& s) {
  std::vector<const StmtList*> out{&s.init, &s.pre, &s.body, &s.step, &s.alt};
  for (const auto& c : s.cases) out.push_back(&c.body);
  return out;
}

std::vector<StmtList*> childLists(Stmt& s) {
  std::vector<StmtList*> out{&s.init, &s.pre, &s.body, &s.step, &s.alt};
  for (auto& c : s.cases) out.push_back(&c.body);
  return out;
}

void forEachExpr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  for (const auto& k : e.kids) forEachExpr(*k, fn);
}

void forEachExpr(const StmtList& list, const std::function<void(const Expr&)>& fn) {
  forEachStmt(list, [&](const Stmt& s) {
    if (s.expr) forEachExpr(*s.expr, fn);
  });
}

void forEachStmt(const StmtList& list, const std::function<void(const Stmt&)>& fn) {
  for (const auto& s : list) {
    fn(*s);
    for (const StmtList* c : childLists(*s)) forEachStmt(*c, fn);
  }
}

void forEachStmt(StmtList& list, const std::function<void(Stmt&)>& fn) {
  for (auto& s : list) {
    fn(*s);
    for (StmtList* c : childLists(*s)) forEachStmt(*c, fn);
  }
}

std::set<std::string> localsUsed(const StmtList& list) {
  std::set<std::string> out;
  forEachStmt(list, [&](const Stmt& s) {
    if (s.kind == StmtKind::Decl) out.insert(s.name);
  });
  forEachExpr(list, [&](const Expr& e) {
    if (isLocalVar(e)) out.insert(e.name);
  });
  return out;
}

std::set<std::string> addressTaken(const StmtList& list) {
  std::set<std::string> out;
  forEachExpr(list, [&](const Expr& e) {
    if ((e.kind == ExprKind::AddrOf || e.kind == ExprKind::Decay) && isLocalVar(*e.kids[0]))
      out.insert(e.kids[0]->name);
  });
  return out;
}

void substituteVar(Expr& e, const std::string& from, const Expr& to) {
  for (auto& k : e.kids) {
    if (isLocalVar(*k) && k->name == from) k = to.clone();
    else substituteVar(*k, from, to);
  }
}

StmtPtr assignStmt(ExprPtr place, ExprPtr value) { return Stmt::exprStmt(Expr::assign(std::move(place), std::move(value))); }

StmtPtr declStmt(const std::string& name, const CType& t, ExprPtr init) {
  auto s = Stmt::make(StmtKind::Decl);
  s->name = name;
  s->declType = t;
  s->expr = std::move(init);
  return s;
}

}  // namespace norm
}  // namespace c2pl
