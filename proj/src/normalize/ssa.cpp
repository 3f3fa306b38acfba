#include <map>

#include "c2pl/normalize/normalize.hpp"
#include "util.hpp"

namespace c2pl {
namespace {

using namespace norm;

using Env = std::map<std::string, std::string>;

class Renamer {
 public:
  Renamer(FuncDef& f, const FuncInfo& info) : f_(f), info_(info) {
    for (const auto& p : f.params) types_[p.name] = p.type;
    for (const auto& l : f.locals) types_[l.name] = l.type;
  }

  void run() {
    Env env;
    for (const auto& p : f_.params) env[p.name] = p.name;
    list(f_.body, env);
  }

 private:
  bool renamable(const std::string& n) const {
    auto it = types_.find(n);
    return it != types_.end() && it->second.isScalar() && !info_.slotByHolder(n);
  }

  std::string version(const std::string& base) {
    int& k = counter_[base];
    for (;;) {
      std::string n = base + "__" + std::to_string(++k);
      if (!f_.hasVar(n)) {
        f_.addLocal(n, types_.at(base));
        return n;
      }
    }
  }

  void uses(Expr& e, const Env& env) {
    if (e.kind == ExprKind::AddrOf) return;
    if (isLocalVar(e)) {
      auto it = env.find(e.name);
      if (it != env.end()) e.name = it->second;
      return;
    }
    for (auto& k : e.kids) uses(*k, env);
  }

  // Returns true when every path through list returns.
  bool list(StmtList& in, Env& env) {
    for (auto& s : in) {
      switch (s->kind) {
        case StmtKind::Return:
          if (s->expr) uses(*s->expr, env);
          return true;
        case StmtKind::If: {
          uses(*s->expr, env);
          Env a = env, b = env;
          const bool ra = list(s->body, a);
          const bool rb = list(s->alt, b);
          if (ra && rb) return true;
          if (ra) env = std::move(b);
          else if (rb) env = std::move(a);
          else join(*s, a, b, env);
          break;
        }
        case StmtKind::Expr: {
          Expr& e = *s->expr;
          if (e.kind == ExprKind::Assign) {
            uses(*e.kids[1], env);
            Expr& lhs = *e.kids[0];
            if (isLocalVar(lhs) && renamable(lhs.name)) {
              const std::string base = lhs.name;
              const std::string n = version(base);
              env[base] = n;
              lhs.name = n;
            } else {
              uses(lhs, env);
            }
          } else {
            uses(e, env);
          }
          break;
        }
        default:
          break;
      }
    }
    return false;
  }

  void join(Stmt& s, const Env& a, const Env& b, Env& env) {
    std::set<std::string> keys;
    for (const auto& [k, v] : a) keys.insert(k);
    for (const auto& [k, v] : b) keys.insert(k);
    for (const auto& k : keys) {
      auto ia = a.find(k), ib = b.find(k);
      if (ia != a.end() && ib != b.end() && ia->second == ib->second) {
        env[k] = ia->second;
        continue;
      }
      const CType& t = types_.at(k);
      const std::string j = version(k);
      auto value = [&](const Env& e, Env::const_iterator it) -> ExprPtr {
        if (it == e.end()) return zeroOf(t);
        return Expr::var(it->second, t);
      };
      s.body.push_back(assignStmt(Expr::var(j, t), value(a, ia)));
      s.alt.push_back(assignStmt(Expr::var(j, t), value(b, ib)));
      env[k] = j;
    }
  }

  FuncDef& f_;
  const FuncInfo& info_;
  std::map<std::string, CType> types_;
  std::map<std::string, int> counter_;
};

void countUses(const Expr& e, std::map<std::string, int>& n) {
  if (e.kind == ExprKind::AddrOf) return;
  if (isLocalVar(e)) ++n[e.name];
  for (const auto& k : e.kids) countUses(*k, n);
}

void collect(const StmtList& list, std::map<std::string, int>& defs, std::map<std::string, int>& uses) {
  forEachStmt(list, [&](const Stmt& s) {
    if (!s.expr) return;
    const Expr& e = *s.expr;
    if (e.kind == ExprKind::Assign && isLocalVar(*e.kids[0])) {
      ++defs[e.kids[0]->name];
      countUses(*e.kids[1], uses);
    } else {
      countUses(e, uses);
    }
  });
}

bool isPure(const Expr& r) {
  switch (r.kind) {
    case ExprKind::IntConst:
    case ExprKind::FloatConst:
    case ExprKind::Var:
    case ExprKind::FuncRef:
    case ExprKind::AddrOf:
    case ExprKind::Unary:
    case ExprKind::Cast:
      return true;
    case ExprKind::Binary:
      if (r.binOp == BinOp::Div || r.binOp == BinOp::Rem)
        return r.kids[1]->kind == ExprKind::IntConst && r.kids[1]->ival != 0;
      return true;
    default:
      return false;
  }
}

bool isCopySource(const Expr& r) {
  return isAtom(r) || (r.kind == ExprKind::AddrOf && r.kids[0]->kind == ExprKind::Var && r.kids[0]->scope == VarScope::Global);
}

void replaceUses(Expr& e, const std::string& from, const Expr& to) {
  if (e.kind == ExprKind::AddrOf) return;
  for (auto& k : e.kids) {
    if (isLocalVar(*k) && k->name == from) k = to.clone();
    else replaceUses(*k, from, to);
  }
}

void replaceAll(StmtList& list, const std::string& from, const Expr& to) {
  for (auto& s : list) {
    if (s->expr) {
      Expr& e = *s->expr;
      if (isLocalVar(e) && e.name == from) s->expr = to.clone();
      else if (e.kind == ExprKind::Assign && isLocalVar(*e.kids[0])) {
        if (isLocalVar(*e.kids[1]) && e.kids[1]->name == from) e.kids[1] = to.clone();
        else replaceUses(*e.kids[1], from, to);
      } else {
        replaceUses(e, from, to);
      }
    }
    for (StmtList* c : childLists(*s)) replaceAll(*c, from, to);
  }
}

// Removes statements matching pred; returns true if any was removed.
bool removeIf(StmtList& list, const std::function<bool(const Stmt&)>& pred) {
  bool any = false;
  StmtList out;
  for (auto& s : list) {
    for (StmtList* c : childLists(*s)) any |= removeIf(*c, pred);
    if (pred(*s)) {
      any = true;
      continue;
    }
    out.push_back(std::move(s));
  }
  list = std::move(out);
  return any;
}

}  // namespace

void ssaRename(FuncDef& f, const FuncInfo& info) { Renamer(f, info).run(); }

void simplify(FuncDef& f, const FuncInfo& info) {
  auto isHolder = [&](const std::string& n) { return info.slotByHolder(n) != nullptr; };
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::string, int> defs, uses;
    collect(f.body, defs, uses);

    // copy propagation for single-definition variables
    std::string from;
    ExprPtr to;
    forEachStmt(f.body, [&](const Stmt& s) {
      if (to || s.kind != StmtKind::Expr || s.expr->kind != ExprKind::Assign) return;
      const Expr& l = *s.expr->kids[0];
      const Expr& r = *s.expr->kids[1];
      if (!isLocalVar(l) || isHolder(l.name) || defs[l.name] != 1 || !isCopySource(r)) return;
      if (isLocalVar(r) && r.name == l.name) return;
      if (r.type != l.type) return;
      from = l.name;
      to = r.clone();
    });
    if (to) {
      replaceAll(f.body, from, *to);
      removeIf(f.body, [&](const Stmt& s) {
        return s.kind == StmtKind::Expr && s.expr->kind == ExprKind::Assign && isLocalVar(*s.expr->kids[0]) &&
               s.expr->kids[0]->name == from;
      });
      changed = true;
      continue;
    }

    changed = removeIf(f.body, [&](const Stmt& s) {
      if (s.kind != StmtKind::Expr || s.expr->kind != ExprKind::Assign) return false;
      const Expr& l = *s.expr->kids[0];
      const Expr& r = *s.expr->kids[1];
      const bool slotLoad = r.kind == ExprKind::Deref && isLocalVar(*r.kids[0]) && isHolder(r.kids[0]->name);
      return isLocalVar(l) && !isHolder(l.name) && uses[l.name] == 0 && (isPure(r) || slotLoad);
    });
  }
  // drop locals that no longer occur
  std::set<std::string> live = localsUsed(f.body);
  forEachExpr(f.body, [&](const Expr& e) {
    if (e.kind == ExprKind::AddrOf && isLocalVar(*e.kids[0])) live.insert(e.kids[0]->name);
  });
  std::vector<VarDecl> keep;
  for (auto& l : f.locals)
    if (live.count(l.name)) keep.push_back(l);
  f.locals = std::move(keep);
}

}  // namespace c2pl
