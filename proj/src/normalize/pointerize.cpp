#include "c2pl/error.hpp"
#include "c2pl/normalize/normalize.hpp"
#include "util.hpp"

namespace c2pl {

const Slot* FuncInfo::slotOf(const std::string& var) const {
  for (const auto& s : slots)
    if (s.var == var) return &s;
  return nullptr;
}

const Slot* FuncInfo::slotByHolder(const std::string& holder) const {
  for (const auto& s : slots)
    if (s.holder == holder) return &s;
  return nullptr;
}

namespace {

using namespace norm;

const CType& charPtr() {
  static const CType t = CType::pointerTo(CType::charType());
  return t;
}

class Pointerizer {
 public:
  Pointerizer(FuncDef& f, const TranslationUnit& tu, const FuncInfo& info) : f_(f), tu_(tu), info_(info) {}

  StmtList list(StmtList& in) {
    StmtList out;
    for (auto& s : in) stmt(*s, out);
    return out;
  }

 private:
  ExprPtr tmp(ExprPtr rhs, StmtList& out) {
    const std::string n = freshName(f_, "t");
    CType t = rhs->type;
    f_.addLocal(n, t);
    out.push_back(assignStmt(Expr::var(n, t), std::move(rhs)));
    return Expr::var(n, t);
  }

  bool isValueVar(const Expr& e) const { return isLocalVar(e) && e.type.isScalar(); }

  ExprPtr operand(const Expr& e, StmtList& out) {
    if (e.kind == ExprKind::Var && !isValueVar(e)) return tmp(Expr::deref(addr(e, out)), out);
    if (e.kind == ExprKind::AddrOf) return asOperand(rhs(e, out), out);
    return e.clone();
  }

  ExprPtr castTo(ExprPtr p, const CType& t, StmtList& out) {
    if (p->type == t) return p;
    return tmp(Expr::cast(std::move(p), t), out);
  }

  ExprPtr addr(const Expr& place, StmtList& out) {
    switch (place.kind) {
      case ExprKind::Var: {
        if (place.scope == VarScope::Global) return Expr::addrOf(place.clone());
        const Slot* s = info_.slotOf(place.name);
        if (!s) fail(ErrorCode::Type, "'" + place.name + "' has no slot in " + f_.name);
        return Expr::var(s->holder, CType::pointerTo(s->type));
      }
      case ExprKind::Deref:
        return operand(*place.kids[0], out);
      case ExprKind::Member: {
        const Expr& base = *place.kids[0];
        ExprPtr pb = addr(base, out);
        const int64_t off = tu_.records.fieldOffset(base.type.tag, place.name);
        const CType ft = CType::pointerTo(place.type);
        if (off == 0) return castTo(std::move(pb), ft, out);
        ExprPtr c = castTo(std::move(pb), charPtr(), out);
        ExprPtr sum = tmp(Expr::binary(BinOp::Add, std::move(c), Expr::intConst(off, CType::longType()), charPtr()), out);
        return castTo(std::move(sum), ft, out);
      }
      case ExprKind::Index: {
        const Expr& base = *place.kids[0];
        const CType et = CType::pointerTo(place.type);
        ExprPtr pe = base.type.isArray() ? castTo(addr(base, out), et, out) : operand(base, out);
        ExprPtr i = operand(*place.kids[1], out);
        if (i->kind == ExprKind::IntConst && i->ival == 0) return pe;
        return tmp(Expr::binary(BinOp::Add, std::move(pe), std::move(i), et), out);
      }
      default:
        fail(ErrorCode::Type, "expression is not a place");
    }
  }

  bool isMemoryPlace(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::Var: return !isValueVar(e);
      case ExprKind::Deref:
      case ExprKind::Member:
      case ExprKind::Index: return true;
      default: return false;
    }
  }

  ExprPtr rhs(const Expr& r, StmtList& out) {
    if (isMemoryPlace(r)) return Expr::deref(addr(r, out));
    switch (r.kind) {
      case ExprKind::AddrOf: {
        const Expr& p = *r.kids[0];
        if (isLocalVar(p) || p.kind != ExprKind::Var) {
          ExprPtr a = addr(p, out);
          return a->type == r.type ? std::move(a) : Expr::cast(std::move(a), r.type);
        }
        return r.clone();
      }
      case ExprKind::Decay: {
        ExprPtr a = addr(*r.kids[0], out);
        return a->type == r.type ? std::move(a) : Expr::cast(std::move(a), r.type);
      }
      case ExprKind::Unary:
      case ExprKind::Binary:
      case ExprKind::Cast:
      case ExprKind::Call:
      case ExprKind::IndCall: {
        ExprPtr c = r.clone();
        for (size_t i = 0; i < c->kids.size(); ++i) c->kids[i] = operand(*r.kids[i], out);
        return c;
      }
      default:
        return operand(r, out);
    }
  }

  ExprPtr asOperand(ExprPtr v, StmtList& out) {
    if (isAtom(*v) || v->kind == ExprKind::AddrOf) return v;
    return tmp(std::move(v), out);
  }

  void store(const Expr& place, const Expr& value, StmtList& out) {
    if (isValueVar(place)) {
      ExprPtr v = rhs(value, out);
      out.push_back(assignStmt(place.clone(), std::move(v)));
      return;
    }
    ExprPtr a = addr(place, out);
    ExprPtr v = asOperand(rhs(value, out), out);
    auto dst = Expr::make(ExprKind::Deref, place.type);
    dst->kids.push_back(std::move(a));
    out.push_back(assignStmt(std::move(dst), std::move(v)));
  }

  void stmt(Stmt& s, StmtList& out) {
    switch (s.kind) {
      case StmtKind::Decl: {
        if (s.declType.isAggregate()) {
          std::vector<ExprPtr> args;
          args.push_back(addr(*Expr::var(s.name, s.declType), out));
          args.push_back(Expr::intConst(0, CType::intType()));
          args.push_back(Expr::intConst(tu_.records.sizeOf(s.declType), CType::ulongType()));
          out.push_back(Stmt::exprStmt(Expr::call("memset", std::move(args), CType::pointerTo(CType::voidType()))));
          return;
        }
        ExprPtr init = s.expr ? std::move(s.expr) : zeroOf(s.declType);
        store(*Expr::var(s.name, s.declType), *init, out);
        return;
      }
      case StmtKind::Expr: {
        const Expr& e = *s.expr;
        if (e.kind == ExprKind::Assign) store(*e.kids[0], *e.kids[1], out);
        else out.push_back(Stmt::exprStmt(rhs(e, out)));
        return;
      }
      case StmtKind::If: {
        ExprPtr c = rhs(*s.expr, out);
        if (!isAtom(*c) && !(c->kind == ExprKind::Binary && isRelational(c->binOp))) c = tmp(std::move(c), out);
        out.push_back(Stmt::ifStmt(std::move(c), list(s.body), list(s.alt)));
        return;
      }
      case StmtKind::Return: {
        auto r = Stmt::make(StmtKind::Return);
        if (s.expr) r->expr = asOperand(rhs(*s.expr, out), out);
        out.push_back(std::move(r));
        return;
      }
      default:
        fail(ErrorCode::Type, "pointerize expects loop-free three-address code");
    }
  }

  FuncDef& f_;
  const TranslationUnit& tu_;
  const FuncInfo& info_;
};

}  // namespace

FuncInfo pointerize(FuncDef& f, const TranslationUnit& tu) {
  FuncInfo info;
  std::set<std::string> taken = addressTaken(f.body);
  std::vector<std::pair<VarDecl, bool>> vars;
  for (const auto& p : f.params) vars.push_back({p, true});
  for (const auto& l : f.locals) vars.push_back({l, false});
  for (const auto& [v, isParam] : vars) {
    if (!taken.count(v.name) && !v.type.isAggregate()) continue;
    Slot s;
    s.var = v.name;
    s.type = v.type;
    std::string h = "pa_" + v.name;
    while (f.hasVar(h)) h += "_";
    s.holder = h;
    f.addLocal(h, CType::pointerTo(v.type));
    const Layout lay = tu.records.layout(v.type);
    s.size = lay.size;
    s.align = lay.align;
    s.isParam = isParam;
    info.slots.push_back(s);
  }

  StmtList entry;
  for (const auto& s : info.slots) {
    entry.push_back(norm::assignStmt(Expr::var(s.holder, CType::pointerTo(s.type)), Expr::addrOf(Expr::var(s.var, s.type))));
    if (s.isParam && !s.type.isAggregate())
      entry.push_back(norm::assignStmt(Expr::var(s.var, s.type), Expr::deref(Expr::var(s.holder, CType::pointerTo(s.type)))));
  }
  Pointerizer pz(f, tu, info);
  StmtList body = pz.list(f.body);
  for (auto& s : body) entry.push_back(std::move(s));
  f.body = std::move(entry);
  return info;
}

}  // namespace c2pl
