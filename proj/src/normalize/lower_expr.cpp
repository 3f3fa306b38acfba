#include "c2pl/error.hpp"
#include "c2pl/normalize/normalize.hpp"
#include "util.hpp"

namespace c2pl {
namespace {

using namespace norm;

class ExprLowerer {
 public:
  ExprLowerer(FuncDef& f, const TranslationUnit& tu) : f_(f), tu_(tu) {}

  StmtList list(const StmtList& in) {
    StmtList out;
    for (const auto& s : in) stmt(*s, out);
    return out;
  }

 private:
  ExprPtr temp(ExprPtr rhs, StmtList& out) {
    const std::string n = freshName(f_, "t");
    const CType t = rhs->type;
    f_.addLocal(n, t);
    temps_.insert(n);
    out.push_back(declStmt(n, t, std::move(rhs)));
    return Expr::var(n, t);
  }

  ExprPtr emptyTemp(const CType& t, StmtList& out) { return temp(zeroOf(t), out); }

  bool isTemp(const Expr& e) const { return isLocalVar(e) && temps_.count(e.name); }

  // A variable operand read before later side effects must be copied first.
  void freeze(ExprPtr& op, StmtList& out) {
    if (op->kind == ExprKind::Var && !isTemp(*op)) op = temp(op->clone(), out);
  }

  void freezePlace(Expr& p, StmtList& out) {
    switch (p.kind) {
      case ExprKind::Deref: freeze(p.kids[0], out); return;
      case ExprKind::Member: freezePlace(*p.kids[0], out); return;
      case ExprKind::Index:
        if (p.kids[0]->type.isArray()) freezePlace(*p.kids[0], out);
        else freeze(p.kids[0], out);
        freeze(p.kids[1], out);
        return;
      default: return;
    }
  }

  ExprPtr operand(const Expr& e, StmtList& out) {
    ExprPtr r = rvalue(e, out);
    if (isAtom(*r)) return r;
    return temp(std::move(r), out);
  }

  std::vector<ExprPtr> operands(const std::vector<ExprPtr>& in, size_t from, StmtList& out) {
    std::vector<ExprPtr> ops;
    for (size_t i = from; i < in.size(); ++i) {
      ops.push_back(operand(*in[i], out));
      bool later = false;
      for (size_t j = i + 1; j < in.size(); ++j) later = later || hasSideEffects(*in[j]);
      if (later) freeze(ops.back(), out);
    }
    return ops;
  }

  ExprPtr place(const Expr& e, StmtList& out) {
    switch (e.kind) {
      case ExprKind::Var:
        return e.clone();
      case ExprKind::Deref: {
        auto r = Expr::make(ExprKind::Deref, e.type);
        r->kids.push_back(operand(*e.kids[0], out));
        return r;
      }
      case ExprKind::Member: {
        auto r = Expr::make(ExprKind::Member, e.type);
        r->name = e.name;
        r->kids.push_back(place(*e.kids[0], out));
        return r;
      }
      case ExprKind::Index: {
        auto r = Expr::make(ExprKind::Index, e.type);
        const Expr& base = *e.kids[0];
        if (base.type.isArray()) {
          r->kids.push_back(place(base, out));
          if (hasSideEffects(*e.kids[1])) freezePlace(*r->kids[0], out);
        } else {
          r->kids.push_back(operand(base, out));
          if (hasSideEffects(*e.kids[1])) freeze(r->kids[0], out);
        }
        r->kids.push_back(operand(*e.kids[1], out));
        return r;
      }
      case ExprKind::Assign:
        return assign(e, out, true);
      default:
        fail(ErrorCode::Type, "expression is not a place");
    }
  }

  ExprPtr load(ExprPtr p, StmtList& out) {
    if (p->kind == ExprKind::Var) return p;
    return temp(std::move(p), out);
  }

  ExprPtr rvalue(const Expr& e, StmtList& out) {
    switch (e.kind) {
      case ExprKind::IntConst:
      case ExprKind::FloatConst:
      case ExprKind::FuncRef:
      case ExprKind::Var:
        return e.clone();
      case ExprKind::Deref:
      case ExprKind::Index:
      case ExprKind::Member:
        return place(e, out);
      case ExprKind::AddrOf: {
        if (e.kids[0]->kind == ExprKind::Deref) return operand(*e.kids[0]->kids[0], out);
        auto r = Expr::make(ExprKind::AddrOf, e.type);
        r->kids.push_back(place(*e.kids[0], out));
        return r;
      }
      case ExprKind::Decay: {
        auto r = Expr::make(ExprKind::Decay, e.type);
        r->kids.push_back(place(*e.kids[0], out));
        return r;
      }
      case ExprKind::Unary:
        return Expr::unary(e.unOp, operand(*e.kids[0], out), e.type);
      case ExprKind::Binary: {
        if (e.binOp == BinOp::LogAnd || e.binOp == BinOp::LogOr) return logical(e, out);
        ExprPtr a = operand(*e.kids[0], out);
        if (hasSideEffects(*e.kids[1])) freeze(a, out);
        ExprPtr b = operand(*e.kids[1], out);
        return Expr::binary(e.binOp, std::move(a), std::move(b), e.type);
      }
      case ExprKind::Cast:
        if (e.type.isVoid()) {
          effect(*e.kids[0], out);
          return Expr::intConst(0, CType::intType());
        }
        return Expr::cast(operand(*e.kids[0], out), e.type);
      case ExprKind::Assign:
      case ExprKind::CompoundAssign:
      case ExprKind::IncDec:
        return assign(e, out, true);
      case ExprKind::Call:
        return Expr::call(e.name, operands(e.kids, 0, out), e.type);
      case ExprKind::IndCall: {
        auto r = Expr::make(ExprKind::IndCall, e.type);
        r->kids.push_back(operand(*e.kids[0], out));
        if (e.kids.size() > 1 && hasSideEffects(e)) freeze(r->kids[0], out);
        for (auto& a : operands(e.kids, 1, out)) r->kids.push_back(std::move(a));
        return r;
      }
      case ExprKind::Ternary: {
        ExprPtr c = cond(*e.kids[0], out);
        ExprPtr t = emptyTemp(e.type, out);
        StmtList th, el;
        th.push_back(assignStmt(t->clone(), rvalue(*e.kids[1], th)));
        el.push_back(assignStmt(t->clone(), rvalue(*e.kids[2], el)));
        out.push_back(Stmt::ifStmt(std::move(c), std::move(th), std::move(el)));
        return t;
      }
      case ExprKind::InitList:
        fail(ErrorCode::Type, "initializer list used as a value");
    }
    fail(ErrorCode::Type, "unhandled expression");
  }

  ExprPtr logical(const Expr& e, StmtList& out) {
    const bool isAnd = e.binOp == BinOp::LogAnd;
    ExprPtr t = temp(Expr::intConst(isAnd ? 0 : 1, CType::intType()), out);
    ExprPtr c = cond(*e.kids[0], out);
    StmtList inner;
    ExprPtr c2 = cond(*e.kids[1], inner);
    StmtList set, none;
    set.push_back(assignStmt(t->clone(), Expr::intConst(isAnd ? 1 : 0, CType::intType())));
    if (isAnd) inner.push_back(Stmt::ifStmt(std::move(c2), std::move(set), std::move(none)));
    else inner.push_back(Stmt::ifStmt(std::move(c2), std::move(none), std::move(set)));
    StmtList other;
    if (isAnd) out.push_back(Stmt::ifStmt(std::move(c), std::move(inner), std::move(other)));
    else out.push_back(Stmt::ifStmt(std::move(c), std::move(other), std::move(inner)));
    return t;
  }

  ExprPtr cond(const Expr& e, StmtList& out) {
    if (e.kind == ExprKind::Binary && isRelational(e.binOp)) return rvalue(e, out);
    if (e.kind == ExprKind::Unary && e.unOp == UnOp::LogNot && e.kids[0]->type.isScalar()) {
      ExprPtr a = operand(*e.kids[0], out);
      CType t = a->type;
      return Expr::binary(BinOp::Eq, std::move(a), zeroOf(t), CType::intType());
    }
    return operand(e, out);
  }

  ExprPtr convert(ExprPtr v, const CType& to, StmtList& out) {
    if (v->type == to) return v;
    if (v->kind == ExprKind::Var || isAtom(*v)) return temp(Expr::cast(std::move(v), to), out);
    return temp(Expr::cast(temp(std::move(v), out), to), out);
  }

  ExprPtr assign(const Expr& e, StmtList& out, bool wantValue) {
    const Expr& lhs = *e.kids[0];
    ExprPtr dst = place(lhs, out);
    const bool rhsEffects = e.kids.size() > 1 && hasSideEffects(*e.kids[1]);
    if (rhsEffects) freezePlace(*dst, out);
    const CType& lt = lhs.type;

    if (e.kind == ExprKind::Assign && lt.isRecord()) {
      ExprPtr src = place(*e.kids[1], out);
      ExprPtr d = temp(Expr::addrOf(dst->clone()), out);
      ExprPtr s = temp(Expr::addrOf(std::move(src)), out);
      std::vector<ExprPtr> args;
      args.push_back(std::move(d));
      args.push_back(std::move(s));
      args.push_back(Expr::intConst(tu_.records.sizeOf(lt), CType::ulongType()));
      out.push_back(Stmt::exprStmt(Expr::call("memcpy", std::move(args), CType::pointerTo(CType::voidType()))));
      return dst;
    }

    ExprPtr value;
    if (e.kind == ExprKind::Assign) {
      value = rvalue(*e.kids[1], out);
    } else if (e.kind == ExprKind::CompoundAssign) {
      ExprPtr rhs = operand(*e.kids[1], out);
      ExprPtr old = load(dst->clone(), out);
      if (lt.isPointer()) {
        value = Expr::binary(e.binOp, std::move(old), std::move(rhs), lt);
      } else {
        ExprPtr a = convert(std::move(old), e.opType, out);
        ExprPtr r = Expr::binary(e.binOp, std::move(a), std::move(rhs), e.opType);
        value = e.opType == lt ? std::move(r) : Expr::cast(temp(std::move(r), out), lt);
      }
    } else {
      ExprPtr old = load(dst->clone(), out);
      if (wantValue && !e.isPrefix) old = temp(std::move(old), out);
      ExprPtr one = lt.isFloating() ? Expr::floatConst(1.0, lt)
                    : lt.isPointer() ? Expr::intConst(1, CType::longType())
                                     : Expr::intConst(1, lt);
      value = Expr::binary(e.isInc ? BinOp::Add : BinOp::Sub, old->clone(), std::move(one), lt);
      if (wantValue && !e.isPrefix) {
        out.push_back(assignStmt(std::move(dst), std::move(value)));
        return old;
      }
    }
    if (wantValue && !isAtom(*value)) value = temp(std::move(value), out);
    ExprPtr result = wantValue ? value->clone() : nullptr;
    out.push_back(assignStmt(std::move(dst), std::move(value)));
    return result;
  }

  void effect(const Expr& e, StmtList& out) {
    switch (e.kind) {
      case ExprKind::Assign:
      case ExprKind::CompoundAssign:
      case ExprKind::IncDec:
        assign(e, out, false);
        return;
      case ExprKind::Call:
      case ExprKind::IndCall:
        out.push_back(Stmt::exprStmt(rvalue(e, out)));
        return;
      case ExprKind::Cast:
        effect(*e.kids[0], out);
        return;
      case ExprKind::Ternary: {
        ExprPtr c = cond(*e.kids[0], out);
        StmtList th, el;
        effect(*e.kids[1], th);
        effect(*e.kids[2], el);
        out.push_back(Stmt::ifStmt(std::move(c), std::move(th), std::move(el)));
        return;
      }
      case ExprKind::Binary:
        if (e.binOp == BinOp::LogAnd || e.binOp == BinOp::LogOr) {
          ExprPtr c = cond(*e.kids[0], out);
          StmtList rest, none;
          effect(*e.kids[1], rest);
          if (e.binOp == BinOp::LogAnd) out.push_back(Stmt::ifStmt(std::move(c), std::move(rest), std::move(none)));
          else out.push_back(Stmt::ifStmt(std::move(c), std::move(none), std::move(rest)));
          return;
        }
        break;
      default:
        break;
    }
    if (e.type.isAggregate()) return;
    ExprPtr r = rvalue(e, out);
    if (!isAtom(*r)) temp(std::move(r), out);
  }

  void initStores(ExprPtr dst, const CType& t, const Expr& init, StmtList& out) {
    if (init.kind != ExprKind::InitList) {
      if (t.isAggregate()) {
        auto e = Expr::assign(std::move(dst), init.clone());
        assign(*e, out, false);
        return;
      }
      out.push_back(assignStmt(std::move(dst), rvalue(init, out)));
      return;
    }
    if (t.isArray()) {
      for (size_t i = 0; i < init.kids.size(); ++i) {
        auto ix = Expr::make(ExprKind::Index, *t.elem);
        ix->kids.push_back(dst->clone());
        ix->kids.push_back(Expr::intConst(static_cast<int64_t>(i), CType::longType()));
        initStores(std::move(ix), *t.elem, *init.kids[i], out);
      }
    } else if (t.isRecord()) {
      const RecordInfo& r = tu_.records.get(t.tag);
      for (size_t i = 0; i < init.kids.size(); ++i) {
        auto m = Expr::make(ExprKind::Member, r.fields[i].type);
        m->name = r.fields[i].name;
        m->kids.push_back(dst->clone());
        initStores(std::move(m), r.fields[i].type, *init.kids[i], out);
      }
    } else if (!init.kids.empty()) {
      initStores(std::move(dst), t, *init.kids[0], out);
    }
  }

  void decl(const Stmt& s, StmtList& out) {
    const CType& t = s.declType;
    if (t.isAggregate()) {
      out.push_back(declStmt(s.name, t, nullptr));
      if (s.expr) initStores(Expr::var(s.name, t), t, *s.expr, out);
      return;
    }
    const Expr* init = s.expr.get();
    while (init && init->kind == ExprKind::InitList) init = init->kids.empty() ? nullptr : init->kids[0].get();
    out.push_back(declStmt(s.name, t, init ? rvalue(*init, out) : zeroOf(t)));
  }

  // Case bodies with fall-through resolved: each entry runs until a break.
  std::vector<StmtList> caseBodies(const Stmt& s) {
    std::vector<StmtList> bodies;
    for (size_t i = 0; i < s.cases.size(); ++i) {
      StmtList b;
      for (size_t j = i; j < s.cases.size(); ++j) {
        const StmtList& cb = s.cases[j].body;
        const bool brk = !cb.empty() && cb.back()->kind == StmtKind::Break;
        for (size_t k = 0; k + (brk ? 1 : 0) < cb.size(); ++k) b.push_back(cb[k]->clone());
        if (brk) break;
      }
      bodies.push_back(std::move(b));
    }
    return bodies;
  }

  void switchStmt(const Stmt& s, StmtList& out) {
    ExprPtr v = operand(*s.expr, out);
    std::vector<StmtList> bodies = caseBodies(s);
    StmtList chain;
    for (size_t i = 0; i < s.cases.size(); ++i)
      if (s.cases[i].isDefault) chain = list(bodies[i]);
    for (size_t i = s.cases.size(); i-- > 0;) {
      if (s.cases[i].isDefault) continue;
      auto c = Expr::binary(BinOp::Eq, v->clone(), Expr::intConst(s.cases[i].value, v->type), CType::intType());
      StmtList next;
      next.push_back(Stmt::ifStmt(std::move(c), list(bodies[i]), std::move(chain)));
      chain = std::move(next);
    }
    for (auto& st : chain) out.push_back(std::move(st));
  }

  void stmt(const Stmt& s, StmtList& out) {
    switch (s.kind) {
      case StmtKind::Expr:
        effect(*s.expr, out);
        return;
      case StmtKind::Decl:
        decl(s, out);
        return;
      case StmtKind::If: {
        ExprPtr c = cond(*s.expr, out);
        out.push_back(Stmt::ifStmt(std::move(c), list(s.body), list(s.alt)));
        return;
      }
      case StmtKind::While:
      case StmtKind::For:
      case StmtKind::DoWhile: {
        if (s.kind == StmtKind::For)
          for (const auto& i : s.init) stmt(*i, out);
        auto loop = Stmt::make(s.kind == StmtKind::DoWhile ? StmtKind::DoWhile : StmtKind::For);
        loop->pos = s.pos;
        loop->pre = list(s.pre);
        if (s.expr) loop->expr = cond(*s.expr, loop->pre);
        loop->body = list(s.body);
        loop->step = list(s.step);
        if (loop->step.empty() && loop->kind == StmtKind::For) loop->kind = StmtKind::While;
        if (!loop->expr && loop->kind != StmtKind::DoWhile) loop->expr = Expr::intConst(1, CType::intType());
        out.push_back(std::move(loop));
        return;
      }
      case StmtKind::Switch:
        switchStmt(s, out);
        return;
      case StmtKind::Break:
      case StmtKind::Continue:
        out.push_back(Stmt::make(s.kind));
        return;
      case StmtKind::Return: {
        auto r = Stmt::make(StmtKind::Return);
        r->pos = s.pos;
        if (s.expr) r->expr = operand(*s.expr, out);
        out.push_back(std::move(r));
        return;
      }
      case StmtKind::Block:
        for (const auto& b : s.body) stmt(*b, out);
        return;
    }
  }

  FuncDef& f_;
  const TranslationUnit& tu_;
  std::set<std::string> temps_;
};

}  // namespace

FuncDef lowerExpressions(const FuncDef& f, const TranslationUnit& tu) {
  FuncDef out = f.clone();
  out.body.clear();
  ExprLowerer low(out, tu);
  out.body = low.list(f.body);
  return out;
}

}  // namespace c2pl
