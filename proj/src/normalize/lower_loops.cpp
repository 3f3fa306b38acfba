#include <deque>

#include "c2pl/error.hpp"
#include "c2pl/normalize/normalize.hpp"
#include "util.hpp"

namespace c2pl {
namespace {

using namespace norm;

bool isLoop(const Stmt& s) {
  return s.kind == StmtKind::While || s.kind == StmtKind::For || s.kind == StmtKind::DoWhile;
}

void usesExcept(const StmtList& list, const Stmt* skip, std::set<std::string>& out) {
  for (const auto& s : list) {
    if (s.get() == skip) continue;
    if (s->kind == StmtKind::Decl) out.insert(s->name);
    if (s->expr)
      forEachExpr(*s->expr, [&](const Expr& e) {
        if (isLocalVar(e)) out.insert(e.name);
      });
    for (const StmtList* c : childLists(*s)) usesExcept(*c, skip, out);
  }
}

struct Passed {
  std::string var;
  std::string param;
  bool byPointer = false;
};

class LoopLowerer {
 public:
  LoopLowerer(const TranslationUnit& tu, std::vector<FuncDef>& helpers) : tu_(tu), helpers_(helpers) {}

  void run(FuncDef& f) { walk(f, f.body); }

 private:
  std::string helperName(const std::string& root) {
    for (int k = 0;; ++k) {
      std::string n = root + "_loop" + std::to_string(k);
      if (tu_.findFunction(n) || findBuiltin(n) || taken_.count(n)) continue;
      taken_.insert(n);
      return n;
    }
  }

  void walk(FuncDef& f, StmtList& list) {
    for (size_t i = 0; i < list.size(); ++i) {
      Stmt& s = *list[i];
      if (isLoop(s)) {
        StmtList repl = lower(f, s);
        const size_t n = repl.size();
        list.erase(list.begin() + static_cast<std::ptrdiff_t>(i));
        for (size_t k = 0; k < n; ++k) list.insert(list.begin() + static_cast<std::ptrdiff_t>(i + k), std::move(repl[k]));
        i += n - 1;
        continue;
      }
      for (StmtList* c : childLists(s)) walk(f, *c);
    }
  }

  // Replaces Var v by *p in place positions and by a loaded temp elsewhere.
  struct Rewriter {
    FuncDef& h;
    const std::map<std::string, Passed>& passed;
    const RecordTable& records;

    int64_t sizeOf(const CType& t) const { return records.sizeOf(t); }

    const Passed* ptr(const Expr& e) const {
      if (!isLocalVar(e)) return nullptr;
      auto it = passed.find(e.name);
      return it != passed.end() && it->second.byPointer ? &it->second : nullptr;
    }

    ExprPtr derefOf(const Passed& p, const CType& t) const {
      auto e = Expr::make(ExprKind::Deref, t);
      e->kids.push_back(Expr::var(p.param, CType::pointerTo(t)));
      return e;
    }

    void operand(ExprPtr& e, StmtList& before) {
      if (const Passed* p = ptr(*e)) {
        const std::string t = freshName(h, "t");
        h.addLocal(t, e->type);
        before.push_back(declStmt(t, e->type, derefOf(*p, e->type)));
        e = Expr::var(t, e->type);
        return;
      }
      expr(*e, before);
    }

    void place(ExprPtr& e, StmtList& before) {
      if (const Passed* p = ptr(*e)) {
        e = derefOf(*p, e->type);
        return;
      }
      expr(*e, before);
    }

    void rhs(ExprPtr& e, StmtList& before) {
      switch (e->kind) {
        case ExprKind::Var:
        case ExprKind::Index:
        case ExprKind::Member:
        case ExprKind::Deref:
          place(e, before);
          return;
        default:
          expr(*e, before);
      }
    }

    void expr(Expr& e, StmtList& before) {
      switch (e.kind) {
        case ExprKind::Index:
          if (e.kids[0]->type.isArray()) place(e.kids[0], before);
          else operand(e.kids[0], before);
          operand(e.kids[1], before);
          return;
        case ExprKind::Member:
          place(e.kids[0], before);
          return;
        case ExprKind::AddrOf:
        case ExprKind::Decay:
          place(e.kids[0], before);
          return;
        case ExprKind::Assign:
          place(e.kids[0], before);
          rhs(e.kids[1], before);
          return;
        default:
          for (auto& k : e.kids) operand(k, before);
      }
    }

    static void collapseAddr(ExprPtr& e) {
      for (auto& k : e->kids) collapseAddr(k);
      if (e->kind == ExprKind::AddrOf && e->kids[0]->kind == ExprKind::Deref) {
        ExprPtr inner = std::move(e->kids[0]->kids[0]);
        if (inner->type != e->type) inner = Expr::cast(std::move(inner), e->type);
        e = std::move(inner);
      }
    }

    void list(StmtList& in) {
      StmtList out;
      for (auto& s : in) {
        StmtList before;
        switch (s->kind) {
          case StmtKind::Expr:
            expr(*s->expr, before);
            break;
          case StmtKind::Decl: {
            auto it = passed.find(s->name);
            if (it == passed.end() || !it->second.byPointer) {
              if (s->expr) rhs(s->expr, before);
              break;
            }
            auto dst = derefOf(it->second, s->declType);
            if (s->declType.isAggregate()) {
              std::vector<ExprPtr> args;
              args.push_back(Expr::var(it->second.param, CType::pointerTo(s->declType)));
              args.push_back(Expr::intConst(0, CType::intType()));
              args.push_back(Expr::intConst(sizeOf(s->declType), CType::ulongType()));
              s = Stmt::exprStmt(Expr::call("memset", std::move(args), CType::pointerTo(CType::voidType())));
              break;
            }
            if (s->expr) rhs(s->expr, before);
            ExprPtr init = s->expr ? std::move(s->expr) : zeroOf(s->declType);
            s = assignStmt(std::move(dst), std::move(init));
            break;
          }
          case StmtKind::Return:
            if (s->expr) operand(s->expr, before);
            break;
          case StmtKind::If:
            operand(s->expr, before);
            list(s->body);
            list(s->alt);
            break;
          case StmtKind::While:
          case StmtKind::For:
          case StmtKind::DoWhile:
            list(s->pre);
            if (s->expr) {
              StmtList condPre;
              operand(s->expr, condPre);
              for (auto& c : condPre) s->pre.push_back(std::move(c));
            }
            list(s->body);
            list(s->step);
            break;
          default:
            break;
        }
        if (s->expr) collapseAddr(s->expr);
        for (auto& b : before) out.push_back(std::move(b));
        out.push_back(std::move(s));
      }
      in = std::move(out);
    }
  };

  StmtList lower(FuncDef& f, Stmt& loop) {
    StmtList self;
    self.push_back(loop.clone());
    const std::set<std::string> inside = localsUsed(self);
    std::set<std::string> outside;
    usesExcept(f.body, &loop, outside);
    std::set<std::string> declared, written;
    forEachStmt(self, [&](const Stmt& s) {
      if (s.kind == StmtKind::Decl) declared.insert(s.name);
    });
    forEachExpr(self, [&](const Expr& e) {
      if (e.kind == ExprKind::Assign && isLocalVar(*e.kids[0])) written.insert(e.kids[0]->name);
    });
    const std::set<std::string> addrTaken = addressTaken(f.body);
    const bool hasRet = containsReturn(self);
    const bool voidFn = f.retType.isVoid();

    FuncDef h;
    h.name = helperName(f.helperOf.empty() ? f.name : f.helperOf);
    h.helperOf = f.helperOf.empty() ? f.name : f.helperOf;
    h.retType = CType::intType();
    h.pos = loop.pos;

    std::set<std::string> isParam;
    for (const auto& p : f.params) isParam.insert(p.name);
    std::vector<VarDecl> order = f.params;
    order.insert(order.end(), f.locals.begin(), f.locals.end());

    std::map<std::string, Passed> passed;
    std::vector<Passed> passOrder;
    std::set<std::string> names;
    auto unique = [&](std::string n) {
      while (names.count(n)) n += "_";
      names.insert(n);
      return n;
    };
    std::vector<const VarDecl*> toPass;
    for (const auto& v : order) {
      if (!inside.count(v.name)) continue;
      if (declared.count(v.name) && !outside.count(v.name) && !isParam.count(v.name)) {
        h.locals.push_back(v);
        names.insert(v.name);
        continue;
      }
      toPass.push_back(&v);
    }
    for (const VarDecl* v : toPass) {
      Passed p;
      p.var = v->name;
      p.byPointer = written.count(v->name) || declared.count(v->name) || addrTaken.count(v->name) || v->type.isAggregate();
      if (!p.byPointer) p.param = unique(v->name);
      passed[v->name] = p;
    }
    for (const VarDecl* v : toPass) {
      Passed& p = passed[v->name];
      if (p.byPointer) p.param = unique("p__" + v->name);
      h.params.push_back({p.param, p.byPointer ? CType::pointerTo(v->type) : v->type});
      passOrder.push_back(p);
    }
    std::string rvParam;
    if (hasRet && !voidFn) {
      rvParam = unique("p__rv");
      h.params.push_back({rvParam, CType::pointerTo(f.retType)});
    }

    auto selfCall = [&](FuncDef& in) {
      std::vector<ExprPtr> args;
      for (const auto& p : passOrder) args.push_back(Expr::var(p.param, in.findVar(p.param)->type));
      if (!rvParam.empty()) args.push_back(Expr::var(rvParam, CType::pointerTo(f.retType)));
      return Expr::call(h.name, std::move(args), CType::intType());
    };
    auto tailCall = [&](FuncDef& in, StmtList& out) {
      const std::string t = freshName(in, "t");
      in.addLocal(t, CType::intType());
      out.push_back(declStmt(t, CType::intType(), selfCall(in)));
      out.push_back(Stmt::ret(Expr::var(t, CType::intType())));
    };

    Rewriter rw{h, passed, tu_.records};
    StmtList pre = cloneList(loop.pre), body = cloneList(loop.body), step = cloneList(loop.step);
    rw.list(pre);
    rw.list(body);
    rw.list(step);
    ExprPtr cond = loop.expr ? loop.expr->clone() : Expr::intConst(1, CType::intType());
    rw.operand(cond, pre);
    Rewriter::collapseAddr(cond);

    auto latch = [&](StmtList& out) {
      if (loop.kind == StmtKind::DoWhile) {
        for (const auto& s : pre) out.push_back(s->clone());
        StmtList again, stop;
        tailCall(h, again);
        stop.push_back(Stmt::ret(Expr::intConst(0, CType::intType())));
        out.push_back(Stmt::ifStmt(cond->clone(), std::move(again), std::move(stop)));
        return;
      }
      for (const auto& s : step) out.push_back(s->clone());
      tailCall(h, out);
    };

    // break, continue and return of the enclosing function
    std::function<void(StmtList&, bool)> control = [&](StmtList& list, bool top) {
      StmtList out;
      for (auto& s : list) {
        if (top && s->kind == StmtKind::Break) {
          out.push_back(Stmt::ret(Expr::intConst(0, CType::intType())));
          continue;
        }
        if (top && s->kind == StmtKind::Continue) {
          latch(out);
          continue;
        }
        if (s->kind == StmtKind::Return) {
          if (s->expr && !rvParam.empty()) {
            auto dst = Expr::make(ExprKind::Deref, f.retType);
            dst->kids.push_back(Expr::var(rvParam, CType::pointerTo(f.retType)));
            out.push_back(assignStmt(std::move(dst), std::move(s->expr)));
          }
          out.push_back(Stmt::ret(Expr::intConst(1, CType::intType())));
          continue;
        }
        const bool nested = isLoop(*s);
        control(s->body, top && !nested);
        control(s->alt, top && !nested);
        out.push_back(std::move(s));
      }
      list = std::move(out);
    };
    control(body, true);

    if (loop.kind == StmtKind::DoWhile) {
      h.body = std::move(body);
      latch(h.body);
    } else {
      for (auto& s : pre) h.body.push_back(std::move(s));
      latch(body);
      StmtList stop;
      stop.push_back(Stmt::ret(Expr::intConst(0, CType::intType())));
      h.body.push_back(Stmt::ifStmt(std::move(cond), std::move(body), std::move(stop)));
    }

    // call site in f
    StmtList repl;
    std::vector<ExprPtr> args;
    for (const auto& p : passOrder) {
      const VarDecl* v = f.findVar(p.var);
      ExprPtr a = Expr::var(p.var, v->type);
      args.push_back(p.byPointer ? Expr::addrOf(std::move(a)) : std::move(a));
    }
    std::string rv;
    if (!rvParam.empty()) {
      rv = freshName(f, "rv");
      f.addLocal(rv, f.retType);
      repl.push_back(declStmt(rv, f.retType, zeroOf(f.retType)));
      args.push_back(Expr::addrOf(Expr::var(rv, f.retType)));
    }
    const std::string flag = freshName(f, "flag");
    f.addLocal(flag, CType::intType());
    repl.push_back(declStmt(flag, CType::intType(), Expr::call(h.name, std::move(args), CType::intType())));
    if (hasRet) {
      StmtList then, none;
      then.push_back(Stmt::ret(rv.empty() ? nullptr : Expr::var(rv, f.retType)));
      auto c = Expr::binary(BinOp::Ne, Expr::var(flag, CType::intType()), Expr::intConst(0, CType::intType()),
                            CType::intType());
      repl.push_back(Stmt::ifStmt(std::move(c), std::move(then), std::move(none)));
    }
    helpers_.push_back(std::move(h));
    return repl;
  }

  const TranslationUnit& tu_;
  std::vector<FuncDef>& helpers_;
  std::set<std::string> taken_;
};

}  // namespace

std::vector<FuncDef> lowerLoops(FuncDef& f, const TranslationUnit& tu) {
  std::vector<FuncDef> helpers;
  LoopLowerer low(tu, helpers);
  low.run(f);
  for (size_t i = 0; i < helpers.size(); ++i) {
    FuncDef h = std::move(helpers[i]);
    low.run(h);
    helpers[i] = std::move(h);
  }
  return helpers;
}

}  // namespace c2pl
