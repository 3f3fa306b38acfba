#include "c2pl/normalize/normalize.hpp"
#include "util.hpp"

namespace c2pl {
namespace {

using namespace norm;

bool isIoBuiltin(const std::string& n) {
  return n == "print_int" || n == "print_float" || n == "putchar" || n == "read_int" || n == "malloc" || n == "free";
}

class FlushReload {
 public:
  FlushReload(FuncDef& f, const FuncInfo& info, const PointsTo& pts, const TranslationUnit& tu)
      : f_(f), info_(info), pts_(pts), tu_(tu) {}

  void run() {
    StmtList out;
    size_t i = 0;
    for (; i < f_.body.size() && isPrologue(*f_.body[i]); ++i) out.push_back(std::move(f_.body[i]));
    StmtList rest;
    for (; i < f_.body.size(); ++i) rest.push_back(std::move(f_.body[i]));
    list(rest);
    for (auto& s : rest) out.push_back(std::move(s));
    f_.body = std::move(out);
  }

 private:
  bool isPrologue(const Stmt& s) const {
    if (s.kind != StmtKind::Expr || s.expr->kind != ExprKind::Assign) return false;
    const Expr& l = *s.expr->kids[0];
    const Expr& r = *s.expr->kids[1];
    if (isLocalVar(l) && info_.slotByHolder(l.name) && r.kind == ExprKind::AddrOf) return true;
    return isLocalVar(l) && info_.slotOf(l.name) && r.kind == ExprKind::Deref && isLocalVar(*r.kids[0]) &&
           info_.slotByHolder(r.kids[0]->name);
  }

  std::vector<const Slot*> scalarsIn(const std::set<std::string>& locs) const {
    std::vector<const Slot*> out;
    for (const auto& s : info_.slots) {
      if (s.type.isAggregate()) continue;
      if (pts_.conservative() || locs.count(PointsTo::localLoc(f_.name, s.var))) out.push_back(&s);
    }
    return out;
  }

  ExprPtr holder(const Slot& s) const {
    auto d = Expr::make(ExprKind::Deref, s.type);
    d->kids.push_back(Expr::var(s.holder, CType::pointerTo(s.type)));
    return d;
  }

  void flush(const std::vector<const Slot*>& slots, StmtList& out) const {
    for (const Slot* s : slots) out.push_back(assignStmt(holder(*s), Expr::var(s->var, s->type)));
  }

  void reload(const std::vector<const Slot*>& slots, StmtList& out) const {
    for (const Slot* s : slots) out.push_back(assignStmt(Expr::var(s->var, s->type), holder(*s)));
  }

  std::set<std::string> locs(const Expr& e) const { return pts_.ofOperand(f_.name, e); }

  // Slots a call may read or write.
  std::vector<const Slot*> callSlots(const Expr& call) const {
    if (call.kind == ExprKind::Call && isIoBuiltin(call.name)) return {};
    std::set<std::string> roots;
    for (const auto& a : call.kids) {
      auto l = locs(*a);
      roots.insert(l.begin(), l.end());
    }
    if (call.kind == ExprKind::Call && (call.name == "memcpy" || call.name == "memset")) return scalarsIn(roots);
    roots.insert(pts_.globalLocs().begin(), pts_.globalLocs().end());
    return scalarsIn(pts_.reach(roots));
  }

  void list(StmtList& in) {
    StmtList out;
    for (auto& s : in) {
      if (s->kind == StmtKind::If) {
        list(s->body);
        list(s->alt);
        out.push_back(std::move(s));
        continue;
      }
      if (s->kind != StmtKind::Expr) {
        out.push_back(std::move(s));
        continue;
      }
      Expr& e = *s->expr;
      const Expr* call = nullptr;
      if (e.kind == ExprKind::Call || e.kind == ExprKind::IndCall) call = &e;
      if (e.kind == ExprKind::Assign && (e.kids[1]->kind == ExprKind::Call || e.kids[1]->kind == ExprKind::IndCall))
        call = e.kids[1].get();
      if (call) {
        auto slots = callSlots(*call);
        flush(slots, out);
        if (e.kind == ExprKind::Assign && !slots.empty() && isLocalVar(*e.kids[0]) && info_.slotOf(e.kids[0]->name)) {
          // the call result lands after the callee's writes have been reloaded
          const std::string t = freshName(f_, "t");
          const CType ty = e.kids[0]->type;
          f_.addLocal(t, ty);
          ExprPtr dst = std::move(e.kids[0]);
          out.push_back(assignStmt(Expr::var(t, ty), std::move(e.kids[1])));
          reload(slots, out);
          out.push_back(assignStmt(std::move(dst), Expr::var(t, ty)));
          continue;
        }
        out.push_back(std::move(s));
        reload(slots, out);
        continue;
      }
      if (e.kind == ExprKind::Assign && e.kids[0]->kind == ExprKind::Deref) {
        auto slots = scalarsIn(locs(*e.kids[0]->kids[0]));
        flush(slots, out);
        out.push_back(std::move(s));
        reload(slots, out);
        continue;
      }
      if (e.kind == ExprKind::Assign && e.kids[1]->kind == ExprKind::Deref) {
        flush(scalarsIn(locs(*e.kids[1]->kids[0])), out);
        out.push_back(std::move(s));
        continue;
      }
      out.push_back(std::move(s));
    }
    in = std::move(out);
  }

  FuncDef& f_;
  const FuncInfo& info_;
  const PointsTo& pts_;
  const TranslationUnit& tu_;
};

}  // namespace

void insertFlushReload(FuncDef& f, const FuncInfo& info, const PointsTo& pts, const TranslationUnit& tu) {
  FlushReload(f, info, pts, tu).run();
}

}  // namespace c2pl
