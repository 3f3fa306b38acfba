#include "c2pl/translate/translate.hpp"

#include <cmath>

#include "../normalize/util.hpp"
#include "c2pl/error.hpp"

namespace c2pl {

namespace {

using norm::isLocalVar;

TermPtr st(const std::string& f, std::vector<TermPtr> args) { return Term::make(f, std::move(args)); }
TermPtr atom(const std::string& n) { return Term::atom(n); }
TermPtr num(Int128 v) { return Term::integer(v); }
TermPtr hex(Int128 v) { return Term::hexInteger(v); }
TermPtr var(const std::string& n) { return Term::var(n); }
TermPtr is(TermPtr x, TermPtr e) { return st("is", {std::move(x), std::move(e)}); }

TermPtr conj(const std::vector<TermPtr>& goals) {
  if (goals.empty()) return atom("true");
  TermPtr t = goals.back();
  for (size_t i = goals.size() - 1; i-- > 0;) t = st(",", {goals[i], t});
  return t;
}

[[noreturn]] void untranslatable(const FuncDef& f, const std::string& what) {
  fail(ErrorCode::Untranslatable, f.name + ": " + what);
}

int widthOf(const CType& t) { return t.isPointer() ? 64 : integerBits(t); }
bool isUnsigned(const CType& t) { return t.isPointer() || !t.isSigned(); }

Int128 lowest(const CType& t) { return isUnsigned(t) ? 0 : -(Int128{1} << (widthOf(t) - 1)); }
Int128 highest(const CType& t) {
  return isUnsigned(t) ? (Int128{1} << widthOf(t)) - 1 : (Int128{1} << (widthOf(t) - 1)) - 1;
}

TermPtr maskTo(TermPtr e, const CType& t) {
  const int w = widthOf(t);
  const Int128 all = (Int128{1} << w) - 1;
  TermPtr low = st("/\\", {std::move(e), hex(all)});
  if (isUnsigned(t)) return low;
  const Int128 sign = Int128{1} << (w - 1);
  return st("-", {st("xor", {low, hex(sign)}), hex(sign)});
}

const char* relation(BinOp op) {
  switch (op) {
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Le: return "=<";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "=:=";
    case BinOp::Ne: return "=\\=";
    default: return nullptr;
  }
}

class Translator {
 public:
  Translator(const FuncDef& f, const NormalizedUnit& nu, const Manifest& m, const ObfuscationConfig& cfg)
      : f_(f), tu_(nu.tu), info_(infoOf(nu, f)), m_(m), cfg_(cfg), nm_(f), layout_(computeGlobalLayout(nu.tu)) {
    countUses();
  }

  Clause run() {
    std::vector<TermPtr> head;
    for (const auto& p : f_.params) {
      const Slot* s = info_.slotOf(p.name);
      head.push_back(var(nm_.var(s ? s->holder : p.name)));
    }
    for (const auto& s : info_.slots)
      if (!s.isParam) head.push_back(var(nm_.var(s.holder)));
    head.push_back(var("R"));
    std::vector<TermPtr> body;
    list(f_.body, body);
    const PredicateSpec* spec = m_.find(f_.name);
    return {st(spec ? spec->predName : predicateName(f_.name), std::move(head)), conj(body)};
  }

 private:
  static const FuncInfo& infoOf(const NormalizedUnit& nu, const FuncDef& f) {
    static const FuncInfo none;
    auto it = nu.info.find(f.name);
    return it == nu.info.end() ? none : it->second;
  }

  void countUses() {
    norm::forEachStmt(f_.body, [&](const Stmt& s) {
      if (!s.expr) return;
      const Expr& e = *s.expr;
      const bool def = e.kind == ExprKind::Assign && isLocalVar(*e.kids[0]);
      std::function<void(const Expr&)> walk = [&](const Expr& x) {
        if (isLocalVar(x)) ++uses_[x.name];
        for (const auto& k : x.kids) walk(*k);
      };
      if (def) walk(*e.kids[1]);
      else walk(e);
    });
  }

  TermPtr floatTerm(double d) const {
    if (std::isnan(d)) return atom("nan");
    if (std::isinf(d)) return d > 0 ? atom("inf") : st("-", {atom("inf")});
    return Term::flt(d);
  }

  TermPtr operand(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::IntConst:
        if (isUnsigned(e.type)) return num(static_cast<Int128>(static_cast<uint64_t>(e.ival)));
        return num(e.ival);
      case ExprKind::FloatConst:
        return floatTerm(e.fval);
      case ExprKind::Var:
        if (e.scope == VarScope::Global) untranslatable(f_, "global '" + e.name + "' used as a value");
        return var(nm_.var(e.name));
      case ExprKind::FuncRef:
        return hex(functionAddress(tu_, e.name));
      case ExprKind::AddrOf:
        if (e.kids[0]->kind == ExprKind::Var && e.kids[0]->scope == VarScope::Global)
          return hex(layout_.address.at(e.kids[0]->name));
        break;
      default:
        break;
    }
    untranslatable(f_, "operand is not a constant or variable");
  }

  // Operand in a position that is not evaluated: non-finite floats are materialized first.
  TermPtr argument(const Expr& e, std::vector<TermPtr>& out) {
    TermPtr t = operand(e);
    if (e.kind == ExprKind::FloatConst && !std::isfinite(e.fval)) {
      TermPtr v = var(nm_.fresh("F"));
      out.push_back(is(v, t));
      return v;
    }
    return t;
  }

  TermPtr condition(const Expr& e) const {
    if (e.kind == ExprKind::Binary && relation(e.binOp))
      return st(relation(e.binOp), {operand(*e.kids[0]), operand(*e.kids[1])});
    return st("=\\=", {operand(e), num(0)});
  }

  static TermPtr choose(TermPtr cond, const TermPtr& x) {
    return st(";", {st("->", {std::move(cond), st("=", {x, num(1)})}), st("=", {x, num(0)})});
  }

  void list(const StmtList& l, std::vector<TermPtr>& out) {
    for (size_t i = 0; i < l.size(); ++i) {
      const Stmt& s = *l[i];
      if (i + 1 < l.size() && feedsReturn(s, *l[i + 1])) {
        assign(var("R"), s.expr->kids[0]->type, *s.expr->kids[1], out);
        ++i;
        continue;
      }
      stmt(s, out);
    }
  }

  bool feedsReturn(const Stmt& s, const Stmt& next) {
    if (s.kind != StmtKind::Expr || s.expr->kind != ExprKind::Assign) return false;
    const Expr& lhs = *s.expr->kids[0];
    if (!isLocalVar(lhs) || info_.slotByHolder(lhs.name) || f_.retType.isVoid()) return false;
    return next.kind == StmtKind::Return && next.expr && isLocalVar(*next.expr) && next.expr->name == lhs.name &&
           uses_[lhs.name] == 1;
  }

  void stmt(const Stmt& s, std::vector<TermPtr>& out) {
    switch (s.kind) {
      case StmtKind::Expr: {
        const Expr& e = *s.expr;
        if (e.kind == ExprKind::Assign) {
          const Expr& lhs = *e.kids[0];
          const Expr& rhs = *e.kids[1];
          if (isLocalVar(lhs)) {
            if (info_.slotByHolder(lhs.name) && rhs.kind == ExprKind::AddrOf) return;
            assign(var(nm_.var(lhs.name)), lhs.type, rhs, out);
            return;
          }
          if (lhs.kind == ExprKind::Deref) {
            store(lhs, rhs, out);
            return;
          }
          untranslatable(f_, "assignment to a non-variable place");
        }
        if (e.kind == ExprKind::Call || e.kind == ExprKind::IndCall) {
          call(e, var("_"), out);
          return;
        }
        if (e.kind == ExprKind::Unary || e.kind == ExprKind::Binary || e.kind == ExprKind::Cast || e.isOperand()) return;
        untranslatable(f_, "expression statement");
      }
      case StmtKind::If: {
        std::vector<TermPtr> a, b;
        list(s.body, a);
        list(s.alt, b);
        out.push_back(st(";", {st("->", {condition(*s.expr), conj(a)}), conj(b)}));
        return;
      }
      case StmtKind::Return:
        if (f_.retType.isVoid() || !s.expr) out.push_back(st("=", {var("R"), num(0)}));
        else out.push_back(is(var("R"), operand(*s.expr)));
        return;
      default:
        untranslatable(f_, "loop, switch or declaration after normalization");
    }
  }

  void assign(const TermPtr& x, const CType& xt, const Expr& r, std::vector<TermPtr>& out) {
    switch (r.kind) {
      case ExprKind::IntConst:
      case ExprKind::FloatConst:
      case ExprKind::Var:
      case ExprKind::FuncRef:
      case ExprKind::AddrOf:
        out.push_back(is(x, operand(r)));
        return;
      case ExprKind::Deref:
        load(x, xt, operand(*r.kids[0]), out);
        return;
      case ExprKind::Unary:
        unary(x, r, out);
        return;
      case ExprKind::Binary:
        if (relation(r.binOp)) out.push_back(choose(condition(r), x));
        else out.push_back(is(x, binary(r)));
        return;
      case ExprKind::Cast:
        out.push_back(is(x, convert(operand(*r.kids[0]), r.kids[0]->type, r.type)));
        return;
      case ExprKind::Call:
      case ExprKind::IndCall:
        call(r, x, out);
        return;
      default:
        untranslatable(f_, "right-hand side is not three-address");
    }
  }

  TermPtr masked(TermPtr e, const CType& t) const { return cfg_.maskIntegers ? maskTo(std::move(e), t) : e; }

  void unary(const TermPtr& x, const Expr& r, std::vector<TermPtr>& out) {
    TermPtr a = operand(*r.kids[0]);
    switch (r.unOp) {
      case UnOp::Neg:
        out.push_back(is(x, r.type.isFloating() ? st("-", {a}) : masked(st("-", {a}), r.type)));
        return;
      case UnOp::BitNot:
        out.push_back(is(x, isUnsigned(r.type) ? masked(st("\\", {a}), r.type) : st("\\", {a})));
        return;
      case UnOp::LogNot:
        out.push_back(choose(st("=:=", {a, num(0)}), x));
        return;
    }
  }

  TermPtr shiftCount(const Expr& b, int w) const {
    if (!cfg_.maskIntegers) return operand(b);
    if (b.kind == ExprKind::IntConst) return num(b.ival & (w - 1));
    return st("/\\", {operand(b), num(w - 1)});
  }

  TermPtr binary(const Expr& r) const {
    const Expr& ea = *r.kids[0];
    const Expr& eb = *r.kids[1];
    TermPtr a = operand(ea);
    TermPtr b = operand(eb);
    const CType& t = r.type;
    if (t.isPointer()) {
      if (r.binOp != BinOp::Add && r.binOp != BinOp::Sub) untranslatable(f_, "pointer operator");
      const int64_t size = tu_.records.sizeOf(t.pointee());
      TermPtr off = size == 1 ? b : st("*", {num(size), b});
      return masked(st(r.binOp == BinOp::Add ? "+" : "-", {a, off}), t);
    }
    if (r.binOp == BinOp::Sub && ea.type.isPointer()) {
      const int64_t size = tu_.records.sizeOf(ea.type.pointee());
      TermPtr diff = masked(st("-", {a, b}), CType::longType());
      return size == 1 ? diff : st("//", {diff, num(size)});
    }
    if (t.isFloating()) {
      const char* op = nullptr;
      switch (r.binOp) {
        case BinOp::Add: op = "+"; break;
        case BinOp::Sub: op = "-"; break;
        case BinOp::Mul: op = "*"; break;
        case BinOp::Div: op = "/"; break;
        default: untranslatable(f_, "floating operator");
      }
      TermPtr e = st(op, {a, b});
      return t.kind == CType::Kind::Float ? st("float32", {e}) : e;
    }
    const int w = widthOf(t);
    switch (r.binOp) {
      case BinOp::Add: return masked(st("+", {a, b}), t);
      case BinOp::Sub: return masked(st("-", {a, b}), t);
      case BinOp::Mul: return masked(st("*", {a, b}), t);
      case BinOp::Div: return isUnsigned(t) ? st("//", {a, b}) : masked(st("//", {a, b}), t);
      case BinOp::Rem: return st("rem", {a, b});
      case BinOp::Shl: return masked(st("<<", {a, shiftCount(eb, w)}), t);
      case BinOp::Shr: return st(">>", {a, shiftCount(eb, w)});
      case BinOp::BitAnd: return st("/\\", {a, b});
      case BinOp::BitOr: return st("\\/", {a, b});
      case BinOp::BitXor: return st("xor", {a, b});
      default: untranslatable(f_, "logical operator after normalization");
    }
  }

  TermPtr convert(TermPtr a, const CType& from, const CType& to) const {
    if (to.isVoid()) untranslatable(f_, "cast to void");
    if (to.isFloating()) {
      const bool single = to.kind == CType::Kind::Float;
      if (from.isFloating()) return single && from.kind != CType::Kind::Float ? st("float32", {a}) : a;
      return st(single ? "float32" : "float", {a});
    }
    if (from.isFloating()) return maskTo(st("truncate", {a}), to);
    if (lowest(from) >= lowest(to) && highest(from) <= highest(to)) return a;
    return maskTo(std::move(a), to);
  }

  void load(const TermPtr& x, const CType& t, TermPtr p, std::vector<TermPtr>& out) {
    const int64_t size = tu_.records.sizeOf(t);
    if (t.isFloating()) {
      out.push_back(st("rdPtrFloat", {std::move(p), num(size), x}));
      return;
    }
    if (isUnsigned(t)) {
      out.push_back(st("rdPtrInt", {std::move(p), num(size), x}));
      return;
    }
    TermPtr raw = var(nm_.fresh("U"));
    out.push_back(st("rdPtrInt", {std::move(p), num(size), raw}));
    const Int128 sign = Int128{1} << (size * 8 - 1);
    out.push_back(is(x, st("-", {st("xor", {raw, hex(sign)}), hex(sign)})));
  }

  void write(TermPtr p, const CType& t, TermPtr v, std::vector<TermPtr>& out) const {
    const int64_t size = tu_.records.sizeOf(t);
    out.push_back(st(t.isFloating() ? "wrPtrFloat" : "wrPtrInt", {std::move(p), num(size), std::move(v)}));
  }

  void store(const Expr& place, const Expr& value, std::vector<TermPtr>& out) {
    if (!place.type.isScalar()) untranslatable(f_, "aggregate store");
    TermPtr p = operand(*place.kids[0]);
    TermPtr v = argument(value, out);
    write(std::move(p), place.type, std::move(v), out);
  }

  void call(const Expr& e, const TermPtr& ret, std::vector<TermPtr>& out) {
    if (e.kind == ExprKind::IndCall) {
      std::vector<TermPtr> args;
      for (const auto& k : e.kids) args.push_back(argument(*k, out));
      args.push_back(ret);
      out.push_back(st("$icall", std::move(args)));
      return;
    }
    std::vector<TermPtr> args;
    for (const auto& k : e.kids) args.push_back(argument(*k, out));
    const PredicateSpec* spec = m_.find(e.name);
    if (!spec) {
      args.push_back(ret);
      out.push_back(st(foreignName(e.name), std::move(args)));
      return;
    }
    const FuncDef* callee = tu_.findFunction(e.name);
    const bool frame = !spec->slots.empty() ||
                       std::any_of(spec->params.begin(), spec->params.end(),
                                   [](const ParamSpec& p) { return p.kind == ParamSpec::Kind::Address; });
    TermPtr mark;
    if (frame) {
      mark = var(nm_.fresh("M"));
      out.push_back(st("$mark", {mark}));
    }
    for (size_t i = 0; i < spec->params.size(); ++i) {
      const ParamSpec& p = spec->params[i];
      if (p.kind != ParamSpec::Kind::Address) continue;
      TermPtr a = var(nm_.fresh("A"));
      out.push_back(st("$alloc", {num(p.size), num(p.align), a}));
      write(a, callee->params[i].type, args[i], out);
      args[i] = a;
    }
    for (const auto& s : spec->slots) {
      TermPtr h = var(nm_.fresh("H"));
      out.push_back(st("$alloc", {num(s.size), num(s.align), h}));
      args.push_back(h);
    }
    args.push_back(ret);
    out.push_back(st(spec->predName, std::move(args)));
    if (frame) out.push_back(st("$release", {mark}));
  }

  const FuncDef& f_;
  const TranslationUnit& tu_;
  const FuncInfo& info_;
  const Manifest& m_;
  const ObfuscationConfig& cfg_;
  NameMap nm_;
  GlobalLayout layout_;
  std::map<std::string, int> uses_;
};

}  // namespace

PredicateSpec predicateSpec(const FuncDef& f, const FuncInfo& info, const TranslationUnit& tu) {
  PredicateSpec s;
  s.cName = f.name;
  s.predName = predicateName(f.name);
  s.helper = !f.helperOf.empty();
  for (const auto& p : f.params) {
    ParamSpec ps;
    ps.name = p.name;
    if (const Slot* sl = info.slotOf(p.name)) {
      ps.kind = ParamSpec::Kind::Address;
      ps.size = sl->size;
      ps.align = sl->align;
    } else {
      const Layout l = tu.records.layout(p.type);
      ps.size = l.size;
      ps.align = l.align;
    }
    s.params.push_back(ps);
  }
  for (const auto& sl : info.slots)
    if (!sl.isParam) s.slots.push_back({sl.var, sl.size, sl.align});
  s.retSize = f.retType.isVoid() ? 0 : tu.records.sizeOf(f.retType);
  return s;
}

Clause translateFunction(const FuncDef& f, const NormalizedUnit& nu, const Manifest& m, const ObfuscationConfig& cfg) {
  return Translator(f, nu, m, cfg).run();
}

Translation translateUnit(const NormalizedUnit& nu, const std::set<std::string>& selected, const ObfuscationConfig& cfg) {
  Translation t;
  t.selected = selected;
  t.manifest.level = cfg.level;
  t.manifest.seed = cfg.seed;
  t.manifest.maskIntegers = cfg.maskIntegers;
  t.manifest.selected.assign(selected.begin(), selected.end());
  for (const auto& f : nu.tu.functions)
    if (selected.count(f.name) || selected.count(f.helperOf)) t.translated.insert(f.name);
  std::set<std::string> preds;
  for (const auto& f : nu.tu.functions) {
    if (!t.translated.count(f.name)) continue;
    auto it = nu.info.find(f.name);
    PredicateSpec s = predicateSpec(f, it == nu.info.end() ? FuncInfo{} : it->second, nu.tu);
    if (!preds.insert(s.predName).second)
      fail(ErrorCode::Untranslatable, "two functions map to predicate '" + s.predName + "'");
    t.manifest.functions.push_back(std::move(s));
  }
  for (const auto& f : nu.tu.functions)
    if (t.translated.count(f.name)) t.program.clauses.push_back(translateFunction(f, nu, t.manifest, cfg));
  return t;
}

}  // namespace c2pl
