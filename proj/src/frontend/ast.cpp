#include "c2pl/frontend/ast.hpp"

#include "c2pl/error.hpp"

namespace c2pl {

const char* binOpSpelling(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Rem: return "%";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::BitXor: return "^";
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::LogAnd: return "&&";
    case BinOp::LogOr: return "||";
  }
  return "?";
}

const char* unOpSpelling(UnOp op) {
  switch (op) {
    case UnOp::Neg: return "-";
    case UnOp::BitNot: return "~";
    case UnOp::LogNot: return "!";
  }
  return "?";
}

bool isRelational(BinOp op) {
  switch (op) {
    case BinOp::Lt:
    case BinOp::Gt:
    case BinOp::Le:
    case BinOp::Ge:
    case BinOp::Eq:
    case BinOp::Ne:
      return true;
    default:
      return false;
  }
}

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->type = type;
  e->pos = pos;
  e->ival = ival;
  e->fval = fval;
  e->name = name;
  e->scope = scope;
  e->binOp = binOp;
  e->unOp = unOp;
  e->isInc = isInc;
  e->isPrefix = isPrefix;
  e->implicit = implicit;
  e->opType = opType;
  e->kids.reserve(kids.size());
  for (const auto& k : kids) e->kids.push_back(k->clone());
  return e;
}

ExprPtr Expr::make(ExprKind k, const CType& t) {
  auto e = std::make_unique<Expr>();
  e->kind = k;
  e->type = t;
  return e;
}

ExprPtr Expr::intConst(int64_t v, const CType& t) {
  auto e = make(ExprKind::IntConst, t);
  e->ival = canonicalInt(t, v);
  return e;
}

ExprPtr Expr::floatConst(double v, const CType& t) {
  auto e = make(ExprKind::FloatConst, t);
  e->fval = t.kind == CType::Kind::Float ? static_cast<double>(static_cast<float>(v)) : v;
  return e;
}

ExprPtr Expr::var(const std::string& n, const CType& t, VarScope scope) {
  auto e = make(ExprKind::Var, t);
  e->name = n;
  e->scope = scope;
  return e;
}

ExprPtr Expr::unary(UnOp op, ExprPtr a, const CType& t) {
  auto e = make(ExprKind::Unary, t);
  e->unOp = op;
  e->kids.push_back(std::move(a));
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr a, ExprPtr b, const CType& t) {
  auto e = make(ExprKind::Binary, t);
  e->binOp = op;
  e->kids.push_back(std::move(a));
  e->kids.push_back(std::move(b));
  return e;
}

ExprPtr Expr::cast(ExprPtr a, const CType& t) {
  auto e = make(ExprKind::Cast, t);
  e->kids.push_back(std::move(a));
  return e;
}

ExprPtr Expr::addrOf(ExprPtr place) {
  auto e = make(ExprKind::AddrOf, CType::pointerTo(place->type));
  e->kids.push_back(std::move(place));
  return e;
}

ExprPtr Expr::deref(ExprPtr ptr) {
  auto e = make(ExprKind::Deref, ptr->type.pointee());
  e->kids.push_back(std::move(ptr));
  return e;
}

ExprPtr Expr::assign(ExprPtr place, ExprPtr value) {
  auto e = make(ExprKind::Assign, place->type);
  e->kids.push_back(std::move(place));
  e->kids.push_back(std::move(value));
  return e;
}

ExprPtr Expr::call(const std::string& fn, std::vector<ExprPtr> args, const CType& ret) {
  auto e = make(ExprKind::Call, ret);
  e->name = fn;
  e->kids = std::move(args);
  return e;
}

StmtList cloneList(const StmtList& list) {
  StmtList out;
  out.reserve(list.size());
  for (const auto& s : list) out.push_back(s->clone());
  return out;
}

StmtPtr Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->pos = pos;
  if (expr) s->expr = expr->clone();
  s->name = name;
  s->declType = declType;
  s->body = cloneList(body);
  s->alt = cloneList(alt);
  s->init = cloneList(init);
  s->pre = cloneList(pre);
  s->step = cloneList(step);
  for (const auto& c : cases) {
    SwitchCase sc;
    sc.isDefault = c.isDefault;
    sc.value = c.value;
    sc.body = cloneList(c.body);
    s->cases.push_back(std::move(sc));
  }
  return s;
}

StmtPtr Stmt::make(StmtKind k) {
  auto s = std::make_unique<Stmt>();
  s->kind = k;
  return s;
}

StmtPtr Stmt::exprStmt(ExprPtr e) {
  auto s = make(StmtKind::Expr);
  s->expr = std::move(e);
  return s;
}

StmtPtr Stmt::ret(ExprPtr e) {
  auto s = make(StmtKind::Return);
  s->expr = std::move(e);
  return s;
}

StmtPtr Stmt::ifStmt(ExprPtr cond, StmtList then, StmtList els) {
  auto s = make(StmtKind::If);
  s->expr = std::move(cond);
  s->body = std::move(then);
  s->alt = std::move(els);
  return s;
}

StmtPtr Stmt::block(StmtList body) {
  auto s = make(StmtKind::Block);
  s->body = std::move(body);
  return s;
}

FuncDef FuncDef::clone() const {
  FuncDef f;
  f.name = name;
  f.retType = retType;
  f.params = params;
  f.locals = locals;
  f.body = cloneList(body);
  f.pos = pos;
  f.helperOf = helperOf;
  return f;
}

CType FuncDef::type() const {
  std::vector<CType> ps;
  for (const auto& p : params) ps.push_back(p.type);
  return CType::function(retType, std::move(ps));
}

const VarDecl* FuncDef::findVar(const std::string& n) const {
  for (const auto& p : params)
    if (p.name == n) return &p;
  for (const auto& l : locals)
    if (l.name == n) return &l;
  return nullptr;
}

const std::vector<BuiltinDecl>& builtinDecls() {
  static const std::vector<BuiltinDecl> decls = [] {
    const CType i = CType::intType();
    const CType l = CType::longType();
    const CType vp = CType::pointerTo(CType::voidType());
    return std::vector<BuiltinDecl>{
        {"print_int", CType::function(i, {l})},
        {"print_float", CType::function(i, {CType::doubleType()})},
        {"putchar", CType::function(i, {i})},
        {"read_int", CType::function(i, {})},
        {"memset", CType::function(vp, {vp, i, l})},
        {"memcpy", CType::function(vp, {vp, vp, l})},
        {"malloc", CType::function(vp, {l})},
        {"free", CType::function(CType::voidType(), {vp})},
    };
  }();
  return decls;
}

const BuiltinDecl* findBuiltin(const std::string& name) {
  for (const auto& b : builtinDecls())
    if (b.name == name) return &b;
  return nullptr;
}

TranslationUnit TranslationUnit::clone() const {
  TranslationUnit tu;
  tu.records = records;
  for (const auto& g : globals) {
    GlobalVar gv;
    gv.name = g.name;
    gv.type = g.type;
    gv.pos = g.pos;
    if (g.init) gv.init = g.init->clone();
    tu.globals.push_back(std::move(gv));
  }
  for (const auto& f : functions) tu.functions.push_back(f.clone());
  tu.funcTable = funcTable;
  return tu;
}

const FuncDef* TranslationUnit::findFunction(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

FuncDef* TranslationUnit::findFunction(const std::string& name) {
  for (auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const GlobalVar* TranslationUnit::findGlobal(const std::string& name) const {
  for (const auto& g : globals)
    if (g.name == name) return &g;
  return nullptr;
}

std::optional<CType> TranslationUnit::functionType(const std::string& name) const {
  if (const FuncDef* f = findFunction(name)) return f->type();
  if (const BuiltinDecl* b = findBuiltin(name)) return b->type;
  return std::nullopt;
}

void TranslationUnit::rebuildFuncTable() {
  funcTable.clear();
  for (const auto& f : functions)
    if (f.helperOf.empty()) funcTable.push_back(f.name);
  for (const auto& b : builtinDecls()) funcTable.push_back(b.name);
}

GlobalLayout computeGlobalLayout(const TranslationUnit& tu) {
  GlobalLayout gl;
  int64_t at = kGlobalBase;
  for (const auto& g : tu.globals) {
    Layout l = tu.records.layout(g.type);
    at = (at + l.align - 1) / l.align * l.align;
    gl.address[g.name] = at;
    at += std::max<int64_t>(l.size, 1);
  }
  gl.end = at;
  return gl;
}

int64_t functionAddress(const TranslationUnit& tu, const std::string& name) {
  for (size_t i = 0; i < tu.funcTable.size(); ++i)
    if (tu.funcTable[i] == name) return kFuncBase + kFuncStride * static_cast<int64_t>(i);
  fail(ErrorCode::UnknownFunc, "no function named '" + name + "'");
}

std::optional<std::string> functionAtAddress(const TranslationUnit& tu, int64_t addr) {
  if (addr < kFuncBase || (addr - kFuncBase) % kFuncStride != 0) return std::nullopt;
  auto idx = static_cast<size_t>((addr - kFuncBase) / kFuncStride);
  if (idx >= tu.funcTable.size()) return std::nullopt;
  return tu.funcTable[idx];
}

int64_t canonicalInt(const CType& t, int64_t v) {
  switch (t.kind) {
    case CType::Kind::Char: return static_cast<int8_t>(v);
    case CType::Kind::Int: return static_cast<int32_t>(v);
    case CType::Kind::UInt: return static_cast<int64_t>(static_cast<uint32_t>(v));
    default: return v;
  }
}

}  // namespace c2pl
