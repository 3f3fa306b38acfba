#include "c2pl/frontend/parser.hpp"

#include <functional>
#include <map>
#include <set>

#include "c2pl/error.hpp"
#include "c2pl/frontend/arith.hpp"
#include "c2pl/frontend/lexer.hpp"

namespace c2pl {

namespace {

std::string at(SrcPos p) { return std::to_string(p.line) + ":" + std::to_string(p.col) + ": "; }

struct Declarator {
  std::string name;
  SrcPos pos;
  std::function<CType(CType)> apply = [](CType t) { return t; };
  std::vector<std::string> paramNames;
  bool isFunctionDeclarator = false;
};

struct Specs {
  CType type;
  bool isTypedef = false;
  bool isStatic = false;
};

struct LocalSym {
  std::string unique;
  CType type;
};

CType promote(const CType& t) {
  if (t.kind == CType::Kind::Char) return CType::intType();
  return t;
}

int rank(const CType& t) {
  switch (t.kind) {
    case CType::Kind::Int:
    case CType::Kind::UInt: return 1;
    default: return 2;
  }
}

CType commonType(const CType& a0, const CType& b0) {
  if (a0.kind == CType::Kind::Double || b0.kind == CType::Kind::Double) return CType::doubleType();
  if (a0.kind == CType::Kind::Float || b0.kind == CType::Kind::Float) return CType::floatType();
  CType a = promote(a0);
  CType b = promote(b0);
  if (a == b) return a;
  if (rank(a) == rank(b)) return a.isSigned() ? b : a;  // the unsigned one wins
  const CType& hi = rank(a) > rank(b) ? a : b;
  const CType& lo = rank(a) > rank(b) ? b : a;
  if (!hi.isSigned()) return hi;
  // hi is long; it represents every value of lo (int or uint).
  (void)lo;
  return hi;
}

bool isPlace(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var:
    case ExprKind::Deref:
    case ExprKind::Index:
    case ExprKind::Member:
      return true;
    default:
      return false;
  }
}

bool isNullConstant(const Expr& e) {
  return e.kind == ExprKind::IntConst && e.type.isInteger() && e.ival == 0;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  TranslationUnit run() {
    for (const auto& b : builtinDecls()) funcs_[b.name] = b.type;
    while (!peekKind(TokKind::End)) topLevel();
    for (const auto& [name, p] : referenced_)
      if (!defined_.count(name) && !findBuiltin(name))
        fail(ErrorCode::UnknownFunc, at(p) + "function '" + name + "' is declared but never defined");
    tu_.rebuildFuncTable();
    return std::move(tu_);
  }

 private:
  // ---- token helpers -----------------------------------------------------
  const Token& cur() const { return toks_[pos_]; }
  const Token& ahead(size_t n) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }
  bool peekKind(TokKind k) const { return cur().kind == k; }
  bool peek(const char* p) const {
    return (cur().kind == TokKind::Punct || cur().kind == TokKind::Keyword) && cur().text == p;
  }
  bool peekAt(size_t n, const char* p) const {
    const Token& t = ahead(n);
    return (t.kind == TokKind::Punct || t.kind == TokKind::Keyword) && t.text == p;
  }
  bool accept(const char* p) {
    if (peek(p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const char* p) {
    if (!accept(p)) syntax("expected '" + std::string(p) + "' but found '" + cur().text + "'");
  }
  [[noreturn]] void syntax(const std::string& msg) const { fail(ErrorCode::Syntax, at(cur().pos) + msg); }
  [[noreturn]] void typeError(SrcPos p, const std::string& msg) const { fail(ErrorCode::Type, at(p) + msg); }
  [[noreturn]] void unsupported(SrcPos p, const std::string& msg) const {
    fail(ErrorCode::Unsupported, at(p) + msg);
  }
  std::string identifier() {
    if (!peekKind(TokKind::Ident)) syntax("expected identifier but found '" + cur().text + "'");
    std::string n = cur().text;
    checkReserved(n, cur().pos);
    ++pos_;
    return n;
  }
  void checkReserved(const std::string& n, SrcPos p) const {
    if (n.find("__") != std::string::npos)
      fail(ErrorCode::Syntax, at(p) + "identifiers containing '__' are reserved: '" + n + "'");
    if (n == "setjmp" || n == "longjmp") unsupported(p, n + " is not supported");
  }

  // ---- declarations ------------------------------------------------------
  bool isTypeStart(size_t n = 0) const {
    const Token& t = ahead(n);
    if (t.kind == TokKind::Keyword) {
      static const std::set<std::string> kw = {"int",    "char",   "long",   "unsigned", "signed",
                                               "float",  "double", "void",   "struct",   "union",
                                               "const",  "static", "short",  "enum",     "extern",
                                               "typedef", "volatile", "register"};
      return kw.count(t.text) > 0;
    }
    return t.kind == TokKind::Ident && typedefs_.count(t.text) && !lookupLocal(t.text);
  }

  Specs parseSpecs() {
    Specs s;
    SrcPos p = cur().pos;
    int nInt = 0, nChar = 0, nLong = 0, nUnsigned = 0, nSigned = 0, nFloat = 0, nDouble = 0, nVoid = 0;
    std::optional<CType> named;
    while (true) {
      if (peekKind(TokKind::Keyword)) {
        const std::string& k = cur().text;
        if (k == "int") nInt++;
        else if (k == "char") nChar++;
        else if (k == "long") nLong++;
        else if (k == "unsigned") nUnsigned++;
        else if (k == "signed") nSigned++;
        else if (k == "float") nFloat++;
        else if (k == "double") nDouble++;
        else if (k == "void") nVoid++;
        else if (k == "const" || k == "volatile" || k == "register" || k == "extern") {}
        else if (k == "static") s.isStatic = true;
        else if (k == "typedef") s.isTypedef = true;
        else if (k == "short") unsupported(cur().pos, "short is not part of the supported subset");
        else if (k == "enum") unsupported(cur().pos, "enum is not part of the supported subset");
        else if (k == "struct" || k == "union") {
          named = parseRecordSpec();
          continue;
        } else {
          break;
        }
        ++pos_;
      } else if (peekKind(TokKind::Ident) && typedefs_.count(cur().text) && !named &&
                 nInt + nChar + nLong + nUnsigned + nSigned + nFloat + nDouble + nVoid == 0 &&
                 !lookupLocal(cur().text)) {
        named = typedefs_.at(cur().text);
        ++pos_;
      } else {
        break;
      }
    }
    const int basics = nInt + nChar + nLong + nUnsigned + nSigned + nFloat + nDouble + nVoid;
    if (named) {
      if (basics) syntax("conflicting type specifiers");
      s.type = *named;
      return s;
    }
    if (basics == 0) fail(ErrorCode::Syntax, at(p) + "expected a type");
    if (nUnsigned && nSigned) syntax("both signed and unsigned");
    if (nVoid) s.type = CType::voidType();
    else if (nFloat) s.type = CType::floatType();
    else if (nDouble) {
      if (nLong) unsupported(p, "long double is not supported");
      s.type = CType::doubleType();
    } else if (nChar) {
      if (nUnsigned) unsupported(p, "unsigned char is not part of the supported subset");
      s.type = CType::charType();
    } else if (nLong) {
      s.type = nUnsigned ? CType::ulongType() : CType::longType();
    } else {
      s.type = nUnsigned ? CType::uintType() : CType::intType();
    }
    return s;
  }

  CType parseRecordSpec() {
    const bool isUnion = cur().text == "union";
    ++pos_;
    std::string tag;
    if (peekKind(TokKind::Ident)) tag = identifier();
    else tag = "anon_" + std::to_string(anonCounter_++);
    tu_.records.declare(tag, isUnion);
    if (accept("{")) {
      std::vector<FieldInfo> fields;
      std::set<std::string> seen;
      while (!accept("}")) {
        Specs fs = parseSpecs();
        do {
          Declarator d = parseDeclarator(false);
          if (peek(":")) unsupported(cur().pos, "bit-fields are not supported");
          CType ft = d.apply(fs.type);
          if (ft.isFunc() || ft.isVoid()) typeError(d.pos, "invalid field type");
          if (ft.isArray() && ft.count < 0) unsupported(d.pos, "flexible array members are not supported");
          tu_.records.layout(ft);  // must be complete
          if (!seen.insert(d.name).second) typeError(d.pos, "duplicate field '" + d.name + "'");
          fields.push_back({d.name, ft, 0});
        } while (accept(","));
        expect(";");
      }
      tu_.records.define(tag, std::move(fields));
    }
    return CType::record(tag);
  }

  std::vector<std::pair<std::string, CType>> parseParams(bool& variadic) {
    expect("(");
    std::vector<std::pair<std::string, CType>> ps;
    variadic = false;
    if (accept(")")) return ps;
    if (peek("void") && peekAt(1, ")")) {
      pos_ += 2;
      return ps;
    }
    do {
      if (peek("...")) unsupported(cur().pos, "variadic functions are not supported");
      Specs s = parseSpecs();
      Declarator d = parseDeclarator(true);
      CType t = d.apply(s.type);
      if (t.isArray()) t = CType::pointerTo(*t.elem);
      else if (t.isFunc()) t = CType::pointerTo(t);
      if (t.isVoid()) typeError(d.pos, "parameter of type void");
      if (t.isRecord()) unsupported(d.pos, "records passed by value are not supported");
      ps.emplace_back(d.name, t);
    } while (accept(","));
    expect(")");
    return ps;
  }

  Declarator parseDeclarator(bool allowAbstract) {
    int ptrs = 0;
    while (accept("*")) {
      ++ptrs;
      while (accept("const") || accept("volatile")) {}
    }
    Declarator d;
    d.pos = cur().pos;
    std::optional<Declarator> inner;
    if (peek("(") && (peekAt(1, "*") || peekAt(1, "("))) {
      ++pos_;
      inner = parseDeclarator(allowAbstract);
      expect(")");
    } else if (peekKind(TokKind::Ident) && !(allowAbstract && isTypeStart())) {
      d.name = identifier();
    } else if (!allowAbstract) {
      syntax("expected a declarator but found '" + cur().text + "'");
    }
    struct Suffix {
      bool isArray = true;
      int64_t n = -1;
      std::vector<CType> params;
      std::vector<std::string> names;
    };
    std::vector<Suffix> sfx;
    while (true) {
      if (peek("[")) {
        SrcPos p = cur().pos;
        ++pos_;
        Suffix s;
        if (!accept("]")) {
          ExprPtr e = parseTernary();
          if (e->kind != ExprKind::IntConst) unsupported(p, "variable-length arrays are not supported");
          if (e->ival < 0) typeError(p, "negative array size");
          s.n = e->ival;
          expect("]");
        }
        sfx.push_back(std::move(s));
      } else if (peek("(")) {
        bool variadic = false;
        Suffix s;
        s.isArray = false;
        for (auto& [n, t] : parseParams(variadic)) {
          s.names.push_back(n);
          s.params.push_back(t);
        }
        sfx.push_back(std::move(s));
      } else {
        break;
      }
    }
    if (!inner && !sfx.empty() && !sfx[0].isArray) {
      d.paramNames = sfx[0].names;
      d.isFunctionDeclarator = true;
    }
    std::shared_ptr<Declarator> innerPtr = inner ? std::make_shared<Declarator>(*inner) : nullptr;
    if (inner) {
      d.name = inner->name;
      d.pos = inner->pos;
    }
    d.apply = [ptrs, sfx, innerPtr](CType base) {
      CType t = base;
      for (int i = 0; i < ptrs; ++i) t = CType::pointerTo(t);
      for (auto it = sfx.rbegin(); it != sfx.rend(); ++it)
        t = it->isArray ? CType::arrayOf(t, it->n) : CType::function(t, it->params);
      if (innerPtr) t = innerPtr->apply(t);
      return t;
    };
    return d;
  }

  void topLevel() {
    if (accept(";")) return;
    SrcPos p = cur().pos;
    Specs s = parseSpecs();
    if (accept(";")) return;  // record definition only
    bool first = true;
    do {
      Declarator d = parseDeclarator(false);
      CType t = d.apply(s.type);
      if (s.isTypedef) {
        checkReserved(d.name, d.pos);
        typedefs_[d.name] = t;
        continue;
      }
      if (t.isFunc()) {
        auto prev = funcs_.find(d.name);
        if (prev != funcs_.end() && prev->second != t)
          typeError(d.pos, "conflicting types for '" + d.name + "'");
        if (findBuiltin(d.name) && prev != funcs_.end() && defined_.count(d.name) == 0 &&
            peek("{"))
          typeError(d.pos, "cannot redefine builtin '" + d.name + "'");
        if (globals_.count(d.name)) typeError(d.pos, "'" + d.name + "' redeclared as function");
        funcs_[d.name] = t;
        if (first && d.isFunctionDeclarator && peek("{")) {
          functionDefinition(d, t);
          return;
        }
      } else {
        if (t.isVoid()) typeError(d.pos, "variable of type void");
        if (globals_.count(d.name) || funcs_.count(d.name))
          typeError(d.pos, "redefinition of '" + d.name + "'");
        GlobalVar g;
        g.name = d.name;
        g.pos = d.pos;
        if (accept("=")) {
          g.init = parseInitializer(t);
          if (t.isArray() && t.count < 0) t = CType::arrayOf(*t.elem, static_cast<int64_t>(g.init->kids.size()));
          g.init->type = t;
          checkConstantInit(*g.init);
        }
        if (t.isArray() && t.count < 0) typeError(d.pos, "array size missing");
        tu_.records.layout(t);
        g.type = t;
        globals_[d.name] = t;
        tu_.globals.push_back(std::move(g));
      }
      first = false;
    } while (accept(","));
    (void)p;
    expect(";");
  }

  void checkConstantInit(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntConst:
      case ExprKind::FloatConst:
      case ExprKind::FuncRef:
        return;
      case ExprKind::InitList:
        for (const auto& k : e.kids) checkConstantInit(*k);
        return;
      case ExprKind::Cast:
        if (e.type.isPointer() && e.kids[0]->type.isPointer()) return checkConstantInit(*e.kids[0]);
        break;
      case ExprKind::AddrOf:
      case ExprKind::Decay:
        if (e.kids[0]->kind == ExprKind::Var && e.kids[0]->scope == VarScope::Global) return;
        break;
      default:
        break;
    }
    fail(ErrorCode::Type, at(e.pos) + "global initializer is not a constant");
  }

  void functionDefinition(const Declarator& d, const CType& ft) {
    if (defined_.count(d.name)) typeError(d.pos, "redefinition of '" + d.name + "'");
    if (findBuiltin(d.name)) typeError(d.pos, "cannot redefine builtin '" + d.name + "'");
    defined_.insert(d.name);
    FuncDef f;
    f.name = d.name;
    f.pos = d.pos;
    f.retType = *ft.elem;
    if (f.retType.isRecord()) unsupported(d.pos, "records returned by value are not supported");
    if (f.retType.isArray()) typeError(d.pos, "function returning an array");
    fn_ = &f;
    used_.clear();
    scopes_.clear();
    scopes_.emplace_back();
    for (size_t i = 0; i < ft.params.size(); ++i) {
      const std::string& n = d.paramNames[i];
      if (n.empty()) typeError(d.pos, "parameter name omitted");
      if (scopes_.back().count(n)) typeError(d.pos, "duplicate parameter '" + n + "'");
      used_.insert(n);
      scopes_.back()[n] = {n, ft.params[i]};
      f.params.push_back({n, ft.params[i]});
    }
    expect("{");
    scopes_.emplace_back();
    f.body = parseBlockBody();
    scopes_.clear();
    fn_ = nullptr;
    tu_.functions.push_back(std::move(f));
  }

  // ---- scopes --------------------------------------------------------------
  const LocalSym* lookupLocal(const std::string& n) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(n);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  std::string declareLocal(const std::string& n, const CType& t, SrcPos p) {
    if (scopes_.back().count(n)) typeError(p, "redefinition of '" + n + "'");
    std::string u = n;
    for (int k = 1; used_.count(u); ++k) u = n + "_" + std::to_string(k);
    used_.insert(u);
    scopes_.back()[n] = {u, t};
    fn_->addLocal(u, t);
    return u;
  }

  // ---- statements ----------------------------------------------------------
  StmtList parseBlockBody() {
    StmtList out;
    while (!accept("}")) {
      if (peekKind(TokKind::End)) syntax("unexpected end of input in block");
      parseBlockItem(out);
    }
    return out;
  }

  void parseBlockItem(StmtList& out) {
    if (isTypeStart()) {
      parseLocalDecl(out);
      return;
    }
    if (StmtPtr s = parseStatement()) out.push_back(std::move(s));
  }

  void parseLocalDecl(StmtList& out) {
    Specs s = parseSpecs();
    if (s.isTypedef) unsupported(cur().pos, "block-scope typedefs are not supported");
    if (s.isStatic) unsupported(cur().pos, "function-scope static variables are not supported");
    if (accept(";")) return;
    do {
      Declarator d = parseDeclarator(false);
      CType t = d.apply(s.type);
      if (t.isFunc()) unsupported(d.pos, "block-scope function declarations are not supported");
      if (t.isVoid()) typeError(d.pos, "variable of type void");
      auto st = Stmt::make(StmtKind::Decl);
      st->pos = d.pos;
      ExprPtr init;
      // The name is visible inside its own initializer, as in C.
      if (!(t.isArray() && t.count < 0)) {
        tu_.records.layout(t);
        st->name = declareLocal(d.name, t, d.pos);
      }
      if (accept("=")) {
        init = parseInitializer(t);
        if (t.isArray() && t.count < 0) {
          if (init->kind != ExprKind::InitList) typeError(d.pos, "array needs a brace initializer");
          t = CType::arrayOf(*t.elem, static_cast<int64_t>(init->kids.size()));
          init->type = t;
          st->name = declareLocal(d.name, t, d.pos);
        }
      }
      if (t.isArray() && t.count < 0) typeError(d.pos, "array size missing");
      st->declType = t;
      st->expr = std::move(init);
      out.push_back(std::move(st));
    } while (accept(","));
    expect(";");
  }

  ExprPtr parseInitializer(const CType& t) {
    SrcPos p = cur().pos;
    if (accept("{")) {
      auto list = Expr::make(ExprKind::InitList, t);
      list->pos = p;
      if (t.isArray()) {
        while (!accept("}")) {
          if (t.count >= 0 && static_cast<int64_t>(list->kids.size()) >= t.count)
            typeError(cur().pos, "too many initializers");
          list->kids.push_back(parseInitializer(*t.elem));
          if (!accept(",")) {
            expect("}");
            break;
          }
        }
      } else if (t.isRecord()) {
        const RecordInfo& r = tu_.records.get(t.tag);
        while (!accept("}")) {
          if (list->kids.size() >= r.fields.size() || (r.isUnion && !list->kids.empty()))
            typeError(cur().pos, "too many initializers");
          list->kids.push_back(parseInitializer(r.fields[list->kids.size()].type));
          if (!accept(",")) {
            expect("}");
            break;
          }
        }
      } else {
        ExprPtr e = parseInitializer(t);
        accept(",");
        expect("}");
        return e;
      }
      return list;
    }
    if (t.isArray()) unsupported(p, "arrays must be initialized with a brace list");
    ExprPtr e = rvalue(parseAssign());
    if (t.isRecord()) {
      if (e->type != t) typeError(p, "incompatible record initializer");
      return e;
    }
    return convert(std::move(e), t, false, p);
  }

  StmtList bodyOf(StmtPtr s) {
    StmtList out;
    if (!s) return out;
    if (s->kind == StmtKind::Block) return std::move(s->body);
    out.push_back(std::move(s));
    return out;
  }

  StmtList parseSubStatement() {
    if (isTypeStart()) syntax("a declaration is not allowed here");
    scopes_.emplace_back();
    StmtPtr s = parseStatement();
    scopes_.pop_back();
    return bodyOf(std::move(s));
  }

  ExprPtr parseCondition() {
    SrcPos p = cur().pos;
    ExprPtr e = rvalue(parseExpr());
    if (!e->type.isScalar()) typeError(p, "condition must have scalar type");
    return e;
  }

  StmtPtr parseStatement() {
    SrcPos p = cur().pos;
    if (peekKind(TokKind::Ident) && peekAt(1, ":"))
      fail(ErrorCode::Goto, at(p) + "labels and goto are not supported");
    if (accept("goto")) fail(ErrorCode::Goto, at(p) + "goto is not supported");
    if (accept(";")) return nullptr;
    if (accept("{")) {
      scopes_.emplace_back();
      auto b = Stmt::block(parseBlockBody());
      scopes_.pop_back();
      b->pos = p;
      return b;
    }
    if (accept("if")) {
      expect("(");
      ExprPtr c = parseCondition();
      expect(")");
      StmtList then = parseSubStatement();
      StmtList els;
      if (accept("else")) els = parseSubStatement();
      auto s = Stmt::ifStmt(std::move(c), std::move(then), std::move(els));
      s->pos = p;
      return s;
    }
    if (accept("while")) {
      auto s = Stmt::make(StmtKind::While);
      s->pos = p;
      expect("(");
      s->expr = parseCondition();
      expect(")");
      ctx_.push_back('L');
      s->body = parseSubStatement();
      ctx_.pop_back();
      return s;
    }
    if (accept("do")) {
      auto s = Stmt::make(StmtKind::DoWhile);
      s->pos = p;
      ctx_.push_back('L');
      s->body = parseSubStatement();
      ctx_.pop_back();
      expect("while");
      expect("(");
      s->expr = parseCondition();
      expect(")");
      expect(";");
      return s;
    }
    if (accept("for")) {
      auto s = Stmt::make(StmtKind::For);
      s->pos = p;
      expect("(");
      scopes_.emplace_back();
      if (isTypeStart()) {
        parseLocalDecl(s->init);
      } else if (!accept(";")) {
        s->init.push_back(Stmt::exprStmt(parseExpr()));
        expect(";");
      }
      if (!peek(";")) s->expr = parseCondition();
      expect(";");
      if (!peek(")")) s->step.push_back(Stmt::exprStmt(parseExpr()));
      expect(")");
      ctx_.push_back('L');
      s->body = parseSubStatement();
      ctx_.pop_back();
      scopes_.pop_back();
      return s;
    }
    if (accept("switch")) return parseSwitch(p);
    if (accept("break")) {
      expect(";");
      if (ctx_.empty()) fail(ErrorCode::Syntax, at(p) + "break outside of a loop or switch");
      if (ctx_.back() == 'S')
        unsupported(p, "break inside a switch must be the last statement of its case");
      return Stmt::make(StmtKind::Break);
    }
    if (accept("continue")) {
      expect(";");
      bool inLoop = false;
      for (char c : ctx_) inLoop |= c == 'L';
      if (!inLoop) fail(ErrorCode::Syntax, at(p) + "continue outside of a loop");
      return Stmt::make(StmtKind::Continue);
    }
    if (accept("return")) {
      auto s = Stmt::make(StmtKind::Return);
      s->pos = p;
      if (!peek(";")) {
        ExprPtr e = rvalue(parseExpr());
        if (fn_->retType.isVoid()) typeError(p, "void function returns a value");
        s->expr = convert(std::move(e), fn_->retType, false, p);
      } else if (!fn_->retType.isVoid()) {
        typeError(p, "non-void function must return a value");
      }
      expect(";");
      return s;
    }
    if (peek("case") || peek("default")) syntax("case label outside of a switch");
    auto s = Stmt::exprStmt(parseExpr());
    s->pos = p;
    expect(";");
    return s;
  }

  StmtPtr parseSwitch(SrcPos p) {
    auto s = Stmt::make(StmtKind::Switch);
    s->pos = p;
    expect("(");
    ExprPtr v = rvalue(parseExpr());
    if (!v->type.isInteger()) typeError(p, "switch on a non-integer value");
    CType vt = promote(v->type);
    s->expr = convert(std::move(v), vt, false, p);
    expect(")");
    expect("{");
    scopes_.emplace_back();
    std::set<int64_t> seen;
    bool haveDefault = false;
    while (!accept("}")) {
      SrcPos cp = cur().pos;
      if (accept("case")) {
        ExprPtr k = convert(rvalue(parseTernary()), vt, false, cp);
        if (k->kind != ExprKind::IntConst) typeError(cp, "case label is not a constant");
        if (!seen.insert(k->ival).second) typeError(cp, "duplicate case label");
        expect(":");
        SwitchCase c;
        c.value = k->ival;
        s->cases.push_back(std::move(c));
        continue;
      }
      if (accept("default")) {
        expect(":");
        if (haveDefault) typeError(cp, "duplicate default label");
        haveDefault = true;
        SwitchCase c;
        c.isDefault = true;
        s->cases.push_back(std::move(c));
        continue;
      }
      if (s->cases.empty()) unsupported(cp, "statements before the first case label");
      StmtList& body = s->cases.back().body;
      if (peek("break") && peekAt(1, ";")) {
        pos_ += 2;
        body.push_back(Stmt::make(StmtKind::Break));
        continue;
      }
      ctx_.push_back('S');
      parseBlockItem(body);
      ctx_.pop_back();
    }
    scopes_.pop_back();
    return s;
  }

  // ---- expressions ---------------------------------------------------------
  ExprPtr rvalue(ExprPtr e) {
    if (e->type.isArray()) {
      SrcPos p = e->pos;
      auto d = Expr::make(ExprKind::Decay, CType::pointerTo(*e->type.elem));
      d->pos = p;
      d->kids.push_back(std::move(e));
      return d;
    }
    if (e->type.isFunc()) {
      // A dereferenced function pointer used as a value is the pointer itself.
      if (e->kind == ExprKind::Deref) return std::move(e->kids[0]);
    }
    return e;
  }

  ExprPtr fold(ExprPtr e) {
    try {
      if (e->kind == ExprKind::Cast && e->kids[0]->isConst() && e->type.isScalar() &&
          e->kids[0]->type.isScalar()) {
        const Expr& k = *e->kids[0];
        CValue v = convertValue(k.type, e->type, {k.ival, k.fval});
        auto r = e->type.isFloating() ? Expr::floatConst(v.f, e->type) : Expr::intConst(v.i, e->type);
        r->pos = e->pos;
        return r;
      }
      if (e->kind == ExprKind::Unary && e->kids[0]->isConst()) {
        const Expr& k = *e->kids[0];
        ExprPtr r;
        if (k.type.isFloating()) {
          if (e->unOp == UnOp::Neg) r = Expr::floatConst(-k.fval, e->type);
          else if (e->unOp == UnOp::LogNot) r = Expr::intConst(k.fval == 0.0, e->type);
        } else {
          r = Expr::intConst(evalIntUnary(e->unOp, e->type, k.ival), e->type);
        }
        if (r) {
          r->pos = e->pos;
          return r;
        }
      }
      if (e->kind == ExprKind::Binary && e->kids[0]->isConst() && e->kids[1]->isConst() &&
          !e->type.isPointer() && !e->kids[0]->type.isPointer() && !e->kids[1]->type.isPointer()) {
        const Expr& a = *e->kids[0];
        const Expr& b = *e->kids[1];
        ExprPtr r;
        if (e->binOp == BinOp::LogAnd || e->binOp == BinOp::LogOr) {
          bool x = a.type.isFloating() ? a.fval != 0.0 : a.ival != 0;
          bool y = b.type.isFloating() ? b.fval != 0.0 : b.ival != 0;
          r = Expr::intConst(e->binOp == BinOp::LogAnd ? (x && y) : (x || y), e->type);
        } else if (a.type.isFloating()) {
          if (isRelational(e->binOp)) r = Expr::intConst(evalFloatCompare(e->binOp, a.fval, b.fval), e->type);
          else r = Expr::floatConst(evalFloatBinary(e->binOp, e->type, a.fval, b.fval), e->type);
        } else {
          r = Expr::intConst(evalIntBinary(e->binOp, a.type, a.ival, b.ival), e->type);
        }
        r->pos = e->pos;
        return r;
      }
    } catch (const Error&) {
      // Division by zero and friends are left for run time.
    }
    return e;
  }

  ExprPtr convert(ExprPtr e, const CType& to, bool explicitCast, SrcPos p) {
    const CType& from = e->type;
    if (from == to) return e;
    if (to.isVoid()) unsupported(p, "casts to void are not supported");
    bool ok = false;
    if (from.isArithmetic() && to.isArithmetic()) ok = true;
    else if (from.isPointer() && to.isPointer()) ok = true;
    else if (from.isInteger() && to.isPointer()) ok = explicitCast || isNullConstant(*e);
    else if (from.isPointer() && to.isInteger()) ok = explicitCast;
    if (!ok) typeError(p, "cannot convert " + from.str() + " to " + to.str());
    auto c = Expr::cast(std::move(e), to);
    c->pos = p;
    c->implicit = !explicitCast;
    return fold(std::move(c));
  }

  ExprPtr parseExpr() {
    ExprPtr e = parseAssign();
    if (peek(",")) unsupported(cur().pos, "the comma operator is not supported");
    return e;
  }

  void requireModifiable(const Expr& e, SrcPos p) {
    if (!isPlace(e) || e.type.isArray() || e.type.isFunc())
      typeError(p, "expression is not assignable");
  }

  ExprPtr parseAssign() {
    ExprPtr lhs = parseTernary();
    static const std::map<std::string, std::optional<BinOp>> ops = {
        {"=", std::nullopt},       {"+=", BinOp::Add},    {"-=", BinOp::Sub},
        {"*=", BinOp::Mul},        {"/=", BinOp::Div},    {"%=", BinOp::Rem},
        {"<<=", BinOp::Shl},       {">>=", BinOp::Shr},   {"&=", BinOp::BitAnd},
        {"|=", BinOp::BitOr},      {"^=", BinOp::BitXor},
    };
    if (!peekKind(TokKind::Punct)) return lhs;
    auto it = ops.find(cur().text);
    if (it == ops.end()) return lhs;
    SrcPos p = cur().pos;
    ++pos_;
    ExprPtr rhs = rvalue(parseAssign());
    requireModifiable(*lhs, p);
    if (!it->second) {
      ExprPtr value;
      if (lhs->type.isRecord()) {
        if (rhs->type != lhs->type) typeError(p, "incompatible record assignment");
        value = std::move(rhs);
      } else {
        value = convert(std::move(rhs), lhs->type, false, p);
      }
      auto a = Expr::assign(std::move(lhs), std::move(value));
      a->pos = p;
      return a;
    }
    const BinOp op = *it->second;
    const CType lt = lhs->type;
    auto e = Expr::make(ExprKind::CompoundAssign, lt);
    e->pos = p;
    e->binOp = op;
    if (lt.isPointer()) {
      if ((op != BinOp::Add && op != BinOp::Sub) || !rhs->type.isInteger())
        typeError(p, "invalid compound assignment to a pointer");
      e->opType = lt;
      rhs = convert(std::move(rhs), promote(rhs->type), false, p);
    } else {
      if (!lt.isArithmetic() || !rhs->type.isArithmetic()) typeError(p, "invalid compound assignment");
      if (op == BinOp::Shl || op == BinOp::Shr || op == BinOp::Rem || op == BinOp::BitAnd ||
          op == BinOp::BitOr || op == BinOp::BitXor) {
        if (!lt.isInteger() || !rhs->type.isInteger()) typeError(p, "integer operands required");
      }
      if (op == BinOp::Shl || op == BinOp::Shr) {
        e->opType = promote(lt);
        rhs = convert(std::move(rhs), promote(rhs->type), false, p);
      } else {
        e->opType = commonType(lt, rhs->type);
        rhs = convert(std::move(rhs), e->opType, false, p);
      }
    }
    e->kids.push_back(std::move(lhs));
    e->kids.push_back(std::move(rhs));
    return e;
  }

  ExprPtr parseTernary() {
    ExprPtr c = parseBinary(1);
    if (!peek("?")) return c;
    SrcPos p = cur().pos;
    ++pos_;
    c = rvalue(std::move(c));
    if (!c->type.isScalar()) typeError(p, "condition must have scalar type");
    ExprPtr a = rvalue(parseExpr());
    expect(":");
    ExprPtr b = rvalue(parseTernary());
    CType t;
    if (a->type.isArithmetic() && b->type.isArithmetic()) {
      t = commonType(a->type, b->type);
    } else if (a->type.isPointer() && (b->type == a->type || isNullConstant(*b))) {
      t = a->type;
    } else if (b->type.isPointer() && isNullConstant(*a)) {
      t = b->type;
    } else if (a->type.isPointer() && b->type.isPointer()) {
      t = a->type;
    } else if (a->type.isVoid() && b->type.isVoid()) {
      t = a->type;
    } else {
      typeError(p, "incompatible operands of ?:");
    }
    auto e = Expr::make(ExprKind::Ternary, t);
    e->pos = p;
    e->kids.push_back(std::move(c));
    if (t.isVoid()) {
      e->kids.push_back(std::move(a));
      e->kids.push_back(std::move(b));
    } else {
      e->kids.push_back(convert(std::move(a), t, false, p));
      e->kids.push_back(convert(std::move(b), t, false, p));
    }
    return e;
  }

  static int precedence(const std::string& op) {
    static const std::map<std::string, int> prec = {
        {"||", 1}, {"&&", 2}, {"|", 3},  {"^", 4},  {"&", 5},  {"==", 6}, {"!=", 6},
        {"<", 7},  {">", 7},  {"<=", 7}, {">=", 7}, {"<<", 8}, {">>", 8}, {"+", 9},
        {"-", 9},  {"*", 10}, {"/", 10}, {"%", 10},
    };
    auto it = prec.find(op);
    return it == prec.end() ? 0 : it->second;
  }

  static BinOp binOpFor(const std::string& op) {
    static const std::map<std::string, BinOp> m = {
        {"+", BinOp::Add},     {"-", BinOp::Sub},    {"*", BinOp::Mul},    {"/", BinOp::Div},
        {"%", BinOp::Rem},     {"<<", BinOp::Shl},   {">>", BinOp::Shr},   {"&", BinOp::BitAnd},
        {"|", BinOp::BitOr},   {"^", BinOp::BitXor}, {"<", BinOp::Lt},     {">", BinOp::Gt},
        {"<=", BinOp::Le},     {">=", BinOp::Ge},    {"==", BinOp::Eq},    {"!=", BinOp::Ne},
        {"&&", BinOp::LogAnd}, {"||", BinOp::LogOr},
    };
    return m.at(op);
  }

  ExprPtr parseBinary(int minPrec) {
    ExprPtr lhs = parseUnary();
    while (peekKind(TokKind::Punct)) {
      int prec = precedence(cur().text);
      if (prec == 0 || prec < minPrec) break;
      SrcPos p = cur().pos;
      BinOp op = binOpFor(cur().text);
      ++pos_;
      ExprPtr rhs = parseBinary(prec + 1);
      lhs = makeBinary(op, std::move(lhs), std::move(rhs), p);
    }
    return lhs;
  }

  ExprPtr makeBinary(BinOp op, ExprPtr a, ExprPtr b, SrcPos p) {
    a = rvalue(std::move(a));
    b = rvalue(std::move(b));
    const CType at = a->type;
    const CType bt = b->type;
    ExprPtr e;
    auto build = [&](const CType& t) {
      e = Expr::binary(op, std::move(a), std::move(b), t);
      e->pos = p;
    };
    switch (op) {
      case BinOp::LogAnd:
      case BinOp::LogOr:
        if (!at.isScalar() || !bt.isScalar()) typeError(p, "scalar operands required");
        build(CType::intType());
        break;
      case BinOp::Add:
        if (at.isPointer() && bt.isInteger()) {
          checkPointerArith(at, p);
          b = convert(std::move(b), promote(bt), false, p);
          build(at);
        } else if (at.isInteger() && bt.isPointer()) {
          checkPointerArith(bt, p);
          a = convert(std::move(a), promote(at), false, p);
          std::swap(a, b);
          build(bt);
        } else {
          arith(a, b, p, false);
          build(a->type);
        }
        break;
      case BinOp::Sub:
        if (at.isPointer() && bt.isInteger()) {
          checkPointerArith(at, p);
          b = convert(std::move(b), promote(bt), false, p);
          build(at);
        } else if (at.isPointer() && bt.isPointer()) {
          checkPointerArith(at, p);
          if (at != bt) typeError(p, "subtraction of incompatible pointers");
          build(CType::longType());
        } else {
          arith(a, b, p, false);
          build(a->type);
        }
        break;
      case BinOp::Mul:
      case BinOp::Div:
        arith(a, b, p, false);
        build(a->type);
        break;
      case BinOp::Rem:
      case BinOp::BitAnd:
      case BinOp::BitOr:
      case BinOp::BitXor:
        arith(a, b, p, true);
        build(a->type);
        break;
      case BinOp::Shl:
      case BinOp::Shr:
        if (!at.isInteger() || !bt.isInteger()) typeError(p, "integer operands required");
        a = convert(std::move(a), promote(at), false, p);
        b = convert(std::move(b), promote(bt), false, p);
        build(a->type);
        break;
      default:  // relational
        if (at.isArithmetic() && bt.isArithmetic()) {
          arith(a, b, p, false);
        } else if (at.isPointer() && bt.isPointer()) {
          // fine
        } else if (at.isPointer() && isNullConstant(*b)) {
          b = convert(std::move(b), at, false, p);
        } else if (bt.isPointer() && isNullConstant(*a)) {
          a = convert(std::move(a), bt, false, p);
        } else {
          typeError(p, "invalid comparison operands");
        }
        build(CType::intType());
        break;
    }
    return fold(std::move(e));
  }

  void checkPointerArith(const CType& pt, SrcPos p) {
    if (pt.pointee().isVoid() || pt.pointee().isFunc()) typeError(p, "arithmetic on " + pt.str());
    tu_.records.layout(pt.pointee());
  }

  void arith(ExprPtr& a, ExprPtr& b, SrcPos p, bool integerOnly) {
    if (!a->type.isArithmetic() || !b->type.isArithmetic()) typeError(p, "arithmetic operands required");
    if (integerOnly && (!a->type.isInteger() || !b->type.isInteger())) typeError(p, "integer operands required");
    CType t = commonType(a->type, b->type);
    a = convert(std::move(a), t, false, p);
    b = convert(std::move(b), t, false, p);
  }

  ExprPtr parseUnary() {
    SrcPos p = cur().pos;
    if (peek("++") || peek("--")) {
      bool inc = cur().text == "++";
      ++pos_;
      ExprPtr e = parseUnary();
      return makeIncDec(std::move(e), inc, true, p);
    }
    if (accept("&")) {
      ExprPtr e = parseCastExpr();
      if (e->kind == ExprKind::FuncRef) return e;
      if (e->kind == ExprKind::Deref && e->type.isFunc()) return std::move(e->kids[0]);
      if (!isPlace(*e)) typeError(p, "cannot take the address of an rvalue");
      auto r = Expr::addrOf(std::move(e));
      r->pos = p;
      return r;
    }
    if (accept("*")) {
      ExprPtr e = rvalue(parseCastExpr());
      if (!e->type.isPointer()) typeError(p, "dereference of a non-pointer");
      if (e->type.pointee().isVoid()) typeError(p, "dereference of void*");
      auto r = Expr::deref(std::move(e));
      r->pos = p;
      return r;
    }
    if (accept("-") || accept("+") || accept("~") || accept("!")) {
      std::string op = toks_[pos_ - 1].text;
      ExprPtr e = rvalue(parseCastExpr());
      if (op == "!") {
        if (!e->type.isScalar()) typeError(p, "scalar operand required");
        auto r = Expr::unary(UnOp::LogNot, std::move(e), CType::intType());
        r->pos = p;
        return fold(std::move(r));
      }
      if (!e->type.isArithmetic() || (op == "~" && !e->type.isInteger()))
        typeError(p, "invalid operand to unary " + op);
      CType t = promote(e->type);
      e = convert(std::move(e), t, false, p);
      if (op == "+") return e;
      auto r = Expr::unary(op == "-" ? UnOp::Neg : UnOp::BitNot, std::move(e), t);
      r->pos = p;
      return fold(std::move(r));
    }
    if (accept("sizeof")) {
      CType t;
      if (peek("(") && isTypeStart(1)) {
        ++pos_;
        t = parseTypeName();
        expect(")");
      } else {
        t = parseUnary()->type;
      }
      if (t.isFunc()) typeError(p, "sizeof a function");
      return Expr::intConst(tu_.records.sizeOf(t), CType::ulongType());
    }
    return parseCastExpr();
  }

  CType parseTypeName() {
    Specs s = parseSpecs();
    Declarator d = parseDeclarator(true);
    if (!d.name.empty()) syntax("unexpected name in type");
    return d.apply(s.type);
  }

  ExprPtr parseCastExpr() {
    if (peek("(") && isTypeStart(1)) {
      SrcPos p = cur().pos;
      ++pos_;
      CType t = parseTypeName();
      expect(")");
      ExprPtr e = rvalue(parseCastExpr());
      if (!t.isScalar() || !e->type.isScalar()) {
        if (t == e->type) return e;
        typeError(p, "invalid cast from " + e->type.str() + " to " + t.str());
      }
      if (e->type == t) {
        auto c = Expr::cast(std::move(e), t);
        c->pos = p;
        return fold(std::move(c));
      }
      return convert(std::move(e), t, true, p);
    }
    if (peek("++") || peek("--") || peek("&") || peek("*") || peek("-") || peek("+") ||
        peek("~") || peek("!") || peek("sizeof"))
      return parseUnary();
    return parsePostfix();
  }

  ExprPtr makeIncDec(ExprPtr e, bool inc, bool prefix, SrcPos p) {
    requireModifiable(*e, p);
    if (!e->type.isScalar()) typeError(p, "invalid operand to ++/--");
    if (e->type.isPointer()) checkPointerArith(e->type, p);
    auto r = Expr::make(ExprKind::IncDec, e->type);
    r->pos = p;
    r->isInc = inc;
    r->isPrefix = prefix;
    r->kids.push_back(std::move(e));
    return r;
  }

  ExprPtr parsePostfix() {
    ExprPtr e = parsePrimary();
    while (true) {
      SrcPos p = cur().pos;
      if (accept("[")) {
        ExprPtr idx = rvalue(parseExpr());
        expect("]");
        if (!idx->type.isInteger()) typeError(p, "array index is not an integer");
        idx = convert(std::move(idx), promote(idx->type), false, p);
        CType elem;
        if (e->type.isArray()) {
          elem = *e->type.elem;
        } else {
          e = rvalue(std::move(e));
          if (!e->type.isPointer()) typeError(p, "subscript of a non-array");
          checkPointerArith(e->type, p);
          elem = e->type.pointee();
        }
        auto r = Expr::make(ExprKind::Index, elem);
        r->pos = p;
        r->kids.push_back(std::move(e));
        r->kids.push_back(std::move(idx));
        e = std::move(r);
      } else if (accept(".") || accept("->")) {
        const bool arrow = toks_[pos_ - 1].text == "->";
        std::string field = identifier();
        if (arrow) {
          e = rvalue(std::move(e));
          if (!e->type.isPointer() || !e->type.pointee().isRecord()) typeError(p, "-> on a non-record pointer");
          e = Expr::deref(std::move(e));
          e->pos = p;
        }
        if (!e->type.isRecord()) typeError(p, "member access on a non-record");
        if (!isPlace(*e)) unsupported(p, "member access on a record rvalue");
        const FieldInfo& fi = tu_.records.field(e->type.tag, field);
        auto r = Expr::make(ExprKind::Member, fi.type);
        r->pos = p;
        r->name = field;
        r->kids.push_back(std::move(e));
        e = std::move(r);
      } else if (peek("(")) {
        e = parseCall(std::move(e), p);
      } else if (peek("++") || peek("--")) {
        bool inc = cur().text == "++";
        ++pos_;
        e = makeIncDec(std::move(e), inc, false, p);
      } else {
        return e;
      }
    }
  }

  ExprPtr parseCall(ExprPtr callee, SrcPos p) {
    expect("(");
    std::vector<ExprPtr> args;
    if (!accept(")")) {
      do {
        args.push_back(rvalue(parseAssign()));
      } while (accept(","));
      expect(")");
    }
    CType ft;
    ExprPtr e;
    if (callee->kind == ExprKind::FuncRef) {
      ft = callee->type.pointee();
      e = Expr::make(ExprKind::Call, *ft.elem);
      e->name = callee->name;
    } else {
      ExprPtr fp = rvalue(std::move(callee));
      if (!fp->type.isPointer() || !fp->type.pointee().isFunc()) typeError(p, "called object is not a function");
      ft = fp->type.pointee();
      e = Expr::make(ExprKind::IndCall, *ft.elem);
      e->kids.push_back(std::move(fp));
    }
    e->pos = p;
    if (args.size() != ft.params.size())
      typeError(p, "wrong number of arguments: expected " + std::to_string(ft.params.size()) + ", got " +
                       std::to_string(args.size()));
    for (size_t i = 0; i < args.size(); ++i) e->kids.push_back(convert(std::move(args[i]), ft.params[i], false, p));
    return e;
  }

  ExprPtr parsePrimary() {
    const Token& t = cur();
    SrcPos p = t.pos;
    if (t.kind == TokKind::IntLit) {
      ++pos_;
      CType ty;
      const uint64_t v = t.intValue;
      const bool hexLike = t.text.size() > 1 && t.text[0] == '0';
      if (!t.isLong && !t.isUnsigned && v <= 0x7fffffffULL) ty = CType::intType();
      else if (!t.isLong && (t.isUnsigned || hexLike) && v <= 0xffffffffULL) ty = CType::uintType();
      else if (!t.isUnsigned && v <= 0x7fffffffffffffffULL) ty = CType::longType();
      else ty = CType::ulongType();
      auto e = Expr::intConst(static_cast<int64_t>(v), ty);
      e->pos = p;
      return e;
    }
    if (t.kind == TokKind::CharLit) {
      ++pos_;
      auto e = Expr::intConst(static_cast<int64_t>(t.intValue), CType::intType());
      e->pos = p;
      return e;
    }
    if (t.kind == TokKind::FloatLit) {
      ++pos_;
      auto e = Expr::floatConst(t.floatValue, t.isFloat32 ? CType::floatType() : CType::doubleType());
      e->pos = p;
      return e;
    }
    if (accept("(")) {
      ExprPtr e = parseExpr();
      expect(")");
      return e;
    }
    if (t.kind == TokKind::Ident) {
      std::string n = identifier();
      if (const LocalSym* l = lookupLocal(n)) {
        auto e = Expr::var(l->unique, l->type, VarScope::Local);
        e->pos = p;
        return e;
      }
      if (auto g = globals_.find(n); g != globals_.end()) {
        auto e = Expr::var(n, g->second, VarScope::Global);
        e->pos = p;
        return e;
      }
      if (auto f = funcs_.find(n); f != funcs_.end()) {
        referenced_.emplace(n, p);
        auto e = Expr::make(ExprKind::FuncRef, CType::pointerTo(f->second));
        e->name = n;
        e->pos = p;
        return e;
      }
      typeError(p, "use of undeclared identifier '" + n + "'");
    }
    syntax("unexpected token '" + t.text + "'");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  TranslationUnit tu_;
  std::map<std::string, CType> typedefs_;
  std::map<std::string, CType> globals_;
  std::map<std::string, CType> funcs_;
  std::set<std::string> defined_;
  std::map<std::string, SrcPos> referenced_;
  std::vector<std::map<std::string, LocalSym>> scopes_;
  std::set<std::string> used_;
  std::vector<char> ctx_;
  FuncDef* fn_ = nullptr;
  int anonCounter_ = 0;
};

}  // namespace

TranslationUnit parse(std::string_view source) { return Parser(tokenize(source)).run(); }

}  // namespace c2pl
