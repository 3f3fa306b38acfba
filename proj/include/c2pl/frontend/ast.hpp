#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "c2pl/frontend/ctype.hpp"

namespace c2pl {

struct SrcPos {
  int line = 0;
  int col = 0;
};

enum class BinOp {
  Add, Sub, Mul, Div, Rem, Shl, Shr, BitAnd, BitOr, BitXor,
  Lt, Gt, Le, Ge, Eq, Ne, LogAnd, LogOr,
};

enum class UnOp { Neg, BitNot, LogNot };

const char* binOpSpelling(BinOp op);
const char* unOpSpelling(UnOp op);
bool isRelational(BinOp op);

enum class ExprKind {
  IntConst,
  FloatConst,
  Var,            // name, scope
  FuncRef,        // a function designator used as a value
  Unary,          // unOp, kids[0]
  Binary,         // binOp, kids[0..1]
  Assign,         // kids[0] place, kids[1] value (already converted)
  CompoundAssign, // binOp, kids[0] place, kids[1] value; opType = computation type
  IncDec,         // isInc, isPrefix, kids[0] place
  AddrOf,         // kids[0] place
  Deref,          // kids[0] pointer
  Index,          // kids[0] array place or pointer value, kids[1] index
  Member,         // kids[0] record place, name = field
  Cast,           // type = target, kids[0]
  Call,           // name = callee, kids = args
  IndCall,        // kids[0] = function pointer, kids[1..] = args
  Ternary,        // kids[0] cond, kids[1] then, kids[2] else
  Decay,          // kids[0] array place -> pointer to first element
  InitList,       // brace initializer, kids = elements
};

enum class VarScope { Local, Global };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntConst;
  CType type;
  SrcPos pos;

  int64_t ival = 0;   // IntConst (bit pattern, canonical for type)
  double fval = 0.0;  // FloatConst
  std::string name;   // Var, FuncRef, Call, Member field
  VarScope scope = VarScope::Local;
  BinOp binOp = BinOp::Add;
  UnOp unOp = UnOp::Neg;
  bool isInc = false;
  bool isPrefix = false;
  bool implicit = false;  // Cast inserted by type checking
  CType opType;           // CompoundAssign computation type
  std::vector<ExprPtr> kids;

  ExprPtr clone() const;

  static ExprPtr intConst(int64_t v, const CType& t);
  static ExprPtr floatConst(double v, const CType& t);
  static ExprPtr var(const std::string& name, const CType& t,
                     VarScope scope = VarScope::Local);
  static ExprPtr make(ExprKind k, const CType& t);
  static ExprPtr unary(UnOp op, ExprPtr a, const CType& t);
  static ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b, const CType& t);
  static ExprPtr cast(ExprPtr a, const CType& t);
  static ExprPtr addrOf(ExprPtr place);
  static ExprPtr deref(ExprPtr ptr);
  static ExprPtr assign(ExprPtr place, ExprPtr value);
  static ExprPtr call(const std::string& fn, std::vector<ExprPtr> args, const CType& ret);

  bool isConst() const { return kind == ExprKind::IntConst || kind == ExprKind::FloatConst; }
  /// Constant or variable reference: a three-address operand.
  bool isOperand() const { return isConst() || kind == ExprKind::Var; }
};

enum class StmtKind {
  Expr,
  Decl,
  If,
  While,
  DoWhile,
  For,
  Switch,
  Break,
  Continue,
  Return,
  Block,
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using StmtList = std::vector<StmtPtr>;

struct SwitchCase {
  bool isDefault = false;
  int64_t value = 0;
  StmtList body;
};

struct Stmt {
  StmtKind kind = StmtKind::Expr;
  SrcPos pos;

  ExprPtr expr;       // Expr stmt, Decl init, If/loop condition, Return value, Switch scrutinee
  std::string name;   // Decl name
  CType declType;     // Decl type
  StmtList body;      // Block, If then, loop body
  StmtList alt;       // If else
  StmtList init;      // For init
  StmtList pre;       // statements computing the loop condition (after lowering)
  StmtList step;      // For step
  std::vector<SwitchCase> cases;

  StmtPtr clone() const;

  static StmtPtr exprStmt(ExprPtr e);
  static StmtPtr ret(ExprPtr e);
  static StmtPtr ifStmt(ExprPtr cond, StmtList then, StmtList els);
  static StmtPtr block(StmtList body);
  static StmtPtr make(StmtKind k);
};

StmtList cloneList(const StmtList& list);

struct VarDecl {
  std::string name;
  CType type;
};

struct FuncDef {
  std::string name;
  CType retType;
  std::vector<VarDecl> params;
  /// Every non-parameter local, with function-unique names.
  std::vector<VarDecl> locals;
  StmtList body;
  SrcPos pos;
  /// Non-empty for generated loop helpers: the function the loop came from.
  std::string helperOf;

  FuncDef clone() const;
  CType type() const;
  const VarDecl* findVar(const std::string& n) const;
  bool hasVar(const std::string& n) const { return findVar(n) != nullptr; }
  void addLocal(const std::string& n, const CType& t) { locals.push_back({n, t}); }
};

struct GlobalVar {
  std::string name;
  CType type;
  ExprPtr init;  // constant expression or InitList, may be null
  SrcPos pos;
};

struct BuiltinDecl {
  std::string name;
  CType type;  // function type
};

const std::vector<BuiltinDecl>& builtinDecls();
const BuiltinDecl* findBuiltin(const std::string& name);

struct TranslationUnit {
  RecordTable records;
  std::vector<GlobalVar> globals;
  std::vector<FuncDef> functions;
  /// User functions in source order followed by the builtins. The position
  /// of a name in this table defines its function address.
  std::vector<std::string> funcTable;

  TranslationUnit clone() const;
  const FuncDef* findFunction(const std::string& name) const;
  FuncDef* findFunction(const std::string& name);
  const GlobalVar* findGlobal(const std::string& name) const;
  /// Type of any callable name (user function or builtin).
  std::optional<CType> functionType(const std::string& name) const;
  void rebuildFuncTable();
};

/// Fixed address map shared by the interpreter and the translator.
constexpr int64_t kFuncBase = 0x1000;
constexpr int64_t kFuncStride = 8;
constexpr int64_t kGlobalBase = 0x10000;

struct GlobalLayout {
  std::map<std::string, int64_t> address;
  int64_t end = kGlobalBase;
};

GlobalLayout computeGlobalLayout(const TranslationUnit& tu);
int64_t functionAddress(const TranslationUnit& tu, const std::string& name);
/// Inverse of functionAddress; nullopt when addr is not a function address.
std::optional<std::string> functionAtAddress(const TranslationUnit& tu, int64_t addr);

/// Canonical integer bit pattern of v when stored in an object of type t:
/// sign-extended for signed types, zero-extended otherwise.
int64_t canonicalInt(const CType& t, int64_t v);

}  // namespace c2pl
