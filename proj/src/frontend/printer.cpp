#include "c2pl/frontend/printer.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "c2pl/numfmt.hpp"

namespace c2pl {

namespace {

const CType& innermost(const CType& t) {
  const CType* p = &t;
  while (p->elem) p = p->elem.get();
  return *p;
}

enum Prec {
  kAssign = 2,
  kTernary = 3,
  kUnary = 15,
  kPostfix = 16,
};

int binaryPrec(BinOp op) {
  switch (op) {
    case BinOp::LogOr: return 4;
    case BinOp::LogAnd: return 5;
    case BinOp::BitOr: return 6;
    case BinOp::BitXor: return 7;
    case BinOp::BitAnd: return 8;
    case BinOp::Eq:
    case BinOp::Ne: return 9;
    case BinOp::Lt:
    case BinOp::Gt:
    case BinOp::Le:
    case BinOp::Ge: return 10;
    case BinOp::Shl:
    case BinOp::Shr: return 11;
    case BinOp::Add:
    case BinOp::Sub: return 12;
    default: return 13;
  }
}

class CPrinter {
 public:
  explicit CPrinter(const RecordTable& records) : records_(records) {}

  std::string expr(const Expr& e) { return sub(e, 0); }

  std::string sub(const Expr& e, int minPrec) {
    int p = 0;
    std::string s = text(e, p);
    return p < minPrec ? "(" + s + ")" : s;
  }

  void function(std::ostream& os, const FuncDef& f) {
    std::string head = f.name + "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i) head += ", ";
      head += declText(f.params[i].type, f.params[i].name, records_);
    }
    if (f.params.empty()) head += "void";
    head += ")";
    os << declText(f.retType, head, records_) << " {\n";
    block(os, f.body, 1);
    os << "}\n";
  }

  void block(std::ostream& os, const StmtList& list, int depth) {
    for (const auto& s : list) stmt(os, *s, depth);
  }

 private:
  std::string constant(const Expr& e, int& prec) {
    prec = kPostfix;
    const CType& t = e.type;
    if (e.kind == ExprKind::FloatConst) {
      const double v = e.fval;
      std::string s;
      if (std::isnan(v)) s = "(0.0 / 0.0)";
      else if (std::isinf(v)) s = v < 0 ? "(-1.0 / 0.0)" : "(1.0 / 0.0)";
      else s = formatDouble(v);
      if (std::signbit(v) && !std::isnan(v) && !std::isinf(v)) prec = kUnary;
      if (t.kind == CType::Kind::Float) {
        if (std::isnan(v) || std::isinf(v)) {
          prec = 14;
          return "(float)" + s;
        }
        s += "f";
      }
      return s;
    }
    const int64_t v = e.ival;
    switch (t.kind) {
      case CType::Kind::Int:
        if (v == std::numeric_limits<int32_t>::min()) return "(-2147483647 - 1)";
        if (v < 0) prec = kUnary;
        return std::to_string(v);
      case CType::Kind::UInt:
        return std::to_string(static_cast<uint64_t>(v)) + "u";
      case CType::Kind::Long:
        if (v == std::numeric_limits<int64_t>::min()) return "(-9223372036854775807L - 1L)";
        if (v < 0) prec = kUnary;
        return std::to_string(v) + "L";
      case CType::Kind::ULong:
        return std::to_string(static_cast<uint64_t>(v)) + "uL";
      case CType::Kind::Char:
        prec = 14;
        return "(char)" + std::to_string(v);
      default:
        prec = 14;
        return "(" + declText(t, "", records_) + ")" + std::to_string(v) + "L";
    }
  }

  std::string args(const Expr& e, size_t from) {
    std::string s = "(";
    for (size_t i = from; i < e.kids.size(); ++i) {
      if (i > from) s += ", ";
      s += sub(*e.kids[i], kAssign);
    }
    return s + ")";
  }

  std::string text(const Expr& e, int& prec) {
    switch (e.kind) {
      case ExprKind::IntConst:
      case ExprKind::FloatConst:
        return constant(e, prec);
      case ExprKind::Var:
      case ExprKind::FuncRef:
        prec = kPostfix;
        return e.name;
      case ExprKind::Unary: {
        prec = kUnary;
        std::string op = unOpSpelling(e.unOp);
        std::string k = sub(*e.kids[0], 14);
        if (!k.empty() && (k[0] == '-' || k[0] == '+' || k[0] == op[0])) op += " ";
        return op + k;
      }
      case ExprKind::Binary: {
        const int p = binaryPrec(e.binOp);
        prec = p;
        return sub(*e.kids[0], p) + " " + binOpSpelling(e.binOp) + " " + sub(*e.kids[1], p + 1);
      }
      case ExprKind::Assign:
        prec = kAssign;
        return sub(*e.kids[0], kUnary) + " = " + sub(*e.kids[1], kAssign);
      case ExprKind::CompoundAssign:
        prec = kAssign;
        return sub(*e.kids[0], kUnary) + " " + binOpSpelling(e.binOp) + "= " + sub(*e.kids[1], kAssign);
      case ExprKind::IncDec: {
        const char* op = e.isInc ? "++" : "--";
        if (e.isPrefix) {
          prec = kUnary;
          return op + sub(*e.kids[0], kUnary);
        }
        prec = kPostfix;
        return sub(*e.kids[0], kPostfix) + op;
      }
      case ExprKind::AddrOf:
        prec = kUnary;
        return "&" + sub(*e.kids[0], 14);
      case ExprKind::Deref:
        prec = kUnary;
        return "*" + sub(*e.kids[0], 14);
      case ExprKind::Index:
        prec = kPostfix;
        return sub(*e.kids[0], kPostfix) + "[" + expr(*e.kids[1]) + "]";
      case ExprKind::Member: {
        prec = kPostfix;
        const Expr& base = *e.kids[0];
        if (base.kind == ExprKind::Deref) return sub(*base.kids[0], kPostfix) + "->" + e.name;
        return sub(base, kPostfix) + "." + e.name;
      }
      case ExprKind::Cast:
        if (e.implicit) return text(*e.kids[0], prec);
        prec = 14;
        return "(" + declText(e.type, "", records_) + ")" + sub(*e.kids[0], 14);
      case ExprKind::Call:
        prec = kPostfix;
        return e.name + args(e, 0);
      case ExprKind::IndCall:
        prec = kPostfix;
        return sub(*e.kids[0], kPostfix) + args(e, 1);
      case ExprKind::Ternary:
        prec = kTernary;
        return sub(*e.kids[0], 4) + " ? " + expr(*e.kids[1]) + " : " + sub(*e.kids[2], kTernary);
      case ExprKind::Decay:
        return text(*e.kids[0], prec);
      case ExprKind::InitList: {
        prec = kPostfix;
        std::string s = "{";
        for (size_t i = 0; i < e.kids.size(); ++i) {
          if (i) s += ", ";
          s += sub(*e.kids[i], kAssign);
        }
        return s + "}";
      }
    }
    return "?";
  }

  static std::string indent(int depth) { return std::string(2 * depth, ' '); }

  std::string decl(const Stmt& s) {
    std::string t = declText(s.declType, s.name, records_);
    if (s.expr) t += " = " + sub(*s.expr, kAssign);
    return t;
  }

  // Several declarators sharing one base type, as in "int i = 0, *p = 0".
  std::string declGroup(const StmtList& list) {
    std::string out;
    const CType& base = innermost(list[0]->declType);
    const std::string prefix = declText(base, "", records_) + " ";
    for (size_t i = 0; i < list.size(); ++i) {
      std::string d = decl(*list[i]);
      if (i) {
        out += ", ";
        if (d.rfind(prefix, 0) == 0) d = d.substr(prefix.size());
      }
      out += d;
    }
    return out;
  }

  void braced(std::ostream& os, const StmtList& body, int depth) {
    os << "{\n";
    block(os, body, depth + 1);
    os << indent(depth) << "}";
  }

  void stmt(std::ostream& os, const Stmt& s, int depth) {
    const std::string in = indent(depth);
    switch (s.kind) {
      case StmtKind::Expr:
        os << in << expr(*s.expr) << ";\n";
        return;
      case StmtKind::Decl:
        os << in << decl(s) << ";\n";
        return;
      case StmtKind::If:
        os << in << "if (" << expr(*s.expr) << ") ";
        braced(os, s.body, depth);
        if (!s.alt.empty()) {
          os << " else ";
          braced(os, s.alt, depth);
        }
        os << "\n";
        return;
      case StmtKind::While:
        if (!s.pre.empty()) {
          os << in << "for (;;) {\n";
          block(os, s.pre, depth + 1);
          os << indent(depth + 1) << "if (!(" << expr(*s.expr) << ")) break;\n";
          block(os, s.body, depth + 1);
          os << in << "}\n";
          return;
        }
        os << in << "while (" << expr(*s.expr) << ") ";
        braced(os, s.body, depth);
        os << "\n";
        return;
      case StmtKind::DoWhile:
        os << in << "do ";
        if (s.pre.empty()) {
          braced(os, s.body, depth);
        } else {
          os << "{\n";
          block(os, s.body, depth + 1);
          block(os, s.pre, depth + 1);
          os << in << "}";
        }
        os << " while (" << expr(*s.expr) << ");\n";
        return;
      case StmtKind::For: {
        os << in << "for (";
        if (!s.init.empty()) {
          if (s.init[0]->kind == StmtKind::Decl) os << declGroup(s.init);
          else os << expr(*s.init[0]->expr);
        }
        os << ";";
        if (s.expr && s.pre.empty()) os << " " << expr(*s.expr);
        os << ";";
        for (size_t i = 0; i < s.step.size(); ++i) os << (i ? ", " : " ") << expr(*s.step[i]->expr);
        os << ") {\n";
        if (!s.pre.empty()) {
          block(os, s.pre, depth + 1);
          os << indent(depth + 1) << "if (!(" << expr(*s.expr) << ")) break;\n";
        }
        block(os, s.body, depth + 1);
        os << in << "}\n";
        return;
      }
      case StmtKind::Switch:
        os << in << "switch (" << expr(*s.expr) << ") {\n";
        for (const auto& c : s.cases) {
          if (c.isDefault) {
            os << indent(depth + 1) << "default:\n";
          } else {
            auto k = Expr::intConst(c.value, s.expr->type);
            os << indent(depth + 1) << "case " << expr(*k) << ":\n";
          }
          block(os, c.body, depth + 2);
        }
        os << in << "}\n";
        return;
      case StmtKind::Break:
        os << in << "break;\n";
        return;
      case StmtKind::Continue:
        os << in << "continue;\n";
        return;
      case StmtKind::Return:
        if (s.expr) os << in << "return " << expr(*s.expr) << ";\n";
        else os << in << "return;\n";
        return;
      case StmtKind::Block:
        os << in;
        braced(os, s.body, depth);
        os << "\n";
        return;
    }
  }

  const RecordTable& records_;
};

void dumpType(std::ostream& os, const CType& t) { os << '<' << t.str() << '>'; }

void dumpExpr(std::ostream& os, const Expr& e);

void dumpKids(std::ostream& os, const Expr& e) {
  for (const auto& k : e.kids) {
    os << ' ';
    dumpExpr(os, *k);
  }
}

void dumpExpr(std::ostream& os, const Expr& e) {
  os << '(';
  switch (e.kind) {
    case ExprKind::IntConst: os << "int " << e.ival; break;
    case ExprKind::FloatConst: os << "flt " << formatDouble(e.fval); break;
    case ExprKind::Var: os << (e.scope == VarScope::Global ? "gvar " : "var ") << e.name; break;
    case ExprKind::FuncRef: os << "func " << e.name; break;
    case ExprKind::Unary: os << "un " << unOpSpelling(e.unOp); break;
    case ExprKind::Binary: os << "bin " << binOpSpelling(e.binOp); break;
    case ExprKind::Assign: os << "set"; break;
    case ExprKind::CompoundAssign: os << "cset " << binOpSpelling(e.binOp) << ' '; dumpType(os, e.opType); break;
    case ExprKind::IncDec: os << (e.isPrefix ? "pre" : "post") << (e.isInc ? "++" : "--"); break;
    case ExprKind::AddrOf: os << "addr"; break;
    case ExprKind::Deref: os << "deref"; break;
    case ExprKind::Index: os << "index"; break;
    case ExprKind::Member: os << "member " << e.name; break;
    case ExprKind::Cast: os << (e.implicit ? "icast" : "cast"); break;
    case ExprKind::Call: os << "call " << e.name; break;
    case ExprKind::IndCall: os << "icall"; break;
    case ExprKind::Ternary: os << "cond"; break;
    case ExprKind::Decay: os << "decay"; break;
    case ExprKind::InitList: os << "init"; break;
  }
  os << ' ';
  dumpType(os, e.type);
  dumpKids(os, e);
  os << ')';
}

void dumpStmts(std::ostream& os, const char* tag, const StmtList& list, int depth);

void dumpStmt(std::ostream& os, const Stmt& s, int depth) {
  const std::string in(2 * depth, ' ');
  auto optExpr = [&] {
    if (s.expr) {
      os << ' ';
      dumpExpr(os, *s.expr);
    }
  };
  switch (s.kind) {
    case StmtKind::Expr: os << in << "(expr"; optExpr(); os << ")\n"; return;
    case StmtKind::Decl:
      os << in << "(decl " << s.name << ' ';
      dumpType(os, s.declType);
      optExpr();
      os << ")\n";
      return;
    case StmtKind::Break: os << in << "(break)\n"; return;
    case StmtKind::Continue: os << in << "(continue)\n"; return;
    case StmtKind::Return: os << in << "(return"; optExpr(); os << ")\n"; return;
    default: break;
  }
  static const char* names[] = {"expr", "decl", "if", "while", "do", "for", "switch", "break", "continue", "return", "block"};
  os << in << '(' << names[static_cast<int>(s.kind)];
  optExpr();
  os << '\n';
  dumpStmts(os, "init", s.init, depth + 1);
  dumpStmts(os, "pre", s.pre, depth + 1);
  dumpStmts(os, "body", s.body, depth + 1);
  dumpStmts(os, "step", s.step, depth + 1);
  dumpStmts(os, "else", s.alt, depth + 1);
  for (const auto& c : s.cases) {
    os << in << "  (case " << (c.isDefault ? std::string("default") : std::to_string(c.value)) << '\n';
    dumpStmts(os, "body", c.body, depth + 2);
    os << in << "  )\n";
  }
  os << in << ")\n";
}

void dumpStmts(std::ostream& os, const char* tag, const StmtList& list, int depth) {
  if (list.empty()) return;
  const std::string in(2 * depth, ' ');
  os << in << '[' << tag << '\n';
  for (const auto& s : list) dumpStmt(os, *s, depth + 1);
  os << in << "]\n";
}

}  // namespace

std::string declText(const CType& t, const std::string& name, const RecordTable& records) {
  std::string s = t.declare(name);
  const CType& base = innermost(t);
  if (base.isRecord()) {
    const RecordInfo* r = records.find(base.tag);
    if (r && r->isUnion && s.rfind("struct ", 0) == 0) s = "union " + s.substr(7);
  }
  // Parameters inside function types also carry record names.
  if (s.find("struct ") != std::string::npos) {
    for (const auto& [tag, info] : records.all()) {
      if (!info.isUnion) continue;
      const std::string from = "struct " + tag;
      for (size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + 1)) {
        const size_t end = p + from.size();
        if (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_')) continue;
        s.replace(p, 6, "union");
      }
    }
  }
  return s;
}

std::string printExpr(const Expr& e, const RecordTable& records) { return CPrinter(records).expr(e); }

std::string printFunction(const FuncDef& f, const RecordTable& records) {
  std::ostringstream os;
  CPrinter(records).function(os, f);
  return os.str();
}

std::string printC(const TranslationUnit& tu) {
  std::ostringstream os;
  CPrinter pr(tu.records);
  const auto& recs = tu.records.all();
  for (const auto& [tag, info] : recs) os << (info.isUnion ? "union " : "struct ") << tag << ";\n";
  // Definitions in dependency order: a record embedding another by value
  // needs the inner one complete first.
  std::set<std::string> done;
  std::function<void(const std::string&)> define = [&](const std::string& tag) {
    if (!done.insert(tag).second) return;
    const RecordInfo& r = recs.at(tag);
    if (!r.complete) return;
    for (const auto& f : r.fields) {
      const CType* t = &f.type;
      while (t->isArray()) t = t->elem.get();
      if (t->isRecord()) define(t->tag);
    }
    os << (r.isUnion ? "union " : "struct ") << tag << " {\n";
    for (const auto& f : r.fields) os << "  " << declText(f.type, f.name, tu.records) << ";\n";
    os << "};\n";
  };
  for (const auto& [tag, info] : recs) define(tag);
  for (const auto& f : tu.functions) {
    std::string head = f.name + "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i) head += ", ";
      head += declText(f.params[i].type, f.params[i].name, tu.records);
    }
    if (f.params.empty()) head += "void";
    os << declText(f.retType, head + ")", tu.records) << ";\n";
  }
  for (const auto& g : tu.globals) {
    os << declText(g.type, g.name, tu.records);
    if (g.init) os << " = " << pr.sub(*g.init, kAssign);
    os << ";\n";
  }
  for (const auto& f : tu.functions) {
    os << "\n";
    pr.function(os, f);
  }
  return os.str();
}

std::string dumpFunction(const FuncDef& f) {
  std::ostringstream os;
  os << "(function " << f.name << ' ';
  dumpType(os, f.type());
  if (!f.helperOf.empty()) os << " helper-of " << f.helperOf;
  os << '\n';
  for (const auto& p : f.params) {
    os << "  (param " << p.name << ' ';
    dumpType(os, p.type);
    os << ")\n";
  }
  for (const auto& l : f.locals) {
    os << "  (local " << l.name << ' ';
    dumpType(os, l.type);
    os << ")\n";
  }
  dumpStmts(os, "body", f.body, 1);
  os << ")\n";
  return os.str();
}

std::string dumpAst(const TranslationUnit& tu) {
  std::ostringstream os;
  for (const auto& [tag, r] : tu.records.all()) {
    os << "(record " << tag << (r.isUnion ? " union" : " struct") << " size " << r.size << " align " << r.align;
    for (const auto& f : r.fields) {
      os << " (" << f.name << ' ';
      dumpType(os, f.type);
      os << " @" << f.offset << ')';
    }
    os << ")\n";
  }
  for (const auto& g : tu.globals) {
    os << "(global " << g.name << ' ';
    dumpType(os, g.type);
    if (g.init) {
      os << ' ';
      dumpExpr(os, *g.init);
    }
    os << ")\n";
  }
  for (const auto& f : tu.functions) os << dumpFunction(f);
  os << "(functable";
  for (const auto& n : tu.funcTable) os << ' ' << n;
  os << ")\n";
  return os.str();
}

}  // namespace c2pl
