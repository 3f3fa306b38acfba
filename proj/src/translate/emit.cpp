#include <sstream>

#include "c2pl/engine/syntax.hpp"
#include "c2pl/frontend/printer.hpp"
#include "c2pl/translate/translate.hpp"

namespace c2pl {

namespace {

constexpr size_t kLineWidth = 80;

void goal(std::string& out, const Term& t, const std::string& ind) {
  if (t.isCompound(",", 2)) {
    goal(out, *t.args[0], ind);
    out += ",\n" + ind;
    goal(out, *t.args[1], ind);
    return;
  }
  if (t.isCompound(";", 2)) {
    const std::string inner = ind + "    ";
    out += "(   ";
    const Term& left = *t.args[0];
    if (left.isCompound("->", 2)) {
      goal(out, *left.args[0], inner);
      out += "\n" + ind + "->  ";
      goal(out, *left.args[1], inner);
    } else {
      goal(out, left, inner);
    }
    out += "\n" + ind + ";   ";
    goal(out, *t.args[1], inner);
    out += "\n" + ind + ")";
    return;
  }
  if (t.isCompound("->", 2)) {
    out += "(   ";
    goal(out, *t.args[0], ind + "    ");
    out += "\n" + ind + "->  ";
    goal(out, *t.args[1], ind + "    ");
    out += "\n" + ind + ")";
    return;
  }
  out += writeTerm(t);
}

void flatGoal(std::string& out, const Term& t) {
  if (t.isCompound(",", 2)) {
    flatGoal(out, *t.args[0]);
    out += ", ";
    flatGoal(out, *t.args[1]);
    return;
  }
  if (t.isCompound(";", 2)) {
    out += "(";
    const Term& left = *t.args[0];
    if (left.isCompound("->", 2)) {
      flatGoal(out, *left.args[0]);
      out += " -> ";
      flatGoal(out, *left.args[1]);
    } else {
      flatGoal(out, left);
    }
    out += " ; ";
    flatGoal(out, *t.args[1]);
    out += ")";
    return;
  }
  out += writeTerm(t);
}

std::string clauseText(const Clause& c) {
  const std::string head = writeTerm(*c.head);
  if (c.body->isAtom("true")) return head + ".";
  std::string flat = head + " :- ";
  flatGoal(flat, *c.body);
  if (flat.size() < kLineWidth) return flat + ".";
  std::string out = head + " :-\n    ";
  goal(out, *c.body, "    ");
  return out + ".";
}

const char* ctypeOfSize(int64_t size) {
  switch (size) {
    case 1: return "char";
    case 4: return "int";
    default: return "long";
  }
}

}  // namespace

std::string emitProlog(const Program& p) {
  std::string out = "% c2pl: " + std::to_string(p.clauses.size()) + " translated predicate(s)\n";
  for (const auto& c : p.clauses) out += "\n" + clauseText(c) + "\n";
  return out;
}

std::string emitWrappers(const TranslationUnit& tu, const Translation& t) {
  std::ostringstream o;
  o << "/* c2pl wrappers: the C side of each translated function */\n\n"
    << "typedef long pl_term;\n"
    << "extern long pl_mark(void);\n"
    << "extern void pl_release(long mark);\n"
    << "extern pl_term pl_int(long v);\n"
    << "extern pl_term pl_float(double v);\n"
    << "extern pl_term pl_var(void);\n"
    << "extern int pl_query(const char *pred, int arity, pl_term *args);\n"
    << "extern long pl_get_int(pl_term t);\n"
    << "extern double pl_get_float(pl_term t);\n";
  for (const auto& spec : t.manifest.functions) {
    if (spec.helper) continue;
    const FuncDef* f = tu.findFunction(spec.cName);
    if (!f) continue;
    o << "\n";
    std::string params;
    for (size_t i = 0; i < f->params.size(); ++i) {
      if (i) params += ", ";
      params += declText(f->params[i].type, f->params[i].name, tu.records);
    }
    const std::string ret = f->retType.isVoid() ? "void" : declText(f->retType, "", tu.records);
    o << ret << " " << spec.cName << "(" << (params.empty() ? "void" : params) << ") {\n";
    const size_t arity = spec.arity();
    o << "  pl_term a[" << arity << "];\n";
    for (size_t i = 0; i < spec.params.size(); ++i)
      if (spec.params[i].kind == ParamSpec::Kind::Address)
        o << "  " << declText(f->params[i].type, spec.params[i].name + "_slot", tu.records) << ";\n";
    for (const auto& s : spec.slots)
      o << "  " << ctypeOfSize(s.align) << " " << s.name << "_slot[" << (s.size + s.align - 1) / s.align << "];\n";
    o << "  long mark = pl_mark();\n";
    size_t k = 0;
    for (size_t i = 0; i < spec.params.size(); ++i, ++k) {
      const auto& p = spec.params[i];
      if (p.kind == ParamSpec::Kind::Address) {
        o << "  " << p.name << "_slot = " << p.name << ";\n";
        o << "  a[" << k << "] = pl_int((long)&" << p.name << "_slot);\n";
      } else if (f->params[i].type.isFloating()) {
        o << "  a[" << k << "] = pl_float(" << p.name << ");\n";
      } else {
        o << "  a[" << k << "] = pl_int((long)" << p.name << ");\n";
      }
    }
    for (const auto& s : spec.slots) o << "  a[" << k++ << "] = pl_int((long)" << s.name << "_slot);\n";
    o << "  a[" << k << "] = pl_var();\n";
    o << "  pl_query(\"" << spec.predName << "\", " << arity << ", a);\n";
    if (f->retType.isVoid()) {
      o << "  pl_release(mark);\n}\n";
    } else {
      o << "  " << ret << " r = (" << ret << ")"
        << (f->retType.isFloating() ? "pl_get_float" : "pl_get_int") << "(a[" << k << "]);\n";
      o << "  pl_release(mark);\n  return r;\n}\n";
    }
  }
  return o.str();
}

}  // namespace c2pl
