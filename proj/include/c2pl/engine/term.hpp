#pragma once

#include <memory>
#include <string>
#include <vector>

namespace c2pl {

using Int128 = __int128;

std::string int128ToString(Int128 v);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Prolog source-level term. The same shape is used for emitted programs
/// and for terms read back from the engine.
struct Term {
  enum class Kind { Atom, Int, Float, Var, Struct };

  Kind kind = Kind::Atom;
  std::string name;  // atom text, variable name or functor
  Int128 ival = 0;
  double fval = 0.0;
  std::vector<TermPtr> args;
  /// Display hint: write a non-negative integer as 0x... (ignored by equality).
  bool hex = false;

  static TermPtr atom(std::string name);
  static TermPtr integer(Int128 v);
  static TermPtr hexInteger(Int128 v);
  static TermPtr flt(double v);
  static TermPtr var(std::string name);
  static TermPtr make(std::string functor, std::vector<TermPtr> args);

  bool isAtom(const std::string& n) const { return kind == Kind::Atom && name == n; }
  bool isCompound(const std::string& f, size_t arity) const {
    return kind == Kind::Struct && name == f && args.size() == arity;
  }
  size_t arity() const { return args.size(); }
};

/// Structural equality; variables compare by name.
bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }
bool sameTerm(const TermPtr& a, const TermPtr& b);

struct Clause {
  TermPtr head;
  TermPtr body;  // the atom true for facts
};

struct Program {
  std::vector<Clause> clauses;
};

bool operator==(const Clause& a, const Clause& b);
bool operator==(const Program& a, const Program& b);

}  // namespace c2pl
