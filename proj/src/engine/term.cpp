#include "c2pl/engine/term.hpp"

#include <algorithm>
#include <cstring>

namespace c2pl {

std::string int128ToString(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(0) - static_cast<unsigned __int128>(v)
                            : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

TermPtr Term::atom(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Atom;
  t->name = std::move(name);
  return t;
}

TermPtr Term::integer(Int128 v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Int;
  t->ival = v;
  return t;
}

TermPtr Term::hexInteger(Int128 v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Int;
  t->ival = v;
  t->hex = v >= 0;
  return t;
}

TermPtr Term::flt(double v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Float;
  t->fval = v;
  return t;
}

TermPtr Term::var(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Var;
  t->name = std::move(name);
  return t;
}

TermPtr Term::make(std::string functor, std::vector<TermPtr> args) {
  if (args.empty()) return atom(std::move(functor));
  auto t = std::make_shared<Term>();
  t->kind = Kind::Struct;
  t->name = std::move(functor);
  t->args = std::move(args);
  return t;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::Atom:
    case Term::Kind::Var:
      return a.name == b.name;
    case Term::Kind::Int:
      return a.ival == b.ival;
    case Term::Kind::Float:
      return std::memcmp(&a.fval, &b.fval, sizeof a.fval) == 0;
    case Term::Kind::Struct:
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (size_t i = 0; i < a.args.size(); ++i)
        if (!(*a.args[i] == *b.args[i])) return false;
      return true;
  }
  return false;
}

bool sameTerm(const TermPtr& a, const TermPtr& b) { return *a == *b; }

bool operator==(const Clause& a, const Clause& b) { return *a.head == *b.head && *a.body == *b.body; }

bool operator==(const Program& a, const Program& b) { return a.clauses == b.clauses; }

}  // namespace c2pl
