#pragma once

#include <random>
#include <string>

#include "c2pl/engine/term.hpp"

namespace c2pl::test_terms {

inline TermPtr randomTerm(std::mt19937_64& rng, int depth) {
  static const char* atoms[] = {"a", "b", "foo", "[]", "'hello world'", "+", "is"};
  static const char* vars[] = {"X", "Y", "Z", "W"};
  static const char* functors[] = {"f", "g", "+", "-", "*", ",", ";", "->", "=", "is", "\\+", "h"};
  switch (rng() % (depth > 0 ? 6 : 4)) {
    case 0: {
      std::string a = atoms[rng() % 7];
      if (a.front() == '\'') a = a.substr(1, a.size() - 2);
      return Term::atom(a);
    }
    case 1:
      return Term::integer(static_cast<int64_t>(rng() % 2001) - 1000);
    case 2:
      return Term::flt(static_cast<double>(static_cast<int64_t>(rng() % 20001) - 10000) / 8.0);
    case 3:
      return Term::var(vars[rng() % 4]);
    default: {
      std::string f = functors[rng() % 12];
      size_t n = (f == "\\+") ? 1 : (f == "f" || f == "h") ? 1 + rng() % 3 : (f == "-" && rng() % 3 == 0) ? 1 : 2;
      std::vector<TermPtr> args;
      for (size_t i = 0; i < n; ++i) args.push_back(randomTerm(rng, depth - 1));
      return Term::make(f, std::move(args));
    }
  }
}

// Renames every variable apart so independently built terms share none.
inline TermPtr renameVars(const TermPtr& t, const std::string& suffix) {
  if (t->kind == Term::Kind::Var) return Term::var(t->name + suffix);
  if (t->kind != Term::Kind::Struct) return t;
  std::vector<TermPtr> args;
  for (const auto& a : t->args) args.push_back(renameVars(a, suffix));
  return Term::make(t->name, std::move(args));
}

// Replaces engine-generated variable names (_G<n>) by "_".
inline std::string anonymized(const std::string& s) {
  std::string out;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s.compare(k, 2, "_G") == 0) {
      out += "_";
      k += 2;
      while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
      --k;
    } else {
      out += s[k];
    }
  }
  return out;
}

}  // namespace c2pl::test_terms
