#pragma once

#include <string>
#include <string_view>

#include "c2pl/engine/term.hpp"

namespace c2pl {

enum class OpType { XFX, XFY, YFX, FY, FX };

struct OpDef {
  int prec = 0;
  OpType type = OpType::XFX;
};

/// The standard operator table (ISO plus xor, rem, mod, <<, >>).
const OpDef* infixOp(const std::string& name);
const OpDef* prefixOp(const std::string& name);

/// Reads clauses terminated by '.'. Comments, quoted atoms, 0x/0'c/R#d
/// numbers and negative literals are accepted. Throws E_SYNTAX with
/// line:col.
Program readProgram(std::string_view text);
/// Reads one term; a trailing '.' is optional.
TermPtr readTerm(std::string_view text);

/// Text that reads back as the same term under the standard operators.
std::string writeTerm(const Term& t);
std::string writeClause(const Clause& c);
/// Atom text with quotes when needed.
std::string quoteAtom(const std::string& name);

}  // namespace c2pl
