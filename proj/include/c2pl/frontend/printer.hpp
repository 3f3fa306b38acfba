#pragma once

#include <string>

#include "c2pl/frontend/ast.hpp"

namespace c2pl {

/// C source text for a translation unit. Implicit casts are left out, so
/// printing a parsed unit and parsing the text again gives the same tree.
/// Normalized units print as well, though names produced by the passes may
/// not be valid input for parse().
std::string printC(const TranslationUnit& tu);
std::string printFunction(const FuncDef& f, const RecordTable& records);
std::string printExpr(const Expr& e, const RecordTable& records);

/// Declaration text with the right struct/union keyword.
std::string declText(const CType& t, const std::string& name, const RecordTable& records);

/// Fully explicit S-expression dump (types, implicit casts, no positions),
/// used to compare trees structurally.
std::string dumpAst(const TranslationUnit& tu);
std::string dumpFunction(const FuncDef& f);

}  // namespace c2pl
