#pragma once

#include <string_view>

#include "c2pl/frontend/ast.hpp"

namespace c2pl {

/// Parses and type-checks C-subset source. Locals are renamed so that every
/// local of a function has a distinct name; implicit conversions become
/// explicit Cast nodes (flagged implicit); constant subexpressions are folded.
///
/// Throws Error with E_SYNTAX, E_GOTO, E_UNSUPPORTED or E_TYPE; messages
/// start with "line:col".
TranslationUnit parse(std::string_view source);

}  // namespace c2pl
