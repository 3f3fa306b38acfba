#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "c2pl/frontend/ast.hpp"

namespace c2pl {

enum class TokKind { Ident, Keyword, IntLit, FloatLit, CharLit, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  SrcPos pos;
  // Literal payload.
  uint64_t intValue = 0;
  bool isUnsigned = false;
  bool isLong = false;
  double floatValue = 0.0;
  bool isFloat32 = false;
};

/// Splits C-subset source into tokens. Comments are skipped; preprocessor
/// lines and string literals are rejected.
std::vector<Token> tokenize(std::string_view source);

}  // namespace c2pl
