#pragma once

#include <cstdint>

#include "c2pl/frontend/ast.hpp"

namespace c2pl {

/// A scalar runtime value. Integers and pointers use `i` holding the
/// canonical 64-bit pattern for their type; floating values use `f`
/// (already rounded to binary32 for float).
struct CValue {
  int64_t i = 0;
  double f = 0.0;
};

/// Integer operation in type t (int, uint, long, ulong or pointer for
/// comparisons). Wraps in two's complement; shift counts are taken modulo the
/// width of t; INT_MIN / -1 wraps. Relational operators yield 0 or 1.
int64_t evalIntBinary(BinOp op, const CType& t, int64_t a, int64_t b);

/// Floating operation in type t; relational operators yield 0 or 1.
double evalFloatBinary(BinOp op, const CType& t, double a, double b);
int64_t evalFloatCompare(BinOp op, double a, double b);

int64_t evalIntUnary(UnOp op, const CType& t, int64_t a);

/// Conversion between scalar types as performed by casts and assignment.
CValue convertValue(const CType& from, const CType& to, CValue v);

double roundToFloat32(double v);

}  // namespace c2pl
