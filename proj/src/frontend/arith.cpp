#include "c2pl/frontend/arith.hpp"

#include <cmath>
#include <limits>

#include "c2pl/error.hpp"

namespace c2pl {

namespace {

bool unsignedCompare(const CType& t) {
  return t.kind == CType::Kind::UInt || t.kind == CType::Kind::ULong || t.isPointer();
}

int64_t relational(BinOp op, bool lt, bool eq) {
  switch (op) {
    case BinOp::Lt: return lt;
    case BinOp::Gt: return !lt && !eq;
    case BinOp::Le: return lt || eq;
    case BinOp::Ge: return !lt;
    case BinOp::Eq: return eq;
    case BinOp::Ne: return !eq;
    default: return 0;
  }
}

}  // namespace

double roundToFloat32(double v) { return static_cast<double>(static_cast<float>(v)); }

int64_t evalIntBinary(BinOp op, const CType& t, int64_t a, int64_t b) {
  const auto ua = static_cast<uint64_t>(a);
  const auto ub = static_cast<uint64_t>(b);
  const bool isSigned = t.isSigned();
  const int bits = integerBits(t);
  switch (op) {
    case BinOp::Add: return canonicalInt(t, static_cast<int64_t>(ua + ub));
    case BinOp::Sub: return canonicalInt(t, static_cast<int64_t>(ua - ub));
    case BinOp::Mul: return canonicalInt(t, static_cast<int64_t>(ua * ub));
    case BinOp::Div:
    case BinOp::Rem: {
      if (b == 0) fail(ErrorCode::Div0, "integer division by zero");
      if (isSigned) {
        const int64_t minv = bits == 32 ? std::numeric_limits<int32_t>::min()
                                        : std::numeric_limits<int64_t>::min();
        if (a == minv && b == -1) return op == BinOp::Div ? canonicalInt(t, a) : 0;
        return canonicalInt(t, op == BinOp::Div ? a / b : a % b);
      }
      return canonicalInt(t, static_cast<int64_t>(op == BinOp::Div ? ua / ub : ua % ub));
    }
    case BinOp::Shl: {
      const unsigned cnt = static_cast<unsigned>(ub & static_cast<uint64_t>(bits - 1));
      return canonicalInt(t, static_cast<int64_t>(ua << cnt));
    }
    case BinOp::Shr: {
      const unsigned cnt = static_cast<unsigned>(ub & static_cast<uint64_t>(bits - 1));
      if (isSigned) return canonicalInt(t, a >> cnt);
      return canonicalInt(t, static_cast<int64_t>(ua >> cnt));
    }
    case BinOp::BitAnd: return canonicalInt(t, a & b);
    case BinOp::BitOr: return canonicalInt(t, a | b);
    case BinOp::BitXor: return canonicalInt(t, a ^ b);
    case BinOp::Lt:
    case BinOp::Gt:
    case BinOp::Le:
    case BinOp::Ge:
    case BinOp::Eq:
    case BinOp::Ne:
      if (unsignedCompare(t)) return relational(op, ua < ub, ua == ub);
      return relational(op, a < b, a == b);
    case BinOp::LogAnd: return (a != 0) && (b != 0);
    case BinOp::LogOr: return (a != 0) || (b != 0);
  }
  return 0;
}

double evalFloatBinary(BinOp op, const CType& t, double a, double b) {
  double r = 0.0;
  switch (op) {
    case BinOp::Add: r = a + b; break;
    case BinOp::Sub: r = a - b; break;
    case BinOp::Mul: r = a * b; break;
    case BinOp::Div: r = a / b; break;
    default: fail(ErrorCode::Type, "invalid floating-point operator");
  }
  return t.kind == CType::Kind::Float ? roundToFloat32(r) : r;
}

int64_t evalFloatCompare(BinOp op, double a, double b) {
  switch (op) {
    case BinOp::Lt: return a < b;
    case BinOp::Gt: return a > b;
    case BinOp::Le: return a <= b;
    case BinOp::Ge: return a >= b;
    case BinOp::Eq: return a == b;
    case BinOp::Ne: return a != b;
    default: fail(ErrorCode::Type, "invalid floating-point comparison");
  }
}

int64_t evalIntUnary(UnOp op, const CType& t, int64_t a) {
  switch (op) {
    case UnOp::Neg: return canonicalInt(t, static_cast<int64_t>(0 - static_cast<uint64_t>(a)));
    case UnOp::BitNot: return canonicalInt(t, ~a);
    case UnOp::LogNot: return a == 0;
  }
  return 0;
}

CValue convertValue(const CType& from, const CType& to, CValue v) {
  CValue r;
  if (to.isFloating()) {
    if (from.isFloating()) {
      r.f = to.kind == CType::Kind::Float ? roundToFloat32(v.f) : v.f;
    } else if (from.kind == CType::Kind::ULong || from.isPointer()) {
      const auto u = static_cast<uint64_t>(v.i);
      r.f = to.kind == CType::Kind::Float ? static_cast<double>(static_cast<float>(u))
                                          : static_cast<double>(u);
    } else {
      r.f = to.kind == CType::Kind::Float ? static_cast<double>(static_cast<float>(v.i))
                                          : static_cast<double>(v.i);
    }
    return r;
  }
  if (from.isFloating()) {
    const double t = std::trunc(v.f);
    int64_t bits;
    if (to.kind == CType::Kind::ULong) {
      bits = (t >= 0.0 && t < 18446744073709551616.0) ? static_cast<int64_t>(static_cast<uint64_t>(t)) : 0;
    } else if (t >= -9223372036854775808.0 && t < 9223372036854775808.0) {
      bits = static_cast<int64_t>(t);
    } else {
      bits = std::numeric_limits<int64_t>::min();
    }
    r.i = canonicalInt(to, bits);
    return r;
  }
  r.i = canonicalInt(to, v.i);
  return r;
}

}  // namespace c2pl
