#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace c2pl {

/// A C type in the accepted subset. Pointer, array and function types own
/// their component types through shared immutable nodes, so copies are cheap.
struct CType {
  enum class Kind {
    Void,
    Char,
    Int,
    UInt,
    Long,
    ULong,
    Float,
    Double,
    Pointer,
    Array,
    Record,
    Func,
  };

  Kind kind = Kind::Int;
  std::shared_ptr<const CType> elem;  // pointee, array element, or return type
  int64_t count = 0;                  // array length
  std::string tag;                    // record tag
  std::vector<CType> params;          // function parameters

  static CType scalar(Kind k) {
    CType t;
    t.kind = k;
    return t;
  }
  static CType voidType() { return scalar(Kind::Void); }
  static CType charType() { return scalar(Kind::Char); }
  static CType intType() { return scalar(Kind::Int); }
  static CType uintType() { return scalar(Kind::UInt); }
  static CType longType() { return scalar(Kind::Long); }
  static CType ulongType() { return scalar(Kind::ULong); }
  static CType floatType() { return scalar(Kind::Float); }
  static CType doubleType() { return scalar(Kind::Double); }
  static CType pointerTo(const CType& t);
  static CType arrayOf(const CType& t, int64_t n);
  static CType record(const std::string& tag);
  static CType function(const CType& ret, std::vector<CType> params);

  bool isVoid() const { return kind == Kind::Void; }
  bool isInteger() const {
    return kind == Kind::Char || kind == Kind::Int || kind == Kind::UInt ||
           kind == Kind::Long || kind == Kind::ULong;
  }
  bool isFloating() const { return kind == Kind::Float || kind == Kind::Double; }
  bool isArithmetic() const { return isInteger() || isFloating(); }
  bool isPointer() const { return kind == Kind::Pointer; }
  bool isScalar() const { return isArithmetic() || isPointer(); }
  bool isArray() const { return kind == Kind::Array; }
  bool isRecord() const { return kind == Kind::Record; }
  bool isFunc() const { return kind == Kind::Func; }
  bool isSigned() const {
    return kind == Kind::Char || kind == Kind::Int || kind == Kind::Long;
  }
  /// Memory-resident aggregates: never held in a scalar variable.
  bool isAggregate() const { return isArray() || isRecord(); }

  const CType& pointee() const { return *elem; }

  bool operator==(const CType& o) const;
  bool operator!=(const CType& o) const { return !(*this == o); }

  std::string str() const;
  /// Declaration text, e.g. declare("x") on int[3] yields "int x[3]".
  std::string declare(const std::string& name) const;
};

struct FieldInfo {
  std::string name;
  CType type;
  int64_t offset = 0;
};

struct RecordInfo {
  std::string tag;
  bool isUnion = false;
  bool complete = false;
  std::vector<FieldInfo> fields;
  int64_t size = 0;
  int64_t align = 1;
};

struct Layout {
  int64_t size = 0;
  int64_t align = 1;
  bool operator==(const Layout&) const = default;
};

/// Record declarations of a translation unit plus the fixed ABI:
/// little-endian, char=1, int=4, long=8, pointer=8, float=4, double=8,
/// alignment equal to size, records aligned to their widest field.
class RecordTable {
 public:
  RecordInfo& declare(const std::string& tag, bool isUnion);
  /// Lays the fields out sequentially (or all at zero for unions).
  void define(const std::string& tag, std::vector<FieldInfo> fields);

  const RecordInfo* find(const std::string& tag) const;
  const RecordInfo& get(const std::string& tag) const;
  const std::map<std::string, RecordInfo>& all() const { return records_; }

  Layout layout(const CType& t) const;
  int64_t sizeOf(const CType& t) const { return layout(t).size; }
  int64_t fieldOffset(const std::string& tag, const std::string& field) const;
  const FieldInfo& field(const std::string& tag, const std::string& field) const;

 private:
  std::map<std::string, RecordInfo> records_;
};

/// Bit width used for integer masking: 8, 32 or 64. Pointers count as 64.
int integerBits(const CType& t);

}  // namespace c2pl
