#include "c2pl/frontend/ctype.hpp"

#include <algorithm>

#include "c2pl/error.hpp"

namespace c2pl {

CType CType::pointerTo(const CType& t) {
  CType r;
  r.kind = Kind::Pointer;
  r.elem = std::make_shared<const CType>(t);
  return r;
}

CType CType::arrayOf(const CType& t, int64_t n) {
  CType r;
  r.kind = Kind::Array;
  r.elem = std::make_shared<const CType>(t);
  r.count = n;
  return r;
}

CType CType::record(const std::string& tag) {
  CType r;
  r.kind = Kind::Record;
  r.tag = tag;
  return r;
}

CType CType::function(const CType& ret, std::vector<CType> params) {
  CType r;
  r.kind = Kind::Func;
  r.elem = std::make_shared<const CType>(ret);
  r.params = std::move(params);
  return r;
}

bool CType::operator==(const CType& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Pointer:
      return *elem == *o.elem;
    case Kind::Array:
      return count == o.count && *elem == *o.elem;
    case Kind::Record:
      return tag == o.tag;
    case Kind::Func:
      return *elem == *o.elem && params == o.params;
    default:
      return true;
  }
}

namespace {

std::string baseName(const CType& t) {
  switch (t.kind) {
    case CType::Kind::Void: return "void";
    case CType::Kind::Char: return "char";
    case CType::Kind::Int: return "int";
    case CType::Kind::UInt: return "unsigned int";
    case CType::Kind::Long: return "long";
    case CType::Kind::ULong: return "unsigned long";
    case CType::Kind::Float: return "float";
    case CType::Kind::Double: return "double";
    case CType::Kind::Record: return "struct " + t.tag;
    default: return "?";
  }
}

}  // namespace

std::string CType::declare(const std::string& name) const {
  // Build the declarator inside-out, parenthesizing pointers that wrap
  // array or function suffixes.
  std::string decl = name;
  const CType* t = this;
  bool lastWasPointer = false;
  while (true) {
    if (t->kind == Kind::Pointer) {
      decl = "*" + decl;
      lastWasPointer = true;
      t = t->elem.get();
    } else if (t->kind == Kind::Array) {
      if (lastWasPointer) decl = "(" + decl + ")";
      decl += "[" + std::to_string(t->count) + "]";
      lastWasPointer = false;
      t = t->elem.get();
    } else if (t->kind == Kind::Func) {
      if (lastWasPointer) decl = "(" + decl + ")";
      std::string ps;
      for (size_t i = 0; i < t->params.size(); ++i) {
        if (i) ps += ", ";
        ps += t->params[i].str();
      }
      if (t->params.empty()) ps = "void";
      decl += "(" + ps + ")";
      lastWasPointer = false;
      t = t->elem.get();
    } else {
      break;
    }
  }
  std::string base = baseName(*t);
  if (decl.empty()) return base;
  return base + " " + decl;
}

std::string CType::str() const { return declare(""); }

RecordInfo& RecordTable::declare(const std::string& tag, bool isUnion) {
  auto [it, inserted] = records_.try_emplace(tag);
  if (inserted) {
    it->second.tag = tag;
    it->second.isUnion = isUnion;
  } else if (it->second.isUnion != isUnion) {
    fail(ErrorCode::Type, "'" + tag + "' redeclared as a different kind of record");
  }
  return it->second;
}

void RecordTable::define(const std::string& tag, std::vector<FieldInfo> fields) {
  RecordInfo& rec = records_.at(tag);
  if (rec.complete) fail(ErrorCode::Type, "redefinition of record '" + tag + "'");
  int64_t offset = 0;
  int64_t align = 1;
  int64_t size = 0;
  for (auto& f : fields) {
    Layout l = layout(f.type);
    align = std::max(align, l.align);
    if (rec.isUnion) {
      f.offset = 0;
      size = std::max(size, l.size);
    } else {
      offset = (offset + l.align - 1) / l.align * l.align;
      f.offset = offset;
      offset += l.size;
      size = offset;
    }
  }
  size = (size + align - 1) / align * align;
  rec.fields = std::move(fields);
  rec.size = size;
  rec.align = align;
  rec.complete = true;
}

const RecordInfo* RecordTable::find(const std::string& tag) const {
  auto it = records_.find(tag);
  return it == records_.end() ? nullptr : &it->second;
}

const RecordInfo& RecordTable::get(const std::string& tag) const {
  const RecordInfo* r = find(tag);
  if (!r) fail(ErrorCode::Incomplete, "unknown record '" + tag + "'");
  return *r;
}

Layout RecordTable::layout(const CType& t) const {
  using K = CType::Kind;
  switch (t.kind) {
    case K::Char: return {1, 1};
    case K::Int:
    case K::UInt:
    case K::Float: return {4, 4};
    case K::Long:
    case K::ULong:
    case K::Double:
    case K::Pointer: return {8, 8};
    case K::Array: {
      Layout e = layout(*t.elem);
      return {e.size * t.count, e.align};
    }
    case K::Record: {
      const RecordInfo& r = get(t.tag);
      if (!r.complete) fail(ErrorCode::Incomplete, "incomplete record '" + t.tag + "'");
      return {r.size, r.align};
    }
    case K::Void:
      fail(ErrorCode::Incomplete, "void has no size");
    case K::Func:
      fail(ErrorCode::Incomplete, "function type has no size");
  }
  fail(ErrorCode::Incomplete, "unknown type");
}

const FieldInfo& RecordTable::field(const std::string& tag, const std::string& name) const {
  const RecordInfo& r = get(tag);
  for (const auto& f : r.fields)
    if (f.name == name) return f;
  fail(ErrorCode::NoField, "record '" + tag + "' has no field '" + name + "'");
}

int64_t RecordTable::fieldOffset(const std::string& tag, const std::string& name) const {
  return field(tag, name).offset;
}

int integerBits(const CType& t) {
  switch (t.kind) {
    case CType::Kind::Char: return 8;
    case CType::Kind::Int:
    case CType::Kind::UInt: return 32;
    default: return 64;
  }
}

}  // namespace c2pl
