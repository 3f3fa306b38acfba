#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "c2pl/engine/term.hpp"
#include "c2pl/frontend/ast.hpp"
#include "c2pl/normalize/normalize.hpp"

namespace c2pl {

struct ObfuscationConfig {
  /// Percentage of eligible functions to translate.
  int level = 30;
  uint64_t seed = 42;
  /// When non-empty, exactly these functions are translated.
  std::vector<std::string> include;
  std::vector<std::string> exclude;
  /// Wrap every integer result to the width of its C type.
  bool maskIntegers = true;
};

/// Functions chosen for translation. main is never eligible. Deterministic
/// for a fixed seed; E_UNKNOWN_FUNC for names that are not user functions.
std::set<std::string> selectFunctions(const TranslationUnit& tu, const ObfuscationConfig& cfg);

/// C identifier to Prolog variable, one map per function. Injective: a
/// collision gets a numeric suffix. "R" is the return variable.
class NameMap {
 public:
  explicit NameMap(const FuncDef& f);
  const std::string& var(const std::string& cName) const;
  /// A new variable name distinct from every other name in the map.
  std::string fresh(const std::string& stem);
  const std::map<std::string, std::string>& entries() const { return map_; }

 private:
  void bind(const std::string& cName);
  std::map<std::string, std::string> map_;
  std::set<std::string> used_;
  std::map<std::string, int> counters_;
};

/// Prolog-side spelling of the C name.
std::string predicateName(const std::string& cName);
/// Name of the foreign predicate that calls the C function or builtin.
std::string foreignName(const std::string& cName);

struct ParamSpec {
  std::string name;
  enum class Kind { Value, Address } kind = Kind::Value;
  int64_t size = 0;
  int64_t align = 1;
};

struct SlotSpec {
  std::string name;
  int64_t size = 0;
  int64_t align = 1;
};

/// Calling convention of one predicate: pred(Params..., Slots..., R).
/// Address parameters and slots are stack blocks the caller allocates.
struct PredicateSpec {
  std::string cName;
  std::string predName;
  bool helper = false;
  std::vector<ParamSpec> params;
  std::vector<SlotSpec> slots;
  int64_t retSize = 0;

  size_t arity() const { return params.size() + slots.size() + 1; }
};

struct Manifest {
  std::vector<PredicateSpec> functions;
  // Selection settings, kept so a run can be replayed.
  int level = 0;
  uint64_t seed = 0;
  bool maskIntegers = true;
  bool conservativePta = false;
  std::vector<std::string> selected;
  std::string source;

  const PredicateSpec* find(const std::string& cName) const;
  std::string toJson() const;
  static Manifest fromJson(const std::string& text);
};

struct Translation {
  std::set<std::string> selected;  // user-visible functions picked
  std::set<std::string> translated;  // selected plus their loop helpers
  Program program;
  Manifest manifest;
};

PredicateSpec predicateSpec(const FuncDef& f, const FuncInfo& info, const TranslationUnit& tu);

/// One clause for one normalized function. E_UNTRANSLATABLE for statement
/// forms that normalization should have removed.
Clause translateFunction(const FuncDef& f, const NormalizedUnit& nu, const Manifest& m, const ObfuscationConfig& cfg);

Translation translateUnit(const NormalizedUnit& nu, const std::set<std::string>& selected, const ObfuscationConfig& cfg);

/// Program text with a header comment, one clause per paragraph.
std::string emitProlog(const Program& p);

/// Illustrative C glue: one wrapper per selected function that sets up
/// the Prolog arguments, runs the query and reads back R.
std::string emitWrappers(const TranslationUnit& tu, const Translation& t);

}  // namespace c2pl
