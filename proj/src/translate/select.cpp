#include <cmath>
#include <random>
#include <stdexcept>

#include "c2pl/error.hpp"
#include "c2pl/translate/translate.hpp"

namespace c2pl {

namespace {

void checkKnown(const TranslationUnit& tu, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    if (!tu.findFunction(n)) fail(ErrorCode::UnknownFunc, "no function named '" + n + "'");
    if (n == "main") fail(ErrorCode::UnknownFunc, "main cannot be translated");
  }
}

}  // namespace

std::set<std::string> selectFunctions(const TranslationUnit& tu, const ObfuscationConfig& cfg) {
  if (cfg.level < 0 || cfg.level > 100) throw std::invalid_argument("level must be between 0 and 100");
  checkKnown(tu, cfg.include);
  checkKnown(tu, cfg.exclude);
  if (!cfg.include.empty()) return {cfg.include.begin(), cfg.include.end()};

  const std::set<std::string> excluded(cfg.exclude.begin(), cfg.exclude.end());
  std::vector<std::string> eligible;
  for (const auto& f : tu.functions)
    if (f.name != "main" && f.helperOf.empty() && !excluded.count(f.name)) eligible.push_back(f.name);

  const size_t n = eligible.size();
  const auto count = static_cast<size_t>((static_cast<uint64_t>(cfg.level) * n + 99) / 100);
  std::mt19937_64 rng(cfg.seed);
  for (size_t i = n; i > 1; --i) std::swap(eligible[i - 1], eligible[rng() % i]);
  return {eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(count)};
}

}  // namespace c2pl
