#include <cctype>

#include "c2pl/error.hpp"
#include "c2pl/translate/translate.hpp"

namespace c2pl {

namespace {

const std::set<std::string>& reservedPredicates() {
  static const std::set<std::string> r = {"true", "fail", "false", "call", "is", "not", "halt",
                                          "rdPtrInt", "wrPtrInt", "rdPtrFloat", "wrPtrFloat"};
  return r;
}

// ret__2 -> Ret2, pa_s -> Pa_s
std::string pretty(const std::string& c) {
  std::string out;
  size_t i = 0;
  while (i <= c.size()) {
    size_t j = c.find("__", i);
    if (j == std::string::npos) j = c.size();
    std::string piece = c.substr(i, j - i);
    if (!piece.empty()) piece[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(piece[0])));
    out += piece;
    i = j + 2;
  }
  if (out.empty() || out[0] == '_' || std::isdigit(static_cast<unsigned char>(out[0]))) out = "V" + out;
  return out;
}

}  // namespace

std::string predicateName(const std::string& cName) {
  return reservedPredicates().count(cName) ? "p__" + cName : cName;
}

std::string foreignName(const std::string& cName) { return "c:" + cName; }

NameMap::NameMap(const FuncDef& f) {
  used_.insert("R");
  for (const auto& p : f.params) bind(p.name);
  for (const auto& l : f.locals) bind(l.name);
}

void NameMap::bind(const std::string& cName) {
  if (map_.count(cName)) return;
  const std::string base = pretty(cName);
  std::string n = base;
  for (int k = 1; used_.count(n); ++k) n = base + "_" + std::to_string(k);
  used_.insert(n);
  map_[cName] = n;
}

const std::string& NameMap::var(const std::string& cName) const {
  auto it = map_.find(cName);
  if (it == map_.end()) fail(ErrorCode::Untranslatable, "no Prolog variable for '" + cName + "'");
  return it->second;
}

std::string NameMap::fresh(const std::string& stem) {
  int& k = counters_[stem];
  for (;;) {
    std::string n = stem + "_" + std::to_string(++k);
    if (used_.insert(n).second) return n;
  }
}

}  // namespace c2pl
