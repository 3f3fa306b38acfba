#include "c2pl/normalize/normalize.hpp"
#include "util.hpp"

namespace c2pl {
namespace {

using namespace norm;

void sink(StmtList& list) {
  for (size_t i = 0; i < list.size(); ++i) {
    Stmt& s = *list[i];
    if (s.kind == StmtKind::Return) {
      list.resize(i + 1);
      return;
    }
    if (s.kind != StmtKind::If) continue;
    sink(s.body);
    sink(s.alt);
    const bool lastReturn = i + 2 == list.size() && list[i + 1]->kind == StmtKind::Return;
    if (i + 1 == list.size() || !(containsReturn(s.body) || containsReturn(s.alt) || lastReturn)) continue;
    StmtList rest;
    for (size_t k = i + 1; k < list.size(); ++k) rest.push_back(std::move(list[k]));
    list.resize(i + 1);
    for (StmtList* branch : {&s.body, &s.alt}) {
      if (alwaysReturns(*branch)) continue;
      for (const auto& r : rest) branch->push_back(r->clone());
      sink(*branch);
    }
    return;
  }
}

}  // namespace

void eliminateCuts(FuncDef& f) {
  if (!alwaysReturns(f.body))
    f.body.push_back(Stmt::ret(f.retType.isVoid() ? nullptr : norm::zeroOf(f.retType)));
  sink(f.body);
}

}  // namespace c2pl
