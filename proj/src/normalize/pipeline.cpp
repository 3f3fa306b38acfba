#include <ostream>

#include "c2pl/frontend/printer.hpp"
#include "c2pl/normalize/normalize.hpp"

namespace c2pl {

const std::vector<std::string>& passNames() {
  static const std::vector<std::string> names = {"lower", "loops", "cuts", "pointerize", "pointsto", "flush", "ssa", "simplify"};
  return names;
}

namespace {

void dumpPointsTo(std::ostream& os, const PointsTo& pts) {
  for (const auto& [node, locs] : pts.vars()) {
    if (locs.empty()) continue;
    os << node.substr(2) << " ->";
    for (const auto& l : locs) os << ' ' << l;
    os << '\n';
  }
}

}  // namespace

NormalizedUnit normalize(const TranslationUnit& tu, const NormalizeOptions& opts) {
  NormalizedUnit out;
  out.tu = tu.clone();
  TranslationUnit& u = out.tu;
  auto dump = [&](const std::string& pass) {
    if (!opts.dump || opts.dumpPass != pass) return;
    if (pass == "pointsto") dumpPointsTo(*opts.dump, out.pts);
    else *opts.dump << printC(u);
  };
  auto stop = [&](const std::string& pass) { return opts.stopAfter == pass; };

  for (auto& f : u.functions) f = lowerExpressions(f, u);
  dump("lower");
  if (stop("lower")) return out;

  for (size_t i = 0; i < u.functions.size(); ++i) {
    std::vector<FuncDef> helpers = lowerLoops(u.functions[i], u);
    for (size_t k = 0; k < helpers.size(); ++k)
      u.functions.insert(u.functions.begin() + static_cast<std::ptrdiff_t>(i + 1 + k), std::move(helpers[k]));
    i += helpers.size();
  }
  u.rebuildFuncTable();
  dump("loops");
  if (stop("loops")) return out;

  for (auto& f : u.functions) eliminateCuts(f);
  dump("cuts");
  if (stop("cuts")) return out;

  for (auto& f : u.functions) out.info[f.name] = pointerize(f, u);
  dump("pointerize");
  if (stop("pointerize")) return out;

  out.pts = pointsTo(u, out.info, opts.conservativePta);
  dump("pointsto");
  if (stop("pointsto")) return out;

  for (auto& f : u.functions) insertFlushReload(f, out.info.at(f.name), out.pts, u);
  dump("flush");
  if (stop("flush")) return out;

  for (auto& f : u.functions) ssaRename(f, out.info.at(f.name));
  dump("ssa");
  if (stop("ssa")) return out;

  for (auto& f : u.functions) simplify(f, out.info.at(f.name));
  dump("simplify");
  return out;
}

}  // namespace c2pl
