#include "c2pl/normalize/normalize.hpp"
#include "util.hpp"

namespace c2pl {
namespace {

using namespace norm;

std::string varNode(const std::string& fn, const std::string& v) { return "v|" + fn + "|" + v; }
std::string retNode(const std::string& fn) { return "r|" + fn; }
std::string globalLoc(const std::string& g) { return "::" + g; }

struct Source {
  std::string node;  // empty for constants
  std::set<std::string> locs;
};

enum class CKind { Base, Copy, Load, Store, MemCopy };

struct Constraint {
  CKind kind;
  std::string dst;
  std::string src;
  std::set<std::string> locs;
};

class Collector {
 public:
  Collector(const TranslationUnit& tu, std::vector<Constraint>& cs) : tu_(tu), cs_(cs) {}

  void function(const FuncDef& f) {
    fn_ = &f;
    site_ = 0;
    walk(f.body);
  }

 private:
  Source src(const Expr& e) const {
    Source s;
    if (isLocalVar(e)) s.node = varNode(fn_->name, e.name);
    else if (e.kind == ExprKind::AddrOf && e.kids[0]->kind == ExprKind::Var) {
      const Expr& v = *e.kids[0];
      s.locs.insert(v.scope == VarScope::Global ? globalLoc(v.name) : PointsTo::localLoc(fn_->name, v.name));
    }
    return s;
  }

  void flow(const std::string& dst, const Source& s) {
    if (!s.node.empty()) cs_.push_back({CKind::Copy, dst, s.node, {}});
    if (!s.locs.empty()) cs_.push_back({CKind::Base, dst, "", s.locs});
  }

  void callFlow(const FuncDef& g, const Expr& call, size_t first, const std::string& result) {
    for (size_t i = first; i < call.kids.size() && i - first < g.params.size(); ++i)
      flow(varNode(g.name, g.params[i - first].name), src(*call.kids[i]));
    if (!result.empty()) cs_.push_back({CKind::Copy, result, retNode(g.name), {}});
  }

  void rhs(const Expr& r, const std::string& dst) {
    switch (r.kind) {
      case ExprKind::Deref: {
        Source p = src(*r.kids[0]);
        if (!p.node.empty()) cs_.push_back({CKind::Load, dst, p.node, {}});
        for (const auto& l : p.locs) cs_.push_back({CKind::Copy, dst, "c|" + l, {}});
        return;
      }
      case ExprKind::Call: {
        if (const FuncDef* g = tu_.findFunction(r.name)) {
          callFlow(*g, r, 0, dst);
        } else if (r.name == "malloc") {
          if (!dst.empty()) cs_.push_back({CKind::Base, dst, "", {"heap@" + fn_->name + "#" + std::to_string(site_++)}});
        } else if (r.name == "memcpy" || r.name == "memset") {
          Source d = src(*r.kids[0]);
          if (!dst.empty()) flow(dst, d);
          if (r.name == "memcpy") memCopy(d, src(*r.kids[1]));
        }
        return;
      }
      case ExprKind::IndCall:
        for (const auto& g : tu_.functions)
          if (g.params.size() + 1 == r.kids.size()) callFlow(g, r, 1, dst);
        return;
      default:
        if (dst.empty()) return;
        if (isAtom(r) || r.kind == ExprKind::AddrOf) {
          flow(dst, src(r));
          return;
        }
        for (const auto& k : r.kids) flow(dst, src(*k));
    }
  }

  void memCopy(const Source& d, const Source& s) {
    // content(l) ⊇ content(l') for l in pts(d), l' in pts(s); constants are folded into temporary nodes
    const std::string dn = d.node.empty() ? tempNode(d) : d.node;
    const std::string sn = s.node.empty() ? tempNode(s) : s.node;
    cs_.push_back({CKind::MemCopy, dn, sn, {}});
  }

  std::string tempNode(const Source& s) {
    std::string n = "k|" + std::to_string(temp_++);
    cs_.push_back({CKind::Base, n, "", s.locs});
    return n;
  }

  void walk(const StmtList& list) {
    for (const auto& s : list) {
      if (s->kind == StmtKind::If) {
        walk(s->body);
        walk(s->alt);
        continue;
      }
      if (s->kind == StmtKind::Return) {
        if (s->expr) flow(retNode(fn_->name), src(*s->expr));
        continue;
      }
      if (s->kind != StmtKind::Expr) continue;
      const Expr& e = *s->expr;
      if (e.kind != ExprKind::Assign) {
        rhs(e, "");
        continue;
      }
      const Expr& lhs = *e.kids[0];
      if (isLocalVar(lhs)) {
        rhs(*e.kids[1], varNode(fn_->name, lhs.name));
      } else if (lhs.kind == ExprKind::Deref) {
        Source p = src(*lhs.kids[0]);
        Source v = src(*e.kids[1]);
        const std::string pn = p.node.empty() ? tempNode(p) : p.node;
        if (!v.node.empty()) cs_.push_back({CKind::Store, pn, v.node, {}});
        if (!v.locs.empty()) cs_.push_back({CKind::Store, pn, tempNode(v), {}});
      }
    }
  }

  const TranslationUnit& tu_;
  std::vector<Constraint>& cs_;
  const FuncDef* fn_ = nullptr;
  int site_ = 0;
  int temp_ = 0;
};

bool addAll(std::set<std::string>& to, const std::set<std::string>& from) {
  const size_t before = to.size();
  to.insert(from.begin(), from.end());
  return to.size() != before;
}

}  // namespace

const std::set<std::string>& PointsTo::of(const std::string& fn, const std::string& var) const {
  static const std::set<std::string> empty;
  auto it = vars_.find(varNode(fn, var));
  return it == vars_.end() ? empty : it->second;
}

std::set<std::string> PointsTo::ofOperand(const std::string& fn, const Expr& e) const {
  if (isLocalVar(e)) return of(fn, e.name);
  if (e.kind == ExprKind::AddrOf && e.kids[0]->kind == ExprKind::Var) {
    const Expr& v = *e.kids[0];
    return {v.scope == VarScope::Global ? globalLoc(v.name) : localLoc(fn, v.name)};
  }
  return {};
}

const std::set<std::string>& PointsTo::contents(const std::string& loc) const {
  static const std::set<std::string> empty;
  auto it = contents_.find(loc);
  return it == contents_.end() ? empty : it->second;
}

std::set<std::string> PointsTo::reach(const std::set<std::string>& roots) const {
  std::set<std::string> seen = roots;
  std::vector<std::string> work(roots.begin(), roots.end());
  while (!work.empty()) {
    std::string l = work.back();
    work.pop_back();
    for (const auto& n : contents(l))
      if (seen.insert(n).second) work.push_back(n);
  }
  return seen;
}

PointsTo pointsTo(const TranslationUnit& tu, const std::map<std::string, FuncInfo>& info, bool conservative) {
  (void)info;
  std::vector<Constraint> cs;
  Collector col(tu, cs);
  for (const auto& f : tu.functions) col.function(f);

  // one map for variable nodes ("v|", "r|", "k|") and location contents ("c|")
  std::map<std::string, std::set<std::string>> sets;
  auto content = [&](const std::string& loc) -> std::set<std::string>& { return sets["c|" + loc]; };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : cs) {
      switch (c.kind) {
        case CKind::Base:
          changed |= addAll(sets[c.dst], c.locs);
          break;
        case CKind::Copy: {
          const std::set<std::string> s = sets[c.src];
          changed |= addAll(sets[c.dst], s);
          break;
        }
        case CKind::Load: {
          const std::set<std::string> p = sets[c.src];
          for (const auto& l : p) {
            const std::set<std::string> s = content(l);
            changed |= addAll(sets[c.dst], s);
          }
          break;
        }
        case CKind::Store: {
          const std::set<std::string> p = sets[c.dst];
          const std::set<std::string> v = sets[c.src];
          for (const auto& l : p) changed |= addAll(content(l), v);
          break;
        }
        case CKind::MemCopy: {
          const std::set<std::string> d = sets[c.dst];
          const std::set<std::string> s = sets[c.src];
          for (const auto& ls : s) {
            const std::set<std::string> v = content(ls);
            for (const auto& ld : d) changed |= addAll(content(ld), v);
          }
          break;
        }
      }
    }
  }

  PointsTo r;
  r.conservative_ = conservative;
  for (auto& [k, v] : sets) {
    if (k.rfind("v|", 0) == 0) r.vars_[k] = v;
    else if (k.rfind("c|", 0) == 0) r.contents_[k.substr(2)] = v;
  }
  for (const auto& g : tu.globals) r.globals_.insert(globalLoc(g.name));
  return r;
}

}  // namespace c2pl
