#include <algorithm>
#include <limits>
#include <set>

#include "c2pl/engine/syntax.hpp"
#include "c2pl/metrics/metrics.hpp"

namespace c2pl {

namespace {

constexpr size_t kNone = std::numeric_limits<size_t>::max();

class CfgBuilder {
 public:
  explicit CfgBuilder(const std::string& name) { g_.name = name; }

  Cfg build(const FuncDef& f) {
    list(f.body, block({}));
    return std::move(g_);
  }

 private:
  size_t block(const std::vector<size_t>& preds) {
    const size_t b = g_.addNode("B" + std::to_string(g_.nodes.size()));
    for (size_t p : preds) edge(p, b);
    return b;
  }

  void edge(size_t from, size_t to) {
    if (from == kNone) return;
    const std::pair<size_t, size_t> e{from, to};
    if (std::find(g_.edges.begin(), g_.edges.end(), e) == g_.edges.end()) g_.edges.push_back(e);
  }

  static std::vector<size_t> live(std::vector<size_t> v) {
    v.erase(std::remove(v.begin(), v.end(), kNone), v.end());
    return v;
  }

  static bool constant(const Expr* e, bool truth) {
    return e && e->kind == ExprKind::IntConst && (e->ival != 0) == truth;
  }

  // Returns the block control falls out of, or kNone when it cannot.
  size_t list(const StmtList& l, size_t cur) {
    for (const auto& s : l) {
      if (cur == kNone) return kNone;
      cur = stmt(*s, cur);
    }
    return cur;
  }

  size_t joinOf(std::vector<size_t> preds) {
    preds = live(std::move(preds));
    return preds.empty() ? kNone : block(preds);
  }

  size_t stmt(const Stmt& s, size_t cur) {
    switch (s.kind) {
      case StmtKind::Expr:
      case StmtKind::Decl:
        return cur;
      case StmtKind::Block:
        return list(s.body, cur);
      case StmtKind::Return:
        return kNone;
      case StmtKind::Break:
        breaks_.back()->push_back(cur);
        return kNone;
      case StmtKind::Continue:
        continues_.back()->push_back(cur);
        return kNone;
      case StmtKind::If: {
        const size_t thenEnd = list(s.body, block({cur}));
        if (s.alt.empty()) return joinOf({thenEnd, cur});
        const size_t elseEnd = list(s.alt, block({cur}));
        return joinOf({thenEnd, elseEnd});
      }
      case StmtKind::While:
      case StmtKind::For: {
        cur = list(s.init, cur);
        if (cur == kNone) return kNone;
        const size_t header = block({cur});
        const size_t test = list(s.pre, header);
        std::vector<size_t> breaks, continues;
        const size_t bodyEnd = loopBody(s.body, block({test}), breaks, continues);
        std::vector<size_t> back = continues;
        back.push_back(bodyEnd);
        if (!s.step.empty()) {
          const size_t step = joinOf(back);
          back = {step == kNone ? kNone : list(s.step, step)};
        }
        for (size_t b : back) edge(b, header);
        if (!constant(s.expr.get(), true)) breaks.push_back(test);
        return joinOf(breaks);
      }
      case StmtKind::DoWhile: {
        const size_t body = block({cur});
        std::vector<size_t> breaks, continues;
        const size_t bodyEnd = loopBody(s.body, body, breaks, continues);
        continues.push_back(bodyEnd);
        const size_t cond = joinOf(continues);
        const size_t test = cond == kNone ? kNone : list(s.pre, cond);
        if (test != kNone && !constant(s.expr.get(), false)) edge(test, body);
        if (!constant(s.expr.get(), true)) breaks.push_back(test);
        return joinOf(breaks);
      }
      case StmtKind::Switch: {
        std::vector<size_t> breaks;
        breaks_.push_back(&breaks);
        size_t fall = kNone;
        bool hasDefault = false;
        for (const auto& c : s.cases) {
          hasDefault |= c.isDefault;
          fall = list(c.body, block({cur, fall}));
        }
        breaks_.pop_back();
        breaks.push_back(fall);
        if (!hasDefault) breaks.push_back(cur);
        return joinOf(breaks);
      }
    }
    return cur;
  }

  size_t loopBody(const StmtList& body, size_t entry, std::vector<size_t>& breaks, std::vector<size_t>& continues) {
    breaks_.push_back(&breaks);
    continues_.push_back(&continues);
    const size_t end = list(body, entry);
    breaks_.pop_back();
    continues_.pop_back();
    return end;
  }

  Cfg g_;
  std::vector<std::vector<size_t>*> breaks_;
  std::vector<std::vector<size_t>*> continues_;
};

bool isControl(const Term& t) {
  return t.isCompound(",", 2) || t.isCompound(";", 2) || t.isCompound("->", 2);
}

bool canFail(const Term& t) {
  static const std::set<std::pair<std::string, size_t>> infallible = {
      {"true", 0}, {"$mark", 1}, {"$alloc", 3}, {"$release", 1}, {"wrPtrInt", 3}, {"wrPtrFloat", 3}};
  return !infallible.count({t.name, t.args.size()});
}

bool isCall(const Term& t) {
  static const std::set<std::pair<std::string, size_t>> evaluation = {
      {"true", 0}, {"is", 2},  {"=", 2},  {"=:=", 2}, {"=\\=", 2},
      {"<", 2},    {">", 2},   {"=<", 2}, {">=", 2},
  };
  return !evaluation.count({t.name, t.args.size()});
}

class ResolutionBuilder {
 public:
  Cfg build(const Clause& c) {
    g_.name = c.head->name + "/" + std::to_string(c.head->args.size());
    const size_t entry = g_.addNode(writeTerm(*c.head));
    goal(*c.body, {entry});
    if (!fallible_.empty() || !alternatives_.empty()) {
      const size_t handler = g_.addNode("handler");
      const size_t failNode = g_.addNode("fail");
      for (size_t f : fallible_) g_.edges.push_back({f, handler});
      for (size_t a : alternatives_) g_.edges.push_back({handler, a});
      g_.edges.push_back({handler, failNode});
    }
    return std::move(g_);
  }

 private:
  std::vector<size_t> alternative(const Term& t) {
    const size_t first = g_.nodes.size();
    auto exits = goal(t, {});
    alternatives_.push_back(first);
    return exits;
  }

  std::vector<size_t> join(std::vector<size_t> a, const std::vector<size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    const size_t j = g_.addNode("join");
    for (size_t p : a) g_.edges.push_back({p, j});
    return {j};
  }

  std::vector<size_t> goal(const Term& t, const std::vector<size_t>& preds) {
    if (t.isCompound(",", 2)) return goal(*t.args[1], goal(*t.args[0], preds));
    if (t.isCompound(";", 2)) {
      const Term& left = *t.args[0];
      std::vector<size_t> first =
          left.isCompound("->", 2) ? goal(*left.args[1], goal(*left.args[0], preds)) : goal(left, preds);
      return join(std::move(first), alternative(*t.args[1]));
    }
    if (t.isCompound("->", 2)) return goal(*t.args[1], goal(*t.args[0], preds));
    const size_t n = g_.addNode(writeTerm(t));
    for (size_t p : preds) g_.edges.push_back({p, n});
    if (canFail(t)) fallible_.push_back(n);
    return {n};
  }

  Cfg g_;
  std::vector<size_t> fallible_;
  std::vector<size_t> alternatives_;
};

class Fenwick {
 public:
  explicit Fenwick(size_t n) : t_(n + 1, 0) {}
  void add(size_t i) {
    for (++i; i < t_.size(); i += i & (~i + 1)) ++t_[i];
  }
  // Count of positions < i.
  int64_t prefix(size_t i) const {
    int64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += t_[i];
    return s;
  }

 private:
  std::vector<int64_t> t_;
};

void countCalls(const Expr& e, int64_t& n) {
  if (e.kind == ExprKind::Call || e.kind == ExprKind::IndCall) ++n;
  for (const auto& k : e.kids) countCalls(*k, n);
}

void countCalls(const StmtList& l, int64_t& n) {
  for (const auto& s : l) {
    if (s->expr) countCalls(*s->expr, n);
    for (const StmtList* c : {&s->body, &s->alt, &s->init, &s->pre, &s->step}) countCalls(*c, n);
    for (const auto& c : s->cases) countCalls(c.body, n);
  }
}

void countCalls(const Term& t, int64_t& n) {
  if (isControl(t)) {
    for (const auto& a : t.args) countCalls(*a, n);
    return;
  }
  if (isCall(t)) ++n;
}

std::string dotEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

Cfg buildCfg(const FuncDef& f) { return CfgBuilder(f.name).build(f); }

Cfg buildResolutionCfg(const Clause& c) { return ResolutionBuilder().build(c); }

int64_t cyclomatic(const Cfg& g) {
  return static_cast<int64_t>(g.edges.size()) - static_cast<int64_t>(g.nodes.size()) + 2;
}

int64_t knotCount(const Cfg& g) {
  struct Span {
    size_t lo, hi;
  };
  std::vector<Span> spans;
  for (auto [u, v] : g.edges)
    if (u != v) spans.push_back({std::min(u, v), std::max(u, v)});
  // For each span [a,b], count spans [c,d] with a < c < b < d.
  std::vector<Span> byHi = spans;
  std::sort(byHi.begin(), byHi.end(), [](const Span& x, const Span& y) { return x.hi > y.hi; });
  Fenwick open(g.nodes.size());
  int64_t knots = 0;
  size_t next = 0;
  for (const Span& s : byHi) {
    while (next < byHi.size() && byHi[next].hi > s.hi) open.add(byHi[next++].lo);
    if (s.hi > s.lo + 1) knots += open.prefix(s.hi) - open.prefix(s.lo + 1);
  }
  return knots;
}

std::string toDot(const Cfg& g) {
  std::string out = "digraph \"" + dotEscape(g.name) + "\" {\n  node [shape=box];\n";
  for (size_t i = 0; i < g.nodes.size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"" + dotEscape(g.nodes[i]) + "\"];\n";
  for (auto [u, v] : g.edges) out += "  n" + std::to_string(u) + " -> n" + std::to_string(v) + ";\n";
  return out + "}\n";
}

int64_t callSites(const FuncDef& f) {
  int64_t n = 0;
  countCalls(f.body, n);
  return n;
}

int64_t callSites(const Clause& c) {
  int64_t n = 0;
  countCalls(*c.body, n);
  return n;
}

}  // namespace c2pl
