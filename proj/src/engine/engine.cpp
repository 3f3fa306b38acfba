#include "c2pl/engine/engine.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <ostream>

#include "c2pl/engine/syntax.hpp"
#include "c2pl/error.hpp"

namespace c2pl {

namespace {

constexpr uint32_t kNoPred = std::numeric_limits<uint32_t>::max();

enum ArOp : uint8_t {
  kNone, kAdd, kSub, kMul, kFDiv, kIDiv, kRem, kMod, kDiv, kAnd, kOr, kXor, kShl, kShr, kMin, kMax, kPow,
  kNeg, kPos, kAbs, kNot, kFloat, kTruncate, kFloat32, kSign, kInteger,
};

uint64_t predKey(uint32_t atom, uint32_t arity) { return (static_cast<uint64_t>(atom) << 32) | arity; }

using U128 = unsigned __int128;

Int128 wrapAdd(Int128 a, Int128 b) { return static_cast<Int128>(static_cast<U128>(a) + static_cast<U128>(b)); }
Int128 wrapSub(Int128 a, Int128 b) { return static_cast<Int128>(static_cast<U128>(a) - static_cast<U128>(b)); }
Int128 wrapMul(Int128 a, Int128 b) { return static_cast<Int128>(static_cast<U128>(a) * static_cast<U128>(b)); }

Int128 shiftLeft(Int128 a, Int128 s) {
  if (s < 0) return s <= -128 ? (a < 0 ? -1 : 0) : a >> static_cast<int>(-s);
  if (s >= 128) return 0;
  return static_cast<Int128>(static_cast<U128>(a) << static_cast<int>(s));
}

Int128 shiftRight(Int128 a, Int128 s) {
  if (s < 0) return shiftLeft(a, -s);
  if (s >= 128) return a < 0 ? -1 : 0;
  return a >> static_cast<int>(s);
}

bool sameBits(double a, double b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

Engine::Engine(EngineOptions opts) : opts_(opts) {
  heap_.reserve(1 << 16);
  addBuiltin("true", 0, Builtin::True);
  addBuiltin("fail", 0, Builtin::Fail);
  addBuiltin("false", 0, Builtin::Fail);
  addBuiltin(",", 2, Builtin::Conj);
  addBuiltin(";", 2, Builtin::Disj);
  addBuiltin("->", 2, Builtin::IfThen);
  addBuiltin("\\+", 1, Builtin::Not);
  addBuiltin("call", 1, Builtin::Call);
  addBuiltin("!", 0, Builtin::Cut);
  addBuiltin("is", 2, Builtin::Is);
  addBuiltin("=", 2, Builtin::Unify);
  addBuiltin("\\=", 2, Builtin::NotUnify);
  addBuiltin("==", 2, Builtin::Identical);
  addBuiltin("\\==", 2, Builtin::NotIdentical);
  addBuiltin("=:=", 2, Builtin::ArithEq);
  addBuiltin("=\\=", 2, Builtin::ArithNe);
  addBuiltin("<", 2, Builtin::Lt);
  addBuiltin(">", 2, Builtin::Gt);
  addBuiltin("=<", 2, Builtin::Le);
  addBuiltin(">=", 2, Builtin::Ge);

  const std::pair<const char*, ArOp> binary[] = {
      {"+", kAdd},   {"-", kSub},   {"*", kMul},  {"/", kFDiv},  {"//", kIDiv}, {"rem", kRem},
      {"mod", kMod}, {"div", kDiv}, {"/\\", kAnd}, {"\\/", kOr}, {"xor", kXor}, {"<<", kShl},
      {">>", kShr},  {"min", kMin}, {"max", kMax}, {"**", kPow},
  };
  const std::pair<const char*, ArOp> unary[] = {
      {"-", kNeg},         {"+", kPos},           {"abs", kAbs},   {"\\", kNot},      {"float", kFloat},
      {"truncate", kTruncate}, {"float32", kFloat32}, {"sign", kSign}, {"integer", kInteger},
  };
  for (auto [n, op] : binary) arith2_[intern(n)] = op;
  for (auto [n, op] : unary) arith1_[intern(n)] = op;

  Cell t;
  t.tag = Tag::Fun;
  t.atom = intern("true");
  trueCell_ = heap_.size();
  heap_.push_back(t);
  t.atom = intern("fail");
  failCell_ = heap_.size();
  heap_.push_back(t);
  base_ = heap_.size();
}

uint32_t Engine::intern(const std::string& s) {
  auto it = atomIds_.find(s);
  if (it != atomIds_.end()) return it->second;
  const auto id = static_cast<uint32_t>(atoms_.size());
  atoms_.push_back(s);
  atomIds_.emplace(s, id);
  arith1_.push_back(kNone);
  arith2_.push_back(kNone);
  return id;
}

uint32_t Engine::lookupPred(uint32_t atom, uint32_t arity) const {
  auto it = predIndex_.find(predKey(atom, arity));
  return it == predIndex_.end() ? kNoPred : it->second;
}

uint32_t Engine::ensurePred(const std::string& name, uint32_t arity) {
  const uint32_t atom = intern(name);
  uint32_t p = lookupPred(atom, arity);
  if (p != kNoPred) return p;
  p = static_cast<uint32_t>(preds_.size());
  Pred pred;
  pred.name = name;
  pred.arity = arity;
  preds_.push_back(std::move(pred));
  predIndex_.emplace(predKey(atom, arity), p);
  return p;
}

void Engine::addBuiltin(const std::string& name, uint32_t arity, Builtin b) {
  Pred& p = preds_[ensurePred(name, arity)];
  p.kind = PredKind::Builtin;
  p.builtin = b;
}

bool Engine::hasPredicate(const std::string& name, uint32_t arity) const {
  auto it = atomIds_.find(name);
  if (it == atomIds_.end()) return false;
  return lookupPred(it->second, arity) != kNoPred || anyArity_.count(it->second);
}

void Engine::reserveCells(size_t n) {
  if (heap_.size() + n > opts_.maxHeapCells)
    fail(ErrorCode::Oom, "Prolog heap exhausted (" + std::to_string(opts_.maxHeapCells) + " cells)");
  if (heap_.size() + n > stats_.peakHeap) stats_.peakHeap = heap_.size() + n;
}

void Engine::push(const Cell& c) {
  reserveCells(1);
  heap_.push_back(c);
}

void Engine::fill(size_t at, const Term& t, std::vector<Cell>& out, std::unordered_map<std::string, size_t>& vars,
                  Engine& e) {
  Cell c;
  switch (t.kind) {
    case Term::Kind::Int:
      c.tag = Tag::Int;
      c.ival = t.ival;
      break;
    case Term::Kind::Float:
      c.tag = Tag::Flt;
      c.fval = t.fval;
      break;
    case Term::Kind::Atom:
      c.tag = Tag::Fun;
      c.atom = e.intern(t.name);
      break;
    case Term::Kind::Var: {
      c.tag = Tag::Ref;
      auto it = vars.find(t.name);
      if (t.name == "_") {
        c.ref = at;
      } else if (it == vars.end()) {
        vars.emplace(t.name, at);
        c.ref = at;
      } else {
        c.ref = it->second;
      }
      break;
    }
    case Term::Kind::Struct: {
      const size_t f = out.size();
      if (&out == &e.heap_) e.reserveCells(1 + t.args.size());
      out.resize(f + 1 + t.args.size());
      out[f].tag = Tag::Fun;
      out[f].atom = e.intern(t.name);
      out[f].arity = static_cast<uint32_t>(t.args.size());
      c.tag = Tag::Str;
      c.ref = f;
      out[at] = c;
      for (size_t i = 0; i < t.args.size(); ++i) fill(f + 1 + i, *t.args[i], out, vars, e);
      return;
    }
  }
  out[at] = c;
}

size_t Engine::buildTerm(const Term& t) {
  std::unordered_map<std::string, size_t> vars;
  const size_t at = heap_.size();
  push(Cell{});
  fill(at, t, heap_, vars, *this);
  return at;
}

size_t Engine::copyTemplate(const std::vector<Cell>& tpl) {
  reserveCells(tpl.size());
  const size_t base = heap_.size();
  heap_.insert(heap_.end(), tpl.begin(), tpl.end());
  for (size_t i = base; i < heap_.size(); ++i) {
    Cell& c = heap_[i];
    if (c.tag == Tag::Ref || c.tag == Tag::Str) c.ref += base;
  }
  return base;
}

void Engine::consult(const Program& p) {
  for (const Clause& cl : p.clauses) {
    const Term& h = *cl.head;
    if (h.kind != Term::Kind::Atom && h.kind != Term::Kind::Struct)
      fail(ErrorCode::Type, "clause head is not callable: " + writeTerm(h));
    const uint32_t pi = ensurePred(h.name, static_cast<uint32_t>(h.args.size()));
    if (preds_[pi].kind != PredKind::User)
      fail(ErrorCode::State, "cannot add clauses to " + h.name + "/" + std::to_string(h.args.size()));
    std::vector<Cell> tpl(2);
    std::unordered_map<std::string, size_t> vars;
    fill(0, h, tpl, vars, *this);
    fill(1, *cl.body, tpl, vars, *this);
    preds_[pi].clauses.push_back(std::move(tpl));
  }
}

void Engine::consultText(std::string_view text) { consult(readProgram(text)); }

void Engine::registerForeign(const std::string& name, uint32_t arity, Foreign fn) {
  const uint32_t pi = ensurePred(name, arity);
  Pred& p = preds_[pi];
  if (p.kind == PredKind::Builtin || !p.clauses.empty())
    fail(ErrorCode::State, name + "/" + std::to_string(arity) + " already has clauses");
  p.kind = PredKind::Foreign;
  p.foreign = std::move(fn);
}

void Engine::registerForeignAnyArity(const std::string& name, Foreign fn) { anyArity_[intern(name)] = std::move(fn); }

size_t Engine::deref(size_t a) const {
  while (heap_[a].tag == Tag::Ref && heap_[a].ref != a) a = heap_[a].ref;
  return a;
}

void Engine::bind(size_t var, size_t to) {
  heap_[var].ref = to;
  trail_.push_back(var);
}

void Engine::undoTrail(size_t mark) {
  while (trail_.size() > mark) {
    const size_t a = trail_.back();
    trail_.pop_back();
    if (a < heap_.size()) heap_[a].ref = a;
  }
}

bool Engine::unify(size_t a, size_t b) {
  ++stats_.unifications;
  std::vector<std::pair<size_t, size_t>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    x = deref(x);
    y = deref(y);
    if (x == y) continue;
    const Cell cx = heap_[x];
    const Cell cy = heap_[y];
    if (cx.tag == Tag::Ref) {
      if (cy.tag == Tag::Ref && y > x) bind(y, x);
      else bind(x, y);
      continue;
    }
    if (cy.tag == Tag::Ref) {
      bind(y, x);
      continue;
    }
    if (cx.tag != cy.tag) return false;
    switch (cx.tag) {
      case Tag::Int:
        if (cx.ival != cy.ival) return false;
        break;
      case Tag::Flt:
        if (!sameBits(cx.fval, cy.fval)) return false;
        break;
      case Tag::Fun:
        if (cx.atom != cy.atom || cx.arity != cy.arity) return false;
        break;
      case Tag::Str: {
        const Cell& fx = heap_[cx.ref];
        const Cell& fy = heap_[cy.ref];
        if (fx.atom != fy.atom || fx.arity != fy.arity) return false;
        for (uint32_t i = fx.arity; i > 0; --i) work.emplace_back(cx.ref + i, cy.ref + i);
        break;
      }
      case Tag::Ref:
        break;
    }
  }
  return true;
}

bool Engine::identical(size_t a, size_t b) const {
  std::vector<std::pair<size_t, size_t>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    x = deref(x);
    y = deref(y);
    if (x == y) continue;
    const Cell& cx = heap_[x];
    const Cell& cy = heap_[y];
    if (cx.tag != cy.tag) return false;
    switch (cx.tag) {
      case Tag::Ref:
        return false;
      case Tag::Int:
        if (cx.ival != cy.ival) return false;
        break;
      case Tag::Flt:
        if (!sameBits(cx.fval, cy.fval)) return false;
        break;
      case Tag::Fun:
        if (cx.atom != cy.atom || cx.arity != cy.arity) return false;
        break;
      case Tag::Str: {
        const Cell& fx = heap_[cx.ref];
        const Cell& fy = heap_[cy.ref];
        if (fx.atom != fy.atom || fx.arity != fy.arity) return false;
        for (uint32_t i = fx.arity; i > 0; --i) work.emplace_back(cx.ref + i, cy.ref + i);
        break;
      }
    }
  }
  return true;
}

size_t Engine::newInt(Int128 v) {
  Cell c;
  c.tag = Tag::Int;
  c.ival = v;
  push(c);
  return heap_.size() - 1;
}

size_t Engine::newFloat(double v) {
  Cell c;
  c.tag = Tag::Flt;
  c.fval = v;
  push(c);
  return heap_.size() - 1;
}

Int128 Engine::intArg(size_t a) const {
  a = deref(a);
  const Cell& c = heap_[a];
  if (c.tag == Tag::Int) return c.ival;
  if (c.tag == Tag::Ref) fail(ErrorCode::Inst, "integer argument is unbound");
  fail(ErrorCode::Type, "integer expected, found " + writeTerm(*toTerm(a)));
}

double Engine::floatArg(size_t a) const {
  a = deref(a);
  const Cell& c = heap_[a];
  if (c.tag == Tag::Flt) return c.fval;
  if (c.tag == Tag::Int) return static_cast<double>(c.ival);
  if (c.tag == Tag::Ref) fail(ErrorCode::Inst, "float argument is unbound");
  fail(ErrorCode::Type, "number expected, found " + writeTerm(*toTerm(a)));
}

TermPtr Engine::toTerm(size_t a) const {
  a = deref(a);
  const Cell& c = heap_[a];
  switch (c.tag) {
    case Tag::Ref:
      return Term::var("_G" + std::to_string(a));
    case Tag::Int:
      return Term::integer(c.ival);
    case Tag::Flt:
      return Term::flt(c.fval);
    case Tag::Fun:
      return Term::atom(atoms_[c.atom]);
    case Tag::Str: {
      const Cell& f = heap_[c.ref];
      std::vector<TermPtr> args;
      for (uint32_t i = 1; i <= f.arity; ++i) args.push_back(toTerm(c.ref + i));
      return Term::make(atoms_[f.atom], std::move(args));
    }
  }
  return Term::atom("?");
}

size_t Engine::argAddr(size_t goal, size_t i) const { return heap_[deref(goal)].ref + 1 + i; }

std::string Engine::indicator(size_t goal) const {
  const size_t g = deref(goal);
  const Cell& c = heap_[g];
  if (c.tag == Tag::Fun) return atoms_[c.atom] + "/0";
  if (c.tag == Tag::Str) return atoms_[heap_[c.ref].atom] + "/" + std::to_string(heap_[c.ref].arity);
  return "<non-callable>";
}

std::string Engine::goalStack(int64_t frameIdx) const {
  std::string out;
  int n = 0;
  for (int64_t i = frameIdx; i >= 0 && static_cast<size_t>(i) < arena_.size(); i = arena_[i].caller) {
    if (n == 16) {
      out += " <- ...";
      break;
    }
    if (n++) out += " <- ";
    out += indicator(arena_[i].goal);
  }
  return out;
}

int64_t Engine::pushFrame(size_t goal, int64_t next, int64_t caller, uint32_t depth, uint32_t cutBarrier) {
  arena_.push_back({goal, next, caller, depth, cutBarrier, false});
  return static_cast<int64_t>(arena_.size()) - 1;
}

int64_t Engine::pushCut(uint32_t height, int64_t next) {
  arena_.push_back({0, next, -1, 0, height, true});
  return static_cast<int64_t>(arena_.size()) - 1;
}

void Engine::pushChoice(ChoicePoint cp) {
  cp.trailMark = trail_.size();
  cp.heapMark = heap_.size();
  cp.arenaMark = arena_.size();
  ++stats_.choicePoints;
  if (trace_) {
    *trace_ << "push " << cps_.size() << ' '
            << (cp.clauses ? preds_[cp.pred].name + "/" + std::to_string(preds_[cp.pred].arity) : std::string("alt"))
            << '\n';
  }
  cps_.push_back(cp);
}

bool Engine::tryClauses(size_t goal, uint32_t pred, uint32_t first, int64_t& cont, int64_t caller, uint32_t depth) {
  const size_t n = preds_[pred].clauses.size();
  if (first >= n) return false;
  const auto barrier = static_cast<uint32_t>(cps_.size());
  if (first + 1 < n) {
    ChoicePoint cp;
    cp.clauses = true;
    cp.goal = goal;
    cp.pred = pred;
    cp.nextClause = first + 1;
    cp.cont = cont;
    cp.caller = caller;
    cp.depth = depth;
    pushChoice(cp);
  }
  const size_t base = copyTemplate(preds_[pred].clauses[first]);
  if (!unify(base, goal)) return false;
  cont = pushFrame(base + 1, cont, caller, depth, barrier);
  return true;
}

bool Engine::backtrack(const Query& q, int64_t& cont) {
  while (true) {
    if (cps_.size() <= q.cpBase) return false;
    const ChoicePoint cp = cps_.back();
    cps_.pop_back();
    ++stats_.restores;
    if (trace_) *trace_ << "restore " << cps_.size() << '\n';
    undoTrail(cp.trailMark);
    heap_.resize(cp.heapMark);
    arena_.resize(cp.arenaMark);
    if (!cp.clauses) {
      cont = pushFrame(cp.goal, cp.cont, cp.caller, cp.depth, cp.cutBarrier);
      return true;
    }
    cont = cp.cont;
    if (tryClauses(cp.goal, cp.pred, cp.nextClause, cont, cp.caller, cp.depth)) return true;
  }
}

bool Engine::step(int64_t frameIdx, int64_t& cont) {
  const Frame f = arena_[frameIdx];
  const size_t g = deref(f.goal);
  const Cell c = heap_[g];
  uint32_t atom = 0, arity = 0;
  if (c.tag == Tag::Fun) {
    atom = c.atom;
  } else if (c.tag == Tag::Str) {
    atom = heap_[c.ref].atom;
    arity = heap_[c.ref].arity;
  } else if (c.tag == Tag::Ref) {
    fail(ErrorCode::Inst, "goal is an unbound variable");
  } else {
    fail(ErrorCode::Type, "callable expected, found " + writeTerm(*toTerm(g)));
  }
  ++stats_.inferences;
  const uint32_t pi = lookupPred(atom, arity);
  if (pi == kNoPred) {
    auto it = anyArity_.find(atom);
    if (it == anyArity_.end())
      fail(ErrorCode::UnknownPred, "unknown procedure " + atoms_[atom] + "/" + std::to_string(arity));
    Foreign fn = it->second;
    std::vector<size_t> args(arity);
    for (uint32_t i = 0; i < arity; ++i) args[i] = c.ref + 1 + i;
    return fn(*this, args);
  }
  switch (preds_[pi].kind) {
    case PredKind::Builtin:
      return callBuiltin(preds_[pi].builtin, g, f, frameIdx, cont);
    case PredKind::Foreign: {
      Foreign fn = preds_[pi].foreign;
      std::vector<size_t> args(arity);
      for (uint32_t i = 0; i < arity; ++i) args[i] = c.ref + 1 + i;
      return fn(*this, args);
    }
    case PredKind::User:
      if (preds_[pi].clauses.empty())
        fail(ErrorCode::UnknownPred, "unknown procedure " + atoms_[atom] + "/" + std::to_string(arity));
      if (f.depth + 1 > opts_.maxDepth)
        fail(ErrorCode::Depth, "recursion depth limit " + std::to_string(opts_.maxDepth) + " exceeded");
      return tryClauses(g, pi, 0, cont, frameIdx, f.depth + 1);
  }
  return false;
}

bool Engine::callBuiltin(Builtin b, size_t goal, const Frame& f, int64_t frameIdx, int64_t& cont) {
  (void)frameIdx;
  switch (b) {
    case Builtin::True:
      return true;
    case Builtin::Fail:
      return false;
    case Builtin::Conj: {
      const int64_t rest = pushFrame(argAddr(goal, 1), cont, f.caller, f.depth, f.cutBarrier);
      cont = pushFrame(argAddr(goal, 0), rest, f.caller, f.depth, f.cutBarrier);
      return true;
    }
    case Builtin::Disj: {
      const size_t left = deref(argAddr(goal, 0));
      const Cell& lc = heap_[left];
      const bool ite = lc.tag == Tag::Str && atoms_[heap_[lc.ref].atom] == "->" && heap_[lc.ref].arity == 2;
      const auto h = static_cast<uint32_t>(cps_.size());
      ChoicePoint cp;
      cp.goal = argAddr(goal, 1);
      cp.cont = cont;
      cp.caller = f.caller;
      cp.depth = f.depth;
      cp.cutBarrier = f.cutBarrier;
      pushChoice(cp);
      if (ite) {
        const int64_t then = pushFrame(argAddr(left, 1), cont, f.caller, f.depth, f.cutBarrier);
        const int64_t commit = pushCut(h, then);
        cont = pushFrame(argAddr(left, 0), commit, f.caller, f.depth, h + 1);
      } else {
        cont = pushFrame(left, cont, f.caller, f.depth, f.cutBarrier);
      }
      return true;
    }
    case Builtin::IfThen: {
      const auto h = static_cast<uint32_t>(cps_.size());
      const int64_t then = pushFrame(argAddr(goal, 1), cont, f.caller, f.depth, f.cutBarrier);
      const int64_t commit = pushCut(h, then);
      cont = pushFrame(argAddr(goal, 0), commit, f.caller, f.depth, h);
      return true;
    }
    case Builtin::Not: {
      const auto h = static_cast<uint32_t>(cps_.size());
      ChoicePoint cp;
      cp.goal = trueCell_;
      cp.cont = cont;
      cp.caller = f.caller;
      cp.depth = f.depth;
      cp.cutBarrier = f.cutBarrier;
      pushChoice(cp);
      const int64_t no = pushFrame(failCell_, -1, f.caller, f.depth, f.cutBarrier);
      const int64_t commit = pushCut(h, no);
      cont = pushFrame(argAddr(goal, 0), commit, f.caller, f.depth, h + 1);
      return true;
    }
    case Builtin::Call:
      cont = pushFrame(argAddr(goal, 0), cont, f.caller, f.depth, static_cast<uint32_t>(cps_.size()));
      return true;
    case Builtin::Cut:
      if (cps_.size() > f.cutBarrier) cps_.resize(f.cutBarrier);
      return true;
    case Builtin::Is: {
      const Num v = eval(argAddr(goal, 1));
      const size_t lhs = argAddr(goal, 0);
      return unify(lhs, v.isFloat ? newFloat(v.f) : newInt(v.i));
    }
    case Builtin::Unify:
      return unify(argAddr(goal, 0), argAddr(goal, 1));
    case Builtin::NotUnify: {
      const size_t mark = trail_.size();
      const bool ok = unify(argAddr(goal, 0), argAddr(goal, 1));
      undoTrail(mark);
      return !ok;
    }
    case Builtin::Identical:
      return identical(argAddr(goal, 0), argAddr(goal, 1));
    case Builtin::NotIdentical:
      return !identical(argAddr(goal, 0), argAddr(goal, 1));
    case Builtin::ArithEq:
    case Builtin::ArithNe:
    case Builtin::Lt:
    case Builtin::Gt:
    case Builtin::Le:
    case Builtin::Ge:
      return compareNum(b, eval(argAddr(goal, 0)), eval(argAddr(goal, 1)));
  }
  return false;
}

bool Engine::compareNum(Builtin op, const Num& a, const Num& b) {
  if (!a.isFloat && !b.isFloat) {
    switch (op) {
      case Builtin::ArithEq: return a.i == b.i;
      case Builtin::ArithNe: return a.i != b.i;
      case Builtin::Lt: return a.i < b.i;
      case Builtin::Gt: return a.i > b.i;
      case Builtin::Le: return a.i <= b.i;
      case Builtin::Ge: return a.i >= b.i;
      default: return false;
    }
  }
  const double x = a.isFloat ? a.f : static_cast<double>(a.i);
  const double y = b.isFloat ? b.f : static_cast<double>(b.i);
  switch (op) {
    case Builtin::ArithEq: return x == y;
    case Builtin::ArithNe: return x != y;
    case Builtin::Lt: return x < y;
    case Builtin::Gt: return x > y;
    case Builtin::Le: return x <= y;
    case Builtin::Ge: return x >= y;
    default: return false;
  }
}

Int128 Engine::checked(Int128 v) const {
  if (opts_.checkOverflow) {
    const Int128 lim = static_cast<Int128>(1) << 60;
    if (v < -lim || v >= lim) fail(ErrorCode::Overflow, "integer overflow: " + int128ToString(v) + " exceeds 61 bits");
  }
  return v;
}

Engine::Num Engine::eval(size_t a) const {
  a = deref(a);
  const Cell& c = heap_[a];
  switch (c.tag) {
    case Tag::Int:
      return {false, checked(c.ival), 0.0};
    case Tag::Flt:
      return {true, 0, c.fval};
    case Tag::Ref:
      fail(ErrorCode::Unbound, "unbound variable in arithmetic expression");
    case Tag::Fun: {
      const std::string& n = atoms_[c.atom];
      if (n == "inf" || n == "infinite") return {true, 0, std::numeric_limits<double>::infinity()};
      if (n == "nan") return {true, 0, std::numeric_limits<double>::quiet_NaN()};
      if (n == "pi") return {true, 0, M_PI};
      fail(ErrorCode::Type, "not an evaluable: " + quoteAtom(n) + "/0");
    }
    case Tag::Str:
      return evalStruct(heap_[c.ref].atom, heap_[c.ref].arity, c.ref);
  }
  return {};
}

Engine::Num Engine::evalStruct(uint32_t atom, uint32_t arity, size_t f) const {
  auto notEvaluable = [&]() -> Num {
    fail(ErrorCode::Type, "not an evaluable: " + quoteAtom(atoms_[atom]) + "/" + std::to_string(arity));
  };
  auto needInt = [&](const Num& n) {
    if (n.isFloat) fail(ErrorCode::Type, "integer expected in " + quoteAtom(atoms_[atom]) + "/" + std::to_string(arity));
    return n.i;
  };
  auto asDouble = [](const Num& n) { return n.isFloat ? n.f : static_cast<double>(n.i); };
  auto flt = [](double d) { return Num{true, 0, d}; };

  if (arity == 1) {
    const uint8_t op = arith1_[atom];
    if (op == kNone) return notEvaluable();
    const Num x = eval(f + 1);
    switch (op) {
      case kNeg: return x.isFloat ? flt(-x.f) : Num{false, checked(wrapSub(0, x.i)), 0};
      case kPos: return x;
      case kAbs: return x.isFloat ? flt(std::fabs(x.f)) : Num{false, checked(x.i < 0 ? wrapSub(0, x.i) : x.i), 0};
      case kSign:
        return x.isFloat ? flt(x.f > 0 ? 1.0 : x.f < 0 ? -1.0 : x.f) : Num{false, x.i > 0 ? 1 : x.i < 0 ? -1 : 0, 0};
      case kNot: return {false, ~needInt(x), 0};
      case kFloat: return flt(asDouble(x));
      case kFloat32: return flt(static_cast<double>(static_cast<float>(asDouble(x))));
      case kTruncate:
      case kInteger: {
        if (!x.isFloat) return x;
        double d = op == kTruncate ? std::trunc(x.f) : std::round(x.f);
        if (!std::isfinite(d) || std::fabs(d) >= 0x1p126)
          fail(ErrorCode::Type, "cannot convert " + std::to_string(x.f) + " to an integer");
        return {false, checked(static_cast<Int128>(d)), 0};
      }
      default: return notEvaluable();
    }
  }
  if (arity != 2) return notEvaluable();
  const uint8_t op = arith2_[atom];
  if (op == kNone) return notEvaluable();
  const Num x = eval(f + 1);
  const Num y = eval(f + 2);
  const bool anyFloat = x.isFloat || y.isFloat;
  switch (op) {
    case kAdd: return anyFloat ? flt(asDouble(x) + asDouble(y)) : Num{false, checked(wrapAdd(x.i, y.i)), 0};
    case kSub: return anyFloat ? flt(asDouble(x) - asDouble(y)) : Num{false, checked(wrapSub(x.i, y.i)), 0};
    case kMul: return anyFloat ? flt(asDouble(x) * asDouble(y)) : Num{false, checked(wrapMul(x.i, y.i)), 0};
    case kFDiv:
      if (!anyFloat && y.i == 0) fail(ErrorCode::Div0, "division by zero");
      return flt(asDouble(x) / asDouble(y));
    case kMin:
      if (!anyFloat) return x.i <= y.i ? x : y;
      return asDouble(x) <= asDouble(y) ? x : y;
    case kMax:
      if (!anyFloat) return x.i >= y.i ? x : y;
      return asDouble(x) >= asDouble(y) ? x : y;
    case kPow: return flt(std::pow(asDouble(x), asDouble(y)));
    default: break;
  }
  const Int128 a = needInt(x);
  const Int128 b = needInt(y);
  switch (op) {
    case kIDiv:
    case kRem:
    case kMod:
    case kDiv: {
      if (b == 0) fail(ErrorCode::Div0, "integer division by zero");
      const Int128 q = a / b;
      const Int128 r = a % b;
      if (op == kIDiv) return {false, checked(q), 0};
      if (op == kRem) return {false, r, 0};
      const bool adjust = r != 0 && ((r < 0) != (b < 0));
      if (op == kMod) return {false, adjust ? r + b : r, 0};
      return {false, checked(adjust ? q - 1 : q), 0};
    }
    case kAnd: return {false, a & b, 0};
    case kOr: return {false, a | b, 0};
    case kXor: return {false, a ^ b, 0};
    case kShl: return {false, checked(shiftLeft(a, b)), 0};
    case kShr: return {false, shiftRight(a, b), 0};
    default: return notEvaluable();
  }
}

Engine::Query& Engine::topQuery(size_t q, const char* op) {
  if (queries_.empty() || queries_.back().id != q)
    fail(ErrorCode::State, std::string(op) + " on query " + std::to_string(q) + " which is not the innermost open query");
  return queries_.back();
}

size_t Engine::openQuery(const std::string& pred, const std::vector<QArg>& args) {
  Query q;
  q.id = nextQueryId_++;
  q.heapMark = heap_.size();
  q.trailMark = trail_.size();
  q.cpBase = cps_.size();
  q.arenaMark = arena_.size();
  const uint32_t atom = intern(pred);
  reserveCells(2 + args.size());
  if (args.empty()) {
    Cell c;
    c.tag = Tag::Fun;
    c.atom = atom;
    q.goal = heap_.size();
    heap_.push_back(c);
  } else {
    q.goal = heap_.size();
    Cell s;
    s.tag = Tag::Str;
    s.ref = q.goal + 1;
    heap_.push_back(s);
    Cell f;
    f.tag = Tag::Fun;
    f.atom = atom;
    f.arity = static_cast<uint32_t>(args.size());
    heap_.push_back(f);
    for (const QArg& a : args) {
      Cell c;
      switch (a.kind) {
        case QArg::Kind::Int:
          c.tag = Tag::Int;
          c.ival = a.ival;
          break;
        case QArg::Kind::Float:
          c.tag = Tag::Flt;
          c.fval = a.fval;
          break;
        case QArg::Kind::Var:
          c.tag = Tag::Ref;
          c.ref = heap_.size();
          break;
      }
      heap_.push_back(c);
    }
  }
  queries_.push_back(std::move(q));
  return queries_.back().id;
}

size_t Engine::openQuery(const Term& goal) {
  Query q;
  q.id = nextQueryId_++;
  q.heapMark = heap_.size();
  q.trailMark = trail_.size();
  q.cpBase = cps_.size();
  q.arenaMark = arena_.size();
  std::unordered_map<std::string, size_t> vars;
  q.goal = heap_.size();
  push(Cell{});
  fill(q.goal, goal, heap_, vars, *this);
  for (auto& [name, addr] : vars) q.vars.emplace_back(name, addr);
  queries_.push_back(std::move(q));
  return queries_.back().id;
}

size_t Engine::queryArg(size_t q, size_t i) const {
  for (const Query& query : queries_)
    if (query.id == q) return argAddr(query.goal, i);
  fail(ErrorCode::State, "query " + std::to_string(q) + " is not open");
}

size_t Engine::queryVar(size_t q, const std::string& name) const {
  for (const Query& query : queries_) {
    if (query.id != q) continue;
    for (const auto& [n, addr] : query.vars)
      if (n == name) return addr;
    fail(ErrorCode::State, "query has no variable " + name);
  }
  fail(ErrorCode::State, "query " + std::to_string(q) + " is not open");
}

bool Engine::nextSolution(size_t q) {
  Query& top = topQuery(q, "nextSolution");
  if (top.done) return false;
  const bool retry = top.started;
  top.started = true;
  Query copy = top;
  const bool ok = solve(copy, retry);
  queries_.back().done = !ok;
  return ok;
}

bool Engine::solve(Query& q, bool retry) {
  int64_t cont = -1;
  if (!retry) {
    cont = pushFrame(q.goal, -1, -1, 0, static_cast<uint32_t>(cps_.size()));
  } else if (!backtrack(q, cont)) {
    return false;
  }
  while (cont >= 0) {
    const int64_t idx = cont;
    const Frame& f = arena_[idx];
    cont = f.next;
    if (f.isCut) {
      if (cps_.size() > f.cutBarrier) cps_.resize(f.cutBarrier);
      continue;
    }
    bool ok = false;
    try {
      ok = step(idx, cont);
    } catch (const Error& e) {
      throw Error(e.code(), e.message() + "\n  prolog goals: " + goalStack(idx));
    }
    if (!ok && !backtrack(q, cont)) return false;
  }
  return true;
}

void Engine::closeQuery(size_t q) {
  const Query top = topQuery(q, "closeQuery");
  queries_.pop_back();
  undoTrail(top.trailMark);
  heap_.resize(top.heapMark);
  if (cps_.size() > top.cpBase) cps_.resize(top.cpBase);
  arena_.resize(top.arenaMark);
  if (queries_.empty()) reset();
}

void Engine::reset() {
  queries_.clear();
  trail_.clear();
  cps_.clear();
  arena_.clear();
  heap_.resize(base_);
}

void Engine::attachMemory(MemoryPort* mem) {
  mem_ = mem;
  auto sizeArg = [](Engine& e, size_t a, bool isFloat) {
    const Int128 s = e.intArg(a);
    if (isFloat ? (s != 4 && s != 8) : (s != 1 && s != 2 && s != 4 && s != 8))
      fail(ErrorCode::Type, "bad access size " + int128ToString(s));
    return static_cast<int>(s);
  };
  registerForeign("rdPtrInt", 3, [this, sizeArg](Engine& e, std::span<const size_t> a) {
    const auto addr = static_cast<int64_t>(e.intArg(a[0]));
    const uint64_t v = mem_->loadInt(addr, sizeArg(e, a[1], false));
    return e.unify(a[2], e.newInt(static_cast<Int128>(v)));
  });
  registerForeign("wrPtrInt", 3, [this, sizeArg](Engine& e, std::span<const size_t> a) {
    const auto addr = static_cast<int64_t>(e.intArg(a[0]));
    const int size = sizeArg(e, a[1], false);
    mem_->storeInt(addr, size, static_cast<uint64_t>(e.intArg(a[2])));
    return true;
  });
  registerForeign("rdPtrFloat", 3, [this, sizeArg](Engine& e, std::span<const size_t> a) {
    const auto addr = static_cast<int64_t>(e.intArg(a[0]));
    const double v = mem_->loadFloat(addr, sizeArg(e, a[1], true));
    return e.unify(a[2], e.newFloat(v));
  });
  registerForeign("wrPtrFloat", 3, [this, sizeArg](Engine& e, std::span<const size_t> a) {
    const auto addr = static_cast<int64_t>(e.intArg(a[0]));
    const int size = sizeArg(e, a[1], true);
    mem_->storeFloat(addr, size, e.floatArg(a[2]));
    return true;
  });
}

}  // namespace c2pl
