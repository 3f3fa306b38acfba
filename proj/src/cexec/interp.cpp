#include "c2pl/cexec/interp.hpp"

#include <pthread.h>

#include <charconv>
#include <cstring>
#include <exception>
#include <sstream>

#include "c2pl/numfmt.hpp"

namespace c2pl {

bool TraceEvent::operator==(const TraceEvent& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::PrintFloat) return std::memcmp(&fval, &o.fval, sizeof fval) == 0;
  return ival == o.ival;
}

std::string TraceEvent::str() const {
  switch (kind) {
    case Kind::PrintInt: return "I " + std::to_string(ival);
    case Kind::PrintFloat: return "F " + formatDouble(fval);
    case Kind::Putchar: return "C " + std::to_string(ival);
  }
  return "?";
}

std::string traceText(const Trace& t) {
  std::string out;
  for (const auto& e : t) out += e.str() + "\n";
  return out;
}

std::vector<int64_t> parseStdin(const std::string& text) {
  std::vector<int64_t> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) fail(ErrorCode::Syntax, "stdin: not an integer: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

namespace {

struct ThreadJob {
  const std::function<void()>* fn;
  std::exception_ptr error;
};

void* threadMain(void* arg) {
  auto* job = static_cast<ThreadJob*>(arg);
  try {
    (*job->fn)();
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

bool truthy(const CType& t, CValue v) { return t.isFloating() ? v.f != 0.0 : v.i != 0; }

}  // namespace

void runWithLargeStack(const std::function<void()>& fn) {
  ThreadJob job{&fn, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, size_t{1} << 30);
  pthread_t th;
  if (pthread_create(&th, &attr, threadMain, &job) != 0) {
    pthread_attr_destroy(&attr);
    fn();  // fall back to the current thread
    return;
  }
  pthread_join(th, nullptr);
  pthread_attr_destroy(&attr);
  if (job.error) std::rethrow_exception(job.error);
}

Interpreter::Interpreter(const TranslationUnit& tu, SimMemory& mem, RunIo& io)
    : tu_(tu), mem_(mem), io_(io), globals_(computeGlobalLayout(tu)) {}

int64_t Interpreter::globalAddress(const std::string& name) const {
  auto it = globals_.address.find(name);
  if (it == globals_.address.end()) fail(ErrorCode::Type, "unknown global '" + name + "'");
  return it->second;
}

std::vector<std::string> Interpreter::callStack() const {
  std::vector<std::string> out;
  for (const auto& f : frames_) out.push_back(f.fn->name);
  return out;
}

void Interpreter::initGlobals() {
  for (const auto& g : tu_.globals)
    if (g.init) initialize(globalAddress(g.name), g.type, *g.init);
}

const Interpreter::FrameLayout& Interpreter::layoutOf(const FuncDef& f) {
  auto it = layouts_.find(&f);
  if (it != layouts_.end()) return it->second;
  FrameLayout fl;
  auto add = [&](const VarDecl& v) {
    Layout l = tu_.records.layout(v.type);
    fl.size = (fl.size + l.align - 1) / l.align * l.align;
    fl.offset[v.name] = fl.size;
    fl.size += std::max<int64_t>(l.size, 1);
  };
  for (const auto& p : f.params) add(p);
  for (const auto& l : f.locals) add(l);
  return layouts_.emplace(&f, std::move(fl)).first->second;
}

CValue Interpreter::call(const std::string& name, const std::vector<CValue>& args) {
  if (hook_)
    if (auto r = hook_(name, args)) return *r;
  if (const FuncDef* f = tu_.findFunction(name)) return callUser(*f, args);
  if (auto r = callBuiltin(name, args)) return *r;
  fail(ErrorCode::UnknownFunc, "call to unknown function '" + name + "'");
}

CValue Interpreter::callAddress(int64_t addr, const std::vector<CValue>& args) {
  auto name = functionAtAddress(tu_, addr);
  if (!name) fail(ErrorCode::BadFunc, "call through " + hexAddress(addr) + ", which is not a function address");
  return call(*name, args);
}

std::optional<CValue> Interpreter::callBuiltin(const std::string& name, const std::vector<CValue>& args) {
  CValue r;
  if (name == "print_int") {
    io_.trace.push_back({TraceEvent::Kind::PrintInt, args.at(0).i, 0.0});
  } else if (name == "print_float") {
    io_.trace.push_back({TraceEvent::Kind::PrintFloat, 0, args.at(0).f});
  } else if (name == "putchar") {
    r.i = args.at(0).i & 0xFF;
    io_.trace.push_back({TraceEvent::Kind::Putchar, r.i, 0.0});
  } else if (name == "read_int") {
    if (io_.input.empty()) fail(ErrorCode::StdinExhausted, "read_int: no more input");
    r.i = canonicalInt(CType::intType(), io_.input.front());
    io_.input.pop_front();
  } else if (name == "memset") {
    mem_.fill(args.at(0).i, static_cast<uint8_t>(args.at(1).i), args.at(2).i);
    r.i = args[0].i;
  } else if (name == "memcpy") {
    mem_.copy(args.at(0).i, args.at(1).i, args.at(2).i);
    r.i = args[0].i;
  } else if (name == "malloc") {
    r.i = mem_.malloc(args.at(0).i);
  } else if (name == "free") {
    // bump allocator: nothing to release
  } else {
    return std::nullopt;
  }
  return r;
}

CValue Interpreter::callUser(const FuncDef& f, const std::vector<CValue>& args) {
  if (static_cast<int>(frames_.size()) >= maxDepth_)
    fail(ErrorCode::Depth, "C call depth limit of " + std::to_string(maxDepth_) + " exceeded in '" + f.name + "'");
  if (args.size() != f.params.size()) fail(ErrorCode::Type, "wrong argument count calling '" + f.name + "'");
  const FrameLayout& fl = layoutOf(f);
  const int64_t mark = mem_.stackTop();
  Frame fr;
  fr.fn = &f;
  fr.layout = &fl;
  fr.base = mem_.stackAlloc(fl.size, 16);
  for (size_t i = 0; i < args.size(); ++i) store(fr.base + fl.offset.at(f.params[i].name), f.params[i].type, args[i]);
  frames_.push_back(fr);
  struct Guard {
    Interpreter* self;
    int64_t mark;
    ~Guard() {
      self->frames_.pop_back();
      self->mem_.stackRelease(mark);
    }
  } guard{this, mark};
  execList(f.body);
  return frames_.back().ret;
}

int Interpreter::runMain() {
  const FuncDef* m = tu_.findFunction("main");
  if (!m) fail(ErrorCode::UnknownFunc, "program has no main()");
  std::vector<CValue> args(m->params.size());
  CValue r = call("main", args);
  return static_cast<int>(r.i & 0xFF);
}

int64_t Interpreter::address(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var: {
      if (e.scope == VarScope::Global) return globalAddress(e.name);
      const Frame& fr = frames_.back();
      auto it = fr.layout->offset.find(e.name);
      if (it == fr.layout->offset.end()) fail(ErrorCode::Type, "unknown local '" + e.name + "' in " + fr.fn->name);
      return fr.base + it->second;
    }
    case ExprKind::Deref:
      return eval(*e.kids[0]).i;
    case ExprKind::Index: {
      const Expr& base = *e.kids[0];
      int64_t b = base.type.isArray() ? address(base) : eval(base).i;
      int64_t idx = eval(*e.kids[1]).i;
      return static_cast<int64_t>(static_cast<uint64_t>(b) +
                                  static_cast<uint64_t>(idx) * static_cast<uint64_t>(tu_.records.sizeOf(e.type)));
    }
    case ExprKind::Member: {
      const Expr& base = *e.kids[0];
      return address(base) + tu_.records.fieldOffset(base.type.tag, e.name);
    }
    default:
      fail(ErrorCode::Type, "expression is not a place");
  }
}

CValue Interpreter::load(int64_t addr, const CType& t) {
  CValue v;
  if (t.isInteger()) {
    const int size = static_cast<int>(tu_.records.sizeOf(t));
    v.i = canonicalInt(t, static_cast<int64_t>(mem_.loadInt(addr, size)));
  } else if (t.isPointer()) {
    v.i = static_cast<int64_t>(mem_.loadInt(addr, 8));
  } else if (t.isFloating()) {
    v.f = mem_.loadFloat(addr, t.kind == CType::Kind::Float ? 4 : 8);
  } else {
    v.i = addr;  // aggregates evaluate to their address
  }
  return v;
}

void Interpreter::store(int64_t addr, const CType& t, CValue v) {
  if (t.isInteger() || t.isPointer()) {
    mem_.storeInt(addr, static_cast<int>(tu_.records.sizeOf(t)), static_cast<uint64_t>(v.i));
  } else if (t.isFloating()) {
    mem_.storeFloat(addr, t.kind == CType::Kind::Float ? 4 : 8, v.f);
  } else {
    mem_.copy(addr, v.i, tu_.records.sizeOf(t));
  }
}

void Interpreter::initialize(int64_t addr, const CType& t, const Expr& init) {
  if (init.kind != ExprKind::InitList) {
    store(addr, t, eval(init));
    return;
  }
  mem_.fill(addr, 0, tu_.records.sizeOf(t));
  if (t.isArray()) {
    const int64_t es = tu_.records.sizeOf(*t.elem);
    for (size_t i = 0; i < init.kids.size(); ++i) initialize(addr + es * static_cast<int64_t>(i), *t.elem, *init.kids[i]);
  } else if (t.isRecord()) {
    const RecordInfo& r = tu_.records.get(t.tag);
    for (size_t i = 0; i < init.kids.size(); ++i) initialize(addr + r.fields[i].offset, r.fields[i].type, *init.kids[i]);
  } else if (!init.kids.empty()) {
    initialize(addr, t, *init.kids[0]);
  }
}

CValue Interpreter::evalBinary(const Expr& e) {
  const BinOp op = e.binOp;
  const Expr& a = *e.kids[0];
  const Expr& b = *e.kids[1];
  if (op == BinOp::LogAnd || op == BinOp::LogOr) {
    CValue r;
    const bool x = truthy(a.type, eval(a));
    if (op == BinOp::LogAnd ? !x : x) {
      r.i = x ? 1 : 0;
      return r;
    }
    r.i = truthy(b.type, eval(b)) ? 1 : 0;
    return r;
  }
  CValue x = eval(a);
  CValue y = eval(b);
  CValue r;
  if (e.type.isPointer()) {
    const auto size = static_cast<uint64_t>(tu_.records.sizeOf(e.type.pointee()));
    const uint64_t off = static_cast<uint64_t>(y.i) * size;
    r.i = static_cast<int64_t>(op == BinOp::Add ? static_cast<uint64_t>(x.i) + off : static_cast<uint64_t>(x.i) - off);
    return r;
  }
  if (op == BinOp::Sub && a.type.isPointer()) {
    const int64_t size = tu_.records.sizeOf(a.type.pointee());
    r.i = static_cast<int64_t>(static_cast<uint64_t>(x.i) - static_cast<uint64_t>(y.i)) / size;
    return r;
  }
  if (isRelational(op)) {
    r.i = a.type.isFloating() ? evalFloatCompare(op, x.f, y.f) : evalIntBinary(op, a.type, x.i, y.i);
    return r;
  }
  if (e.type.isFloating()) {
    r.f = evalFloatBinary(op, e.type, x.f, y.f);
    return r;
  }
  r.i = evalIntBinary(op, e.type, x.i, y.i);
  return r;
}

CValue Interpreter::eval(const Expr& e) {
  CValue r;
  switch (e.kind) {
    case ExprKind::IntConst:
      r.i = e.ival;
      return r;
    case ExprKind::FloatConst:
      r.f = e.fval;
      return r;
    case ExprKind::Var:
    case ExprKind::Index:
    case ExprKind::Member:
      return load(address(e), e.type);
    case ExprKind::Deref:
      return load(eval(*e.kids[0]).i, e.type);
    case ExprKind::FuncRef:
      r.i = functionAddress(tu_, e.name);
      return r;
    case ExprKind::AddrOf:
    case ExprKind::Decay:
      r.i = address(*e.kids[0]);
      return r;
    case ExprKind::Unary: {
      const Expr& k = *e.kids[0];
      CValue v = eval(k);
      if (e.unOp == UnOp::LogNot) {
        r.i = truthy(k.type, v) ? 0 : 1;
      } else if (k.type.isFloating()) {
        r.f = -v.f;
      } else {
        r.i = evalIntUnary(e.unOp, e.type, v.i);
      }
      return r;
    }
    case ExprKind::Binary:
      return evalBinary(e);
    case ExprKind::Assign: {
      const int64_t addr = address(*e.kids[0]);
      CValue v = eval(*e.kids[1]);
      store(addr, e.kids[0]->type, v);
      return v;
    }
    case ExprKind::CompoundAssign: {
      const Expr& place = *e.kids[0];
      const CType& lt = place.type;
      const int64_t addr = address(place);
      CValue rhs = eval(*e.kids[1]);
      CValue old = load(addr, lt);
      CValue res;
      if (lt.isPointer()) {
        const auto size = static_cast<uint64_t>(tu_.records.sizeOf(lt.pointee()));
        const uint64_t off = static_cast<uint64_t>(rhs.i) * size;
        res.i = static_cast<int64_t>(e.binOp == BinOp::Add ? static_cast<uint64_t>(old.i) + off
                                                           : static_cast<uint64_t>(old.i) - off);
      } else {
        CValue a = convertValue(lt, e.opType, old);
        CValue t;
        if (e.opType.isFloating()) t.f = evalFloatBinary(e.binOp, e.opType, a.f, rhs.f);
        else t.i = evalIntBinary(e.binOp, e.opType, a.i, rhs.i);
        res = convertValue(e.opType, lt, t);
      }
      store(addr, lt, res);
      return res;
    }
    case ExprKind::IncDec: {
      const Expr& place = *e.kids[0];
      const CType& t = place.type;
      const int64_t addr = address(place);
      CValue old = load(addr, t);
      CValue nv;
      if (t.isPointer()) {
        const auto size = static_cast<uint64_t>(tu_.records.sizeOf(t.pointee()));
        nv.i = static_cast<int64_t>(e.isInc ? static_cast<uint64_t>(old.i) + size : static_cast<uint64_t>(old.i) - size);
      } else if (t.isFloating()) {
        nv.f = evalFloatBinary(e.isInc ? BinOp::Add : BinOp::Sub, t, old.f, 1.0);
      } else {
        nv.i = evalIntBinary(e.isInc ? BinOp::Add : BinOp::Sub, t, old.i, 1);
      }
      store(addr, t, nv);
      return e.isPrefix ? nv : old;
    }
    case ExprKind::Cast: {
      const Expr& k = *e.kids[0];
      CValue v = eval(k);
      if (!e.type.isScalar() || !k.type.isScalar()) return v;
      return convertValue(k.type, e.type, v);
    }
    case ExprKind::Call: {
      std::vector<CValue> args;
      args.reserve(e.kids.size());
      for (const auto& k : e.kids) args.push_back(eval(*k));
      return call(e.name, args);
    }
    case ExprKind::IndCall: {
      CValue fp = eval(*e.kids[0]);
      std::vector<CValue> args;
      for (size_t i = 1; i < e.kids.size(); ++i) args.push_back(eval(*e.kids[i]));
      return callAddress(fp.i, args);
    }
    case ExprKind::Ternary:
      return truthy(e.kids[0]->type, eval(*e.kids[0])) ? eval(*e.kids[1]) : eval(*e.kids[2]);
    case ExprKind::InitList:
      fail(ErrorCode::Type, "initializer list used as a value");
  }
  return r;
}

Interpreter::Flow Interpreter::execList(const StmtList& list) {
  for (const auto& s : list) {
    Flow f = exec(*s);
    if (f != Flow::Normal) return f;
  }
  return Flow::Normal;
}

Interpreter::Flow Interpreter::exec(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Expr:
      eval(*s.expr);
      return Flow::Normal;
    case StmtKind::Decl: {
      const Frame& fr = frames_.back();
      const int64_t addr = fr.base + fr.layout->offset.at(s.name);
      if (s.expr) initialize(addr, s.declType, *s.expr);
      else mem_.fill(addr, 0, tu_.records.sizeOf(s.declType));
      return Flow::Normal;
    }
    case StmtKind::If:
      return truthy(s.expr->type, eval(*s.expr)) ? execList(s.body) : execList(s.alt);
    case StmtKind::While:
    case StmtKind::For: {
      if (s.kind == StmtKind::For) {
        Flow f = execList(s.init);
        if (f != Flow::Normal) return f;
      }
      while (true) {
        if (execList(s.pre) == Flow::Return) return Flow::Return;
        if (s.expr && !truthy(s.expr->type, eval(*s.expr))) break;
        Flow f = execList(s.body);
        if (f == Flow::Break) break;
        if (f == Flow::Return) return f;
        execList(s.step);
      }
      return Flow::Normal;
    }
    case StmtKind::DoWhile:
      while (true) {
        Flow f = execList(s.body);
        if (f == Flow::Break) break;
        if (f == Flow::Return) return f;
        execList(s.pre);
        if (!truthy(s.expr->type, eval(*s.expr))) break;
      }
      return Flow::Normal;
    case StmtKind::Switch: {
      const int64_t v = eval(*s.expr).i;
      size_t start = s.cases.size();
      for (size_t i = 0; i < s.cases.size(); ++i)
        if (!s.cases[i].isDefault && s.cases[i].value == v) start = i;
      if (start == s.cases.size())
        for (size_t i = 0; i < s.cases.size(); ++i)
          if (s.cases[i].isDefault) start = i;
      for (size_t i = start; i < s.cases.size(); ++i) {
        Flow f = execList(s.cases[i].body);
        if (f == Flow::Break) return Flow::Normal;
        if (f != Flow::Normal) return f;
      }
      return Flow::Normal;
    }
    case StmtKind::Break:
      return Flow::Break;
    case StmtKind::Continue:
      return Flow::Continue;
    case StmtKind::Return:
      if (s.expr) frames_.back().ret = eval(*s.expr);
      return Flow::Return;
    case StmtKind::Block:
      return execList(s.body);
  }
  return Flow::Normal;
}

RunResult runOriginal(const TranslationUnit& tu, const std::vector<int64_t>& input) {
  RunResult res;
  RunIo io;
  io.input.assign(input.begin(), input.end());
  try {
    SimMemory mem(computeGlobalLayout(tu).end);
    Interpreter in(tu, mem, io);
    runWithLargeStack([&] {
      in.initGlobals();
      res.exitCode = in.runMain();
    });
  } catch (const Error& e) {
    res.error = e.code();
    res.errorMessage = e.what();
    res.exitCode = 3;
  }
  res.trace = std::move(io.trace);
  return res;
}

}  // namespace c2pl
