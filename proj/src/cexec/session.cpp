#include "c2pl/cexec/session.hpp"

#include "c2pl/error.hpp"

namespace c2pl {

namespace {

bool isUnsignedLike(const CType& t) { return t.isPointer() || (t.isInteger() && !t.isSigned()); }

std::string joined(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : " > ") + n;
  return s;
}

}  // namespace

Session::Session(const TranslationUnit& tu, const Translation& t, SessionOptions opts)
    : tu_(tu), tr_(t), engine_(opts.engine) {
  mem_ = std::make_unique<SimMemory>(computeGlobalLayout(tu).end);
  interp_ = std::make_unique<Interpreter>(tu, *mem_, io_);
  engine_.setTrace(opts.engineTrace);
  engine_.attachMemory(mem_.get());
  engine_.consult(t.program);
  registerForeign();
  interp_->setCallHook([this](const std::string& name, const std::vector<CValue>& args) -> std::optional<CValue> {
    if (!tr_.translated.count(name)) return std::nullopt;
    const PredicateSpec* spec = tr_.manifest.find(name);
    const FuncDef* f = tu_.findFunction(name);
    if (!spec || !f) return std::nullopt;
    return callPredicate(*spec, *f, args);
  });
}

Session::~Session() = default;

QArg Session::toQuery(const CType& t, CValue v) const {
  if (t.isFloating()) return QArg::flt(v.f);
  if (isUnsignedLike(t)) return QArg::integer(static_cast<Int128>(static_cast<uint64_t>(v.i)));
  return QArg::integer(v.i);
}

size_t Session::toHeap(const CType& t, CValue v) {
  if (t.isFloating()) return engine_.newFloat(v.f);
  if (isUnsignedLike(t)) return engine_.newInt(static_cast<Int128>(static_cast<uint64_t>(v.i)));
  return engine_.newInt(v.i);
}

CValue Session::fromProlog(size_t a, const CType& t) const {
  CValue v;
  if (t.isVoid()) return v;
  if (t.isFloating()) {
    v.f = engine_.floatArg(a);
    if (t.kind == CType::Kind::Float) v.f = roundToFloat32(v.f);
    return v;
  }
  const Int128 x = engine_.intArg(a);
  v.i = canonicalInt(t, static_cast<int64_t>(static_cast<uint64_t>(x)));
  return v;
}

CValue Session::callPredicate(const PredicateSpec& spec, const FuncDef& f, const std::vector<CValue>& args) {
  const int64_t mark = mem_->stackTop();
  std::vector<QArg> q;
  for (size_t i = 0; i < spec.params.size(); ++i) {
    const CType& t = f.params[i].type;
    if (spec.params[i].kind == ParamSpec::Kind::Address) {
      const int64_t a = mem_->stackAlloc(spec.params[i].size, spec.params[i].align);
      if (t.isFloating()) mem_->storeFloat(a, static_cast<int>(spec.params[i].size), args[i].f);
      else mem_->storeInt(a, static_cast<int>(spec.params[i].size), static_cast<uint64_t>(args[i].i));
      q.push_back(QArg::integer(a));
    } else {
      q.push_back(toQuery(t, args[i]));
    }
  }
  for (const auto& s : spec.slots) q.push_back(QArg::integer(mem_->stackAlloc(s.size, s.align)));
  q.push_back(QArg::var());
  try {
    const size_t id = engine_.openQuery(spec.predName, q);
    maxQueryDepth_ = std::max(maxQueryDepth_, engine_.openQueries());
    if (!engine_.nextSolution(id))
      fail(ErrorCode::State, "predicate " + spec.predName + "/" + std::to_string(spec.arity()) + " failed");
    const CValue r = fromProlog(engine_.queryArg(id, spec.arity() - 1), f.retType);
    engine_.closeQuery(id);
    if (engine_.openQueries() == 0) {
      ++topLevelQueries_;
      if (engine_.heapTop() != engine_.heapBase()) ++heapLeaks_;
    }
    mem_->stackRelease(mark);
    return r;
  } catch (const Error& e) {
    if (annotated_) throw;
    annotated_ = true;
    throw Error(e.code(), e.message() + "\n  c call stack: " + joined(interp_->callStack()) + " > " + spec.predName);
  }
}

std::vector<CValue> Session::foreignArgs(std::span<const size_t> a, size_t first, const CType& fnType) const {
  std::vector<CValue> out;
  if (a.size() - first - 1 != fnType.params.size())
    fail(ErrorCode::Type, "wrong argument count in foreign call");
  for (size_t i = 0; i < fnType.params.size(); ++i) out.push_back(fromProlog(a[first + i], fnType.params[i]));
  return out;
}

void Session::registerForeign() {
  std::vector<std::string> names;
  for (const auto& f : tu_.functions) names.push_back(f.name);
  for (const auto& b : builtinDecls()) names.push_back(b.name);
  for (const auto& n : names) {
    const CType ft = *tu_.functionType(n);
    engine_.registerForeign(foreignName(n), static_cast<uint32_t>(ft.params.size() + 1),
                            [this, n, ft](Engine& e, std::span<const size_t> a) {
                              const CValue r = interp_->call(n, foreignArgs(a, 0, ft));
                              return e.unify(a.back(), (*ft.elem).isVoid() ? e.newInt(0) : toHeap((*ft.elem), r));
                            });
  }
  engine_.registerForeignAnyArity("$icall", [this](Engine& e, std::span<const size_t> a) {
    if (a.empty()) fail(ErrorCode::Type, "'$icall' needs a function address");
    const auto addr = static_cast<int64_t>(e.intArg(a[0]));
    const auto name = functionAtAddress(tu_, addr);
    if (!name) fail(ErrorCode::BadFunc, "call through " + hexAddress(addr) + ", which is not a function address");
    const CType ft = *tu_.functionType(*name);
    const CValue r = interp_->callAddress(addr, foreignArgs(a, 1, ft));
    return e.unify(a.back(), (*ft.elem).isVoid() ? e.newInt(0) : toHeap((*ft.elem), r));
  });
  engine_.registerForeign("$mark", 1, [this](Engine& e, std::span<const size_t> a) {
    return e.unify(a[0], e.newInt(mem_->stackTop()));
  });
  engine_.registerForeign("$alloc", 3, [this](Engine& e, std::span<const size_t> a) {
    const auto size = static_cast<int64_t>(e.intArg(a[0]));
    const auto align = static_cast<int64_t>(e.intArg(a[1]));
    return e.unify(a[2], e.newInt(mem_->stackAlloc(size, align)));
  });
  engine_.registerForeign("$release", 1, [this](Engine& e, std::span<const size_t> a) {
    mem_->stackRelease(static_cast<int64_t>(e.intArg(a[0])));
    return true;
  });
}

RunResult Session::run(const std::vector<int64_t>& input) {
  RunResult res;
  io_.trace.clear();
  io_.input.assign(input.begin(), input.end());
  annotated_ = false;
  try {
    runWithLargeStack([&] {
      interp_->initGlobals();
      res.exitCode = interp_->runMain();
    });
  } catch (const Error& e) {
    res.error = e.code();
    res.errorMessage = e.what();
    res.exitCode = 3;
  }
  engine_.reset();
  res.trace = std::move(io_.trace);
  io_.trace.clear();
  return res;
}

RunResult runObfuscated(const TranslationUnit& original, const ObfuscationConfig& cfg,
                        const std::vector<int64_t>& input, const SessionOptions& opts,
                        const NormalizeOptions& nopts, EngineStats* stats) {
  NormalizedUnit nu = normalize(original, nopts);
  const Translation t = translateUnit(nu, selectFunctions(original, cfg), cfg);
  Session s(nu.tu, t, opts);
  RunResult r = s.run(input);
  if (stats) *stats = s.engine().stats();
  return r;
}

}  // namespace c2pl
