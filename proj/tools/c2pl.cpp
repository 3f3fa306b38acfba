#include <unistd.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "c2pl/cexec/session.hpp"
#include "c2pl/engine/syntax.hpp"
#include "c2pl/error.hpp"
#include "c2pl/frontend/parser.hpp"
#include "c2pl/metrics/metrics.hpp"
#include "c2pl/translate/translate.hpp"

namespace fs = std::filesystem;
using namespace c2pl;

namespace {

enum Exit { kOk = 0, kInput = 1, kInternal = 2, kRuntime = 3, kDiffFailed = 4 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  int level = 30;
  std::vector<int> levels = {0, 30, 100};
  uint64_t seed = 42;
  std::vector<uint64_t> seeds = {42};
  std::vector<std::string> functions;
  std::vector<std::string> exclude;
  bool mask = true;
  bool conservative = false;
  std::string out;
  std::string format;
  std::string dumpPass;
  bool traceEngine = false;
  std::string obfuscated;
  std::string stdinFile;
  std::string dot;
};

std::string readText(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void writeText(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + p.string());
}

bool isInputError(ErrorCode c) {
  switch (c) {
    case ErrorCode::Syntax:
    case ErrorCode::Goto:
    case ErrorCode::Unsupported:
    case ErrorCode::Type:
    case ErrorCode::Incomplete:
    case ErrorCode::NoField:
    case ErrorCode::UnknownFunc:
      return true;
    default:
      return false;
  }
}

ObfuscationConfig configOf(const Options& o, int level, uint64_t seed) {
  ObfuscationConfig cfg;
  cfg.level = level;
  cfg.seed = seed;
  cfg.include = o.functions;
  cfg.exclude = o.exclude;
  cfg.maskIntegers = o.mask;
  return cfg;
}

NormalizeOptions normalizeOptionsOf(const Options& o) {
  NormalizeOptions n;
  n.conservativePta = o.conservative;
  n.dumpPass = o.dumpPass;
  n.dump = o.dumpPass.empty() ? nullptr : &std::cout;
  return n;
}

std::vector<int64_t> programInput(const Options& o) {
  if (!o.stdinFile.empty()) return parseStdin(readText(o.stdinFile));
  if (isatty(STDIN_FILENO)) return {};
  std::ostringstream s;
  s << std::cin.rdbuf();
  return parseStdin(s.str());
}

int finishRun(const RunResult& r) {
  std::cout << traceText(r.trace) << std::flush;
  if (r.error) {
    std::cerr << "c2pl: " << r.errorMessage << "\n";
    return kRuntime;
  }
  return r.exitCode;
}

int cmdObfuscate(const Options& o) {
  TranslationUnit tu = parse(readText(o.input));
  const ObfuscationConfig cfg = configOf(o, o.level, o.seed);
  NormalizedUnit nu = normalize(tu, normalizeOptionsOf(o));
  Translation t = translateUnit(nu, selectFunctions(tu, cfg), cfg);
  t.manifest.source = o.input;
  t.manifest.conservativePta = o.conservative;
  const fs::path dir = o.out.empty() ? fs::path("c2pl-out") : fs::path(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
  writeText(dir / "program.pl", emitProlog(t.program));
  writeText(dir / "wrappers.c", emitWrappers(tu, t));
  writeText(dir / "manifest.json", t.manifest.toJson());
  std::cerr << "c2pl: " << t.selected.size() << " function(s), " << t.program.clauses.size() << " predicate(s) -> "
            << dir.string() << "\n";
  return kOk;
}

int cmdRun(const Options& o, bool obfuscateInMemory) {
  SessionOptions sopts;
  if (o.traceEngine) sopts.engineTrace = &std::cerr;
  if (!o.obfuscated.empty()) {
    const fs::path mpath = o.obfuscated;
    Manifest m = Manifest::fromJson(readText(mpath));
    const std::string source = o.input.empty() ? m.source : o.input;
    if (source.empty()) throw InputError("no source file given and none recorded in " + mpath.string());
    TranslationUnit tu = parse(readText(source));
    ObfuscationConfig cfg;
    cfg.level = 0;
    cfg.seed = m.seed;
    cfg.include = m.selected;
    cfg.maskIntegers = m.maskIntegers;
    NormalizeOptions nopts;
    nopts.conservativePta = m.conservativePta;
    NormalizedUnit nu = normalize(tu, nopts);
    Translation t = translateUnit(nu, selectFunctions(tu, cfg), cfg);
    const fs::path pl = mpath.parent_path() / "program.pl";
    if (fs::exists(pl)) {
      t.program = readProgram(readText(pl));
      t.manifest = m;
    }
    Session s(nu.tu, t, sopts);
    return finishRun(s.run(programInput(o)));
  }
  if (o.input.empty()) throw InputError("no source file given");
  TranslationUnit tu = parse(readText(o.input));
  if (!obfuscateInMemory) return finishRun(runOriginal(tu, programInput(o)));
  return finishRun(runObfuscated(tu, configOf(o, o.level, o.seed), programInput(o), sopts, normalizeOptionsOf(o)));
}

int cmdDiff(const Options& o) {
  const fs::path dir = o.input;
  if (!fs::is_directory(dir)) throw InputError(dir.string() + " is not a directory");
  std::vector<fs::path> programs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".c") programs.push_back(e.path());
  std::sort(programs.begin(), programs.end());

  nlohmann::json cases = nlohmann::json::array();
  size_t failed = 0;
  const bool json = o.format == "json";
  for (const auto& p : programs) {
    const std::string name = p.stem().string();
    fs::path in = p;
    in.replace_extension(".in");
    const std::vector<int64_t> input = fs::exists(in) ? parseStdin(readText(in)) : std::vector<int64_t>{};
    TranslationUnit tu = parse(readText(p));
    const RunResult want = runOriginal(tu, input);
    for (int level : o.levels) {
      for (uint64_t seed : o.seeds) {
        NormalizeOptions nopts;
        nopts.conservativePta = o.conservative;
        const RunResult got = runObfuscated(tu, configOf(o, level, seed), input, {}, nopts);
        const bool pass = got.sameBehavior(want);
        failed += pass ? 0 : 1;
        cases.push_back({{"name", name}, {"level", level}, {"seed", seed}, {"pass", pass}});
        if (!json) {
          std::cout << (pass ? "PASS " : "FAIL ") << name << " level " << level << " seed " << seed << "\n";
          if (!pass && got.error) std::cout << "  " << got.errorMessage << "\n";
        }
      }
    }
  }
  if (json) {
    std::cout << nlohmann::json{{"cases", cases}, {"total", cases.size()}, {"failed", failed}}.dump(2) << "\n";
  } else {
    std::cout << cases.size() << " case(s), " << cases.size() - failed << " passed, " << failed << " failed\n";
  }
  return failed ? kDiffFailed : kOk;
}

std::string fileName(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
  return s + ".dot";
}

int cmdMetrics(const Options& o) {
  TranslationUnit tu = parse(readText(o.input));
  NormalizeOptions nopts;
  nopts.conservativePta = o.conservative;
  const CfgReport r = report(tu, configOf(o, o.level, o.seed), nopts);
  const std::string text = o.format == "text" ? r.toText() : r.toJson();
  if (o.out.empty()) std::cout << text;
  else writeText(o.out, text);
  if (!o.dot.empty()) {
    for (const auto& [sub, prog] : {std::pair{"original", &r.original}, std::pair{"obfuscated", &r.obfuscated}}) {
      const fs::path d = fs::path(o.dot) / sub;
      fs::create_directories(d);
      for (size_t i = 0; i < prog->graphs.size(); ++i)
        writeText(d / fileName(prog->functions[i].kind + "_" + prog->graphs[i].name), toDot(prog->graphs[i]));
    }
  }
  return kOk;
}

void selectionOptions(CLI::App* c, Options& o) {
  c->add_option("--seed", o.seed, "Seed for the random function selection")->capture_default_str();
  c->add_option("--functions", o.functions, "Translate exactly these functions")->delimiter(',');
  c->add_option("--exclude", o.exclude, "Never translate these functions")->delimiter(',');
  c->add_flag("--mask-integers,!--no-mask-integers", o.mask, "Wrap integer results to their C width")
      ->capture_default_str();
  c->add_flag("--conservative-pta", o.conservative, "Assume every memory access aliases every slot");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"c2pl: translate C functions to Prolog, run the mixed program, measure the result"};
  app.require_subcommand(1);
  Options o;
  const auto level = CLI::Range(0, 100);

  CLI::App* obf = app.add_subcommand("obfuscate", "Write program.pl, wrappers.c and manifest.json");
  obf->add_option("input", o.input, "C source file")->required();
  obf->add_option("--level", o.level, "Percentage of functions to translate")->check(level)->capture_default_str();
  selectionOptions(obf, o);
  obf->add_option("--out", o.out, "Output directory (default c2pl-out)");
  obf->add_option("--dump-pass", o.dumpPass, "Print the unit after this normalization pass")
      ->check(CLI::IsMember(passNames()));

  CLI::App* run = app.add_subcommand("run", "Run a program and print its trace");
  run->add_option("input", o.input, "C source file");
  CLI::Option* runLevel =
      run->add_option("--level", o.level, "Obfuscate in memory at this level before running")->check(level);
  selectionOptions(run, o);
  run->add_option("--obfuscated", o.obfuscated, "manifest.json written by obfuscate");
  run->add_option("--stdin", o.stdinFile, "Read program input from this file instead of stdin");
  run->add_flag("--trace-engine", o.traceEngine, "Log choice-point pushes and restores to stderr");
  run->add_option("--dump-pass", o.dumpPass, "Print the unit after this normalization pass")
      ->check(CLI::IsMember(passNames()));

  CLI::App* diff = app.add_subcommand("diff", "Compare original and obfuscated runs over a corpus");
  diff->add_option("corpus", o.input, "Directory of .c programs with optional .in inputs")->required();
  diff->add_option("--level", o.levels, "Levels to test")->delimiter(',')->check(level)->capture_default_str();
  diff->add_option("--seed", o.seeds, "Seeds to test")->delimiter(',')->capture_default_str();
  diff->add_option("--functions", o.functions, "Translate exactly these functions")->delimiter(',');
  diff->add_flag("--mask-integers,!--no-mask-integers", o.mask, "Wrap integer results to their C width");
  diff->add_flag("--conservative-pta", o.conservative, "Assume every memory access aliases every slot");
  diff->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  CLI::App* met = app.add_subcommand("metrics", "Potency metrics before and after obfuscation");
  met->add_option("input", o.input, "C source file")->required();
  met->add_option("--level", o.level, "Percentage of functions to translate")->check(level)->capture_default_str();
  selectionOptions(met, o);
  met->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"text", "json"}));
  met->add_option("--out", o.out, "Write the report here instead of stdout");
  met->add_option("--dot", o.dot, "Write one DOT file per CFG under this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (app.got_subcommand(obf)) return cmdObfuscate(o);
    if (app.got_subcommand(run)) return cmdRun(o, runLevel->count() > 0 || !o.functions.empty());
    if (app.got_subcommand(diff)) return cmdDiff(o);
    return cmdMetrics(o);
  } catch (const Error& e) {
    std::cerr << "c2pl: " << e.what() << "\n";
    return isInputError(e.code()) ? kInput : kInternal;
  } catch (const InputError& e) {
    std::cerr << "c2pl: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "c2pl: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "c2pl: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
