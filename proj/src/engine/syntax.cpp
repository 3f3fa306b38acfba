#include "c2pl/engine/syntax.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

#include "c2pl/error.hpp"
#include "c2pl/numfmt.hpp"

namespace c2pl {

namespace {

const std::map<std::string, OpDef>& infixTable() {
  static const std::map<std::string, OpDef> t = {
      {":-", {1200, OpType::XFX}},  {"-->", {1200, OpType::XFX}}, {";", {1100, OpType::XFY}},
      {"|", {1100, OpType::XFY}},   {"->", {1050, OpType::XFY}},  {",", {1000, OpType::XFY}},
      {"=", {700, OpType::XFX}},    {"\\=", {700, OpType::XFX}},  {"==", {700, OpType::XFX}},
      {"\\==", {700, OpType::XFX}}, {"@<", {700, OpType::XFX}},   {"@>", {700, OpType::XFX}},
      {"@=<", {700, OpType::XFX}},  {"@>=", {700, OpType::XFX}},  {"=..", {700, OpType::XFX}},
      {"is", {700, OpType::XFX}},   {"=:=", {700, OpType::XFX}},  {"=\\=", {700, OpType::XFX}},
      {"<", {700, OpType::XFX}},    {">", {700, OpType::XFX}},    {"=<", {700, OpType::XFX}},
      {">=", {700, OpType::XFX}},   {"+", {500, OpType::YFX}},    {"-", {500, OpType::YFX}},
      {"/\\", {500, OpType::YFX}},  {"\\/", {500, OpType::YFX}},  {"xor", {500, OpType::YFX}},
      {"*", {400, OpType::YFX}},    {"/", {400, OpType::YFX}},    {"//", {400, OpType::YFX}},
      {"rem", {400, OpType::YFX}},  {"mod", {400, OpType::YFX}},  {"div", {400, OpType::YFX}},
      {"<<", {400, OpType::YFX}},   {">>", {400, OpType::YFX}},   {"**", {200, OpType::XFX}},
      {"^", {200, OpType::XFY}},
  };
  return t;
}

const std::map<std::string, OpDef>& prefixTable() {
  static const std::map<std::string, OpDef> t = {
      {":-", {1200, OpType::FX}}, {"?-", {1200, OpType::FX}}, {"\\+", {900, OpType::FY}},
      {"-", {200, OpType::FY}},   {"+", {200, OpType::FY}},   {"\\", {200, OpType::FY}},
  };
  return t;
}

bool isSymbolChar(char c) {
  return std::string_view("+-*/\\^<>=~:.?@#&$").find(c) != std::string_view::npos;
}

bool isAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

enum class PT { Name, Var, Int, Float, Punct, End, Eof };

struct PTok {
  PT kind = PT::Eof;
  std::string text;
  Int128 ival = 0;
  double fval = 0.0;
  bool layoutBefore = false;
  bool quoted = false;
  int line = 1;
  int col = 1;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view s) : s_(s) {}

  std::vector<PTok> run() {
    std::vector<PTok> out;
    while (true) {
      bool layout = skipLayout();
      PTok t;
      t.layoutBefore = layout;
      t.line = line_;
      t.col = col_;
      if (i_ >= s_.size()) {
        t.kind = PT::Eof;
        out.push_back(t);
        return out;
      }
      char c = s_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        number(t);
      } else if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
        t.kind = PT::Var;
        while (i_ < s_.size() && isAlnum(s_[i_])) t.text.push_back(get());
      } else if (std::islower(static_cast<unsigned char>(c))) {
        t.kind = PT::Name;
        while (i_ < s_.size() && isAlnum(s_[i_])) t.text.push_back(get());
      } else if (c == '\'') {
        get();
        t.kind = PT::Name;
        t.quoted = true;
        t.text = quoted('\'');
      } else if (c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' || c == '|') {
        t.kind = PT::Punct;
        t.text = std::string(1, get());
      } else if (c == '!' || c == ';') {
        t.kind = PT::Name;
        t.text = std::string(1, get());
      } else if (isSymbolChar(c)) {
        if (c == '.' && (i_ + 1 >= s_.size() || std::isspace(static_cast<unsigned char>(s_[i_ + 1])) || s_[i_ + 1] == '%')) {
          get();
          t.kind = PT::End;
          t.text = ".";
        } else {
          t.kind = PT::Name;
          while (i_ < s_.size() && isSymbolChar(s_[i_])) t.text.push_back(get());
        }
      } else {
        error("unexpected character '" + std::string(1, c) + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void error(const std::string& m) const {
    fail(ErrorCode::Syntax, std::to_string(line_) + ":" + std::to_string(col_) + ": " + m);
  }

  char get() {
    char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  bool skipLayout() {
    bool any = false;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        get();
        any = true;
      } else if (c == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') get();
        any = true;
      } else if (c == '/' && i_ + 1 < s_.size() && s_[i_ + 1] == '*') {
        get();
        get();
        while (i_ + 1 < s_.size() && !(s_[i_] == '*' && s_[i_ + 1] == '/')) get();
        if (i_ + 1 >= s_.size()) error("unterminated comment");
        get();
        get();
        any = true;
      } else {
        break;
      }
    }
    return any;
  }

  int escape() {
    if (i_ >= s_.size()) error("bad escape");
    char c = get();
    switch (c) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case 'a': return 7;
      case 'b': return 8;
      case 'f': return 12;
      case 'v': return 11;
      case '0': return 0;
      case '\\': return '\\';
      case '\'': return '\'';
      case '"': return '"';
      case '`': return '`';
      default: error("unsupported escape sequence");
    }
  }

  std::string quoted(char q) {
    std::string out;
    while (true) {
      if (i_ >= s_.size()) error("unterminated quoted atom");
      char c = get();
      if (c == q) {
        if (i_ < s_.size() && s_[i_] == q) {
          out.push_back(get());
          continue;
        }
        return out;
      }
      if (c == '\\') {
        if (i_ < s_.size() && s_[i_] == '\n') {
          get();
          continue;
        }
        out.push_back(static_cast<char>(escape()));
        continue;
      }
      out.push_back(c);
    }
  }

  static int digitValue(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
    return 99;
  }

  Int128 digits(int radix) {
    unsigned __int128 v = 0;
    const unsigned __int128 limit = (static_cast<unsigned __int128>(1) << 126);
    size_t start = i_;
    while (i_ < s_.size() && (digitValue(s_[i_]) < radix || (s_[i_] == '_' && i_ > start))) {
      char c = get();
      if (c == '_') continue;
      v = v * static_cast<unsigned>(radix) + static_cast<unsigned>(digitValue(c));
      if (v >= limit) error("integer literal too large");
    }
    if (i_ == start) error("missing digits");
    return static_cast<Int128>(v);
  }

  void number(PTok& t) {
    t.kind = PT::Int;
    const size_t b = i_;
    if (s_[i_] == '0' && i_ + 1 < s_.size()) {
      char n = s_[i_ + 1];
      if (n == '\'') {
        get();
        get();
        if (i_ >= s_.size()) error("bad character code");
        char c = get();
        if (c == '\\') t.ival = escape();
        else if (c == '\'' && i_ < s_.size() && s_[i_] == '\'') t.ival = static_cast<unsigned char>(get());
        else t.ival = static_cast<unsigned char>(c);
        t.text = std::string(s_.substr(b, i_ - b));
        return;
      }
      int radix = n == 'x' ? 16 : n == 'o' ? 8 : n == 'b' ? 2 : 0;
      if (radix && i_ + 2 < s_.size() && digitValue(s_[i_ + 2]) < radix) {
        get();
        get();
        t.ival = digits(radix);
        t.text = std::string(s_.substr(b, i_ - b));
        return;
      }
    }
    Int128 v = digits(10);
    if (i_ + 1 < s_.size() && s_[i_] == '#' && digitValue(s_[i_ + 1]) < 36) {
      if (v < 2 || v > 36) error("bad radix");
      get();
      t.ival = digits(static_cast<int>(v));
      t.text = std::string(s_.substr(b, i_ - b));
      return;
    }
    bool isFloat = false;
    if (i_ + 1 < s_.size() && s_[i_] == '.' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
      isFloat = true;
      get();
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) get();
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      size_t k = i_ + 1;
      if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
      if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
        isFloat = true;
        while (i_ < k) get();
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) get();
      }
    }
    t.text = std::string(s_.substr(b, i_ - b));
    if (isFloat) {
      t.kind = PT::Float;
      t.fval = std::strtod(t.text.c_str(), nullptr);
    } else {
      t.ival = v;
    }
  }

  std::string_view s_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class TermParser {
 public:
  explicit TermParser(std::vector<PTok> toks) : t_(std::move(toks)) {}

  Program program() {
    Program p;
    while (peek().kind != PT::Eof) {
      TermPtr t = parse(1200);
      expectEnd();
      if (t->isCompound(":-", 2)) {
        p.clauses.push_back({t->args[0], t->args[1]});
      } else if (t->isCompound(":-", 1)) {
        continue;  // directives are ignored
      } else {
        p.clauses.push_back({t, Term::atom("true")});
      }
      checkHead(*p.clauses.back().head);
    }
    return p;
  }

  TermPtr single() {
    TermPtr t = parse(1200);
    if (peek().kind == PT::End) ++pos_;
    if (peek().kind != PT::Eof) error("unexpected text after term");
    return t;
  }

 private:
  const PTok& peek(size_t n = 0) const { return t_[std::min(pos_ + n, t_.size() - 1)]; }

  [[noreturn]] void error(const std::string& m) const {
    const PTok& t = peek();
    fail(ErrorCode::Syntax, std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + m);
  }

  void checkHead(const Term& h) const {
    if (h.kind != Term::Kind::Atom && h.kind != Term::Kind::Struct) error("clause head is not callable");
  }

  void expectEnd() {
    if (peek().kind != PT::End) error("operator expected, found '" + peek().text + "'");
    ++pos_;
  }

  bool isPunct(const PTok& t, const char* p) const { return t.kind == PT::Punct && t.text == p; }

  bool canStartTerm(const PTok& t) const {
    switch (t.kind) {
      case PT::Var:
      case PT::Int:
      case PT::Float:
        return true;
      case PT::Punct:
        return t.text == "(" || t.text == "[" || t.text == "{";
      case PT::Name:
        return !infixOp(t.text) || prefixOp(t.text) || isPunct(peek(1), "(");
      default:
        return false;
    }
  }

  std::vector<TermPtr> arguments() {
    std::vector<TermPtr> args;
    ++pos_;  // '('
    while (true) {
      args.push_back(parse(999));
      if (isPunct(peek(), ",")) {
        ++pos_;
        continue;
      }
      if (isPunct(peek(), ")")) {
        ++pos_;
        return args;
      }
      error("expected ',' or ')' in arguments");
    }
  }

  TermPtr list() {
    ++pos_;  // '['
    if (isPunct(peek(), "]")) {
      ++pos_;
      return Term::atom("[]");
    }
    std::vector<TermPtr> items;
    TermPtr tail = Term::atom("[]");
    while (true) {
      items.push_back(parse(999));
      if (isPunct(peek(), ",")) {
        ++pos_;
        continue;
      }
      if (isPunct(peek(), "|")) {
        ++pos_;
        tail = parse(999);
      }
      if (!isPunct(peek(), "]")) error("expected ']'");
      ++pos_;
      break;
    }
    for (auto it = items.rbegin(); it != items.rend(); ++it) tail = Term::make(".", {*it, tail});
    return tail;
  }

  TermPtr primary(int maxPrec, int& prec) {
    prec = 0;
    const PTok& t = peek();
    switch (t.kind) {
      case PT::Int:
        ++pos_;
        return t.text.rfind("0x", 0) == 0 ? Term::hexInteger(t.ival) : Term::integer(t.ival);
      case PT::Float:
        ++pos_;
        return Term::flt(t.fval);
      case PT::Var: {
        ++pos_;
        return Term::var(t.text);
      }
      case PT::Punct:
        if (t.text == "(") {
          ++pos_;
          TermPtr inner = parse(1200);
          if (!isPunct(peek(), ")")) error("expected ')'");
          ++pos_;
          return inner;
        }
        if (t.text == "[") return list();
        if (t.text == "{") error("curly terms are not supported");
        error("unexpected '" + t.text + "'");
      case PT::Name: {
        const std::string name = t.text;
        const bool quoted = t.quoted;
        ++pos_;
        const PTok& next = peek();
        if (isPunct(next, "(") && !next.layoutBefore) return Term::make(name, arguments());
        if (!quoted && name == "-" && (next.kind == PT::Int || next.kind == PT::Float) && !next.layoutBefore) {
          ++pos_;
          return next.kind == PT::Int ? Term::integer(-next.ival) : Term::flt(-next.fval);
        }
        if (!quoted) {
          if (const OpDef* op = prefixOp(name); op && canStartTerm(next)) {
            int p = op->prec;
            int argMax = op->type == OpType::FY ? p : p - 1;
            if (p > maxPrec) {
              p = 999;
              argMax = 999;
            }
            TermPtr arg = parse(argMax);
            prec = p;
            return Term::make(name, {arg});
          }
        }
        return Term::atom(name);
      }
      case PT::End:
        error("unexpected end of clause");
      case PT::Eof:
        error("unexpected end of input");
    }
    error("unexpected token");
  }

  TermPtr parse(int maxPrec) {
    int leftPrec = 0;
    TermPtr left = primary(maxPrec, leftPrec);
    while (true) {
      const PTok& t = peek();
      std::string name;
      if (t.kind == PT::Name && !t.quoted) name = t.text;
      else if (isPunct(t, ",")) name = ",";
      else if (isPunct(t, "|")) name = "|";
      else break;
      const OpDef* op = infixOp(name);
      if (!op) break;
      const int p = op->prec;
      const int lmax = op->type == OpType::YFX ? p : p - 1;
      const int rmax = op->type == OpType::XFY ? p : p - 1;
      if (p > maxPrec || leftPrec > lmax) break;
      ++pos_;
      TermPtr right = parse(rmax);
      left = Term::make(name == "|" ? ";" : name, {left, right});
      leftPrec = p;
    }
    return left;
  }

  std::vector<PTok> t_;
  size_t pos_ = 0;
};

bool isLetterAtom(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!isAlnum(c)) return false;
  return true;
}

bool isSymbolAtom(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!isSymbolChar(c)) return false;
  return true;
}

bool isOperatorAtom(const std::string& s) { return infixOp(s) || prefixOp(s); }

std::string number(const Term& t) {
  if (t.kind == Term::Kind::Int && t.hex) {
    static const char* digits = "0123456789ABCDEF";
    std::string h;
    for (Int128 v = t.ival; v > 0; v >>= 4) h.insert(h.begin(), digits[static_cast<int>(v & 15)]);
    return "0x" + (h.empty() ? std::string("0") : h);
  }
  if (t.kind == Term::Kind::Int) return int128ToString(t.ival);
  return formatDouble(t.fval);
}

bool isNegativeNumber(const Term& t) {
  return (t.kind == Term::Kind::Int && t.ival < 0) || (t.kind == Term::Kind::Float && std::signbit(t.fval));
}

void write(std::string& out, const Term& t, int maxPrec);

bool writeList(std::string& out, const Term& t) {
  std::vector<const Term*> items;
  const Term* cur = &t;
  while (cur->isCompound(".", 2)) {
    items.push_back(cur->args[0].get());
    cur = cur->args[1].get();
  }
  out += '[';
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    write(out, *items[i], 999);
  }
  if (!cur->isAtom("[]")) {
    out += " | ";
    write(out, *cur, 999);
  }
  out += ']';
  return true;
}

void write(std::string& out, const Term& t, int maxPrec) {
  switch (t.kind) {
    case Term::Kind::Int:
    case Term::Kind::Float:
      out += number(t);
      return;
    case Term::Kind::Var:
      out += t.name;
      return;
    case Term::Kind::Atom:
      if (isOperatorAtom(t.name) && maxPrec < 1200) {
        out += "(" + quoteAtom(t.name) + ")";
      } else {
        out += quoteAtom(t.name);
      }
      return;
    case Term::Kind::Struct:
      break;
  }
  if (t.isCompound(".", 2)) {
    writeList(out, t);
    return;
  }
  if (t.args.size() == 2) {
    if (const OpDef* op = infixOp(t.name)) {
      const int p = op->prec;
      // mixed arithmetic operators of equal priority get explicit parentheses
      auto mixed = [&](const Term& a) {
        return p < 1000 && a.kind == Term::Kind::Struct && a.args.size() == 2 && a.name != t.name &&
               infixOp(a.name) && infixOp(a.name)->prec == p;
      };
      const int lmax = op->type == OpType::YFX && !mixed(*t.args[0]) ? p : p - 1;
      const int rmax = op->type == OpType::XFY && !mixed(*t.args[1]) ? p : p - 1;
      const bool paren = p > maxPrec;
      if (paren) out += '(';
      write(out, *t.args[0], lmax);
      if (t.name == ",") out += ", ";
      else out += " " + quoteAtom(t.name) + " ";
      write(out, *t.args[1], rmax);
      if (paren) out += ')';
      return;
    }
  }
  if (t.args.size() == 1) {
    if (const OpDef* op = prefixOp(t.name); op && t.name != "|") {
      const int p = op->prec;
      const int amax = op->type == OpType::FY ? p : p - 1;
      const bool paren = p > maxPrec;
      if (paren) out += '(';
      out += quoteAtom(t.name);
      out += ' ';
      const Term& a = *t.args[0];
      // "- 1" would read back as the literal -1 without the parentheses.
      if ((t.name == "-" || t.name == "+") && (a.kind == Term::Kind::Int || a.kind == Term::Kind::Float) &&
          !isNegativeNumber(a)) {
        out += '(';
        write(out, a, 1200);
        out += ')';
      } else {
        write(out, a, amax);
      }
      if (paren) out += ')';
      return;
    }
  }
  out += quoteAtom(t.name);
  out += '(';
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    write(out, *t.args[i], 999);
  }
  out += ')';
}

}  // namespace

const OpDef* infixOp(const std::string& name) {
  const auto& t = infixTable();
  auto it = t.find(name);
  return it == t.end() ? nullptr : &it->second;
}

const OpDef* prefixOp(const std::string& name) {
  const auto& t = prefixTable();
  auto it = t.find(name);
  return it == t.end() ? nullptr : &it->second;
}

Program readProgram(std::string_view text) { return TermParser(Tokenizer(text).run()).program(); }

TermPtr readTerm(std::string_view text) { return TermParser(Tokenizer(text).run()).single(); }

std::string quoteAtom(const std::string& name) {
  if (isLetterAtom(name) || isSymbolAtom(name) || name == "[]" || name == "!" || name == ";" || name == "{}")
    return name;
  std::string out = "'";
  for (char c : name) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "'";
}

std::string writeTerm(const Term& t) {
  std::string out;
  write(out, t, 1200);
  return out;
}

std::string writeClause(const Clause& c) {
  std::string out;
  write(out, *c.head, 999);
  if (!c.body->isAtom("true")) {
    out += " :- ";
    write(out, *c.body, 1199);
  }
  if (!out.empty() && isSymbolChar(out.back())) out += ' ';
  return out + ".";
}

}  // namespace c2pl
