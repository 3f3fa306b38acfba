#include "c2pl/frontend/lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "c2pl/error.hpp"

namespace c2pl {

namespace {

constexpr std::array kKeywords = {
    "int",    "char",   "long",   "unsigned", "signed",  "float",   "double", "void",
    "struct", "union",  "typedef", "if",      "else",    "while",   "for",    "do",
    "switch", "case",   "default", "break",   "continue", "return", "goto",   "sizeof",
    "const",  "static", "short",  "enum",     "extern",  "volatile", "register",
};

// Longest first so that maximal munch works by prefix test.
constexpr std::array kPuncts = {
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "+",  "-",  "*",  "/",
    "%",   "<",   ">",   "=",  "!",  "~",  "&",  "|",  "^",  "?",  ":",  ";",  ",",
    ".",   "(",   ")",   "[",  "]",  "{",  "}",
};

std::string where(SrcPos p) {
  return std::to_string(p.line) + ":" + std::to_string(p.col);
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipSpace();
      Token t;
      t.pos = {line_, col_};
      if (i_ >= src_.size()) {
        t.kind = TokKind::End;
        out.push_back(t);
        return out;
      }
      char c = src_[i_];
      if (c == '#') fail(ErrorCode::Syntax, where(t.pos) + ": preprocessor directives are not accepted");
      if (c == '"') fail(ErrorCode::Unsupported, where(t.pos) + ": string literals are not supported");
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t b = i_;
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) advance();
        t.text = std::string(src_.substr(b, i_ - b));
        t.kind = TokKind::Ident;
        for (const char* k : kKeywords)
          if (t.text == k) t.kind = TokKind::Keyword;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && i_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
        number(t);
      } else if (c == '\'') {
        charLit(t);
      } else {
        bool matched = false;
        for (const char* p : kPuncts) {
          std::string_view pv(p);
          if (src_.substr(i_, pv.size()) == pv) {
            t.kind = TokKind::Punct;
            t.text = std::string(pv);
            for (size_t k = 0; k < pv.size(); ++k) advance();
            matched = true;
            break;
          }
        }
        if (!matched)
          fail(ErrorCode::Syntax, where(t.pos) + ": unexpected character '" + std::string(1, c) + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skipSpace() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '*') {
        SrcPos start{line_, col_};
        advance();
        advance();
        while (i_ + 1 < src_.size() && !(src_[i_] == '*' && src_[i_ + 1] == '/')) advance();
        if (i_ + 1 >= src_.size()) fail(ErrorCode::Syntax, where(start) + ": unterminated comment");
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  void number(Token& t) {
    size_t b = i_;
    bool isFloat = false;
    bool hex = src_.substr(i_, 2) == "0x" || src_.substr(i_, 2) == "0X";
    if (hex) {
      advance();
      advance();
      while (i_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[i_]))) advance();
    } else {
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
      if (i_ < src_.size() && src_[i_] == '.') {
        isFloat = true;
        advance();
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
      }
      if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
        isFloat = true;
        advance();
        if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) advance();
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
      }
    }
    std::string body(src_.substr(b, i_ - b));
    if (isFloat) {
      t.kind = TokKind::FloatLit;
      t.floatValue = std::strtod(body.c_str(), nullptr);
      if (i_ < src_.size() && (src_[i_] == 'f' || src_[i_] == 'F')) {
        t.isFloat32 = true;
        advance();
      }
    } else {
      t.kind = TokKind::IntLit;
      const char* first = body.c_str() + (hex ? 2 : 0);
      auto [ptr, ec] = std::from_chars(first, body.c_str() + body.size(), t.intValue, hex ? 16 : 10);
      if (ec != std::errc() || ptr == first)
        fail(ErrorCode::Syntax, where(t.pos) + ": malformed integer literal '" + body + "'");
      while (i_ < src_.size() && (src_[i_] == 'u' || src_[i_] == 'U' || src_[i_] == 'l' || src_[i_] == 'L')) {
        if (src_[i_] == 'u' || src_[i_] == 'U') t.isUnsigned = true;
        else t.isLong = true;
        advance();
      }
    }
    if (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
      fail(ErrorCode::Syntax, where(t.pos) + ": malformed number");
    t.text = std::string(src_.substr(b, i_ - b));
  }

  void charLit(Token& t) {
    advance();
    if (i_ >= src_.size()) fail(ErrorCode::Syntax, where(t.pos) + ": unterminated character literal");
    int v = static_cast<unsigned char>(src_[i_]);
    if (src_[i_] == '\\') {
      advance();
      if (i_ >= src_.size()) fail(ErrorCode::Syntax, where(t.pos) + ": bad escape");
      switch (src_[i_]) {
        case 'n': v = '\n'; break;
        case 't': v = '\t'; break;
        case 'r': v = '\r'; break;
        case '0': v = 0; break;
        case '\\': v = '\\'; break;
        case '\'': v = '\''; break;
        case '"': v = '"'; break;
        default: fail(ErrorCode::Syntax, where(t.pos) + ": unsupported escape");
      }
    }
    advance();
    if (i_ >= src_.size() || src_[i_] != '\'')
      fail(ErrorCode::Syntax, where(t.pos) + ": unterminated character literal");
    advance();
    t.kind = TokKind::CharLit;
    t.intValue = static_cast<uint64_t>(static_cast<int8_t>(v));
    t.text = "'" + std::string(1, static_cast<char>(v)) + "'";
  }

  std::string_view src_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace c2pl
