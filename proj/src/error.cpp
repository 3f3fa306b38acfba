#include "c2pl/error.hpp"

namespace c2pl {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "E_SYNTAX";
    case ErrorCode::Goto: return "E_GOTO";
    case ErrorCode::Unsupported: return "E_UNSUPPORTED";
    case ErrorCode::Type: return "E_TYPE";
    case ErrorCode::Incomplete: return "E_INCOMPLETE";
    case ErrorCode::NoField: return "E_NOFIELD";
    case ErrorCode::UnknownFunc: return "E_UNKNOWN_FUNC";
    case ErrorCode::Untranslatable: return "E_UNTRANSLATABLE";
    case ErrorCode::Depth: return "E_DEPTH";
    case ErrorCode::UnknownPred: return "E_UNKNOWN_PRED";
    case ErrorCode::Unbound: return "E_UNBOUND";
    case ErrorCode::Segv: return "E_SEGV";
    case ErrorCode::Inst: return "E_INST";
    case ErrorCode::State: return "E_STATE";
    case ErrorCode::Overflow: return "E_OVERFLOW";
    case ErrorCode::Div0: return "E_DIV0";
    case ErrorCode::Oom: return "E_OOM";
    case ErrorCode::StdinExhausted: return "E_STDIN_EXHAUSTED";
    case ErrorCode::BadFunc: return "E_BADFUNC";
  }
  return "E_UNKNOWN";
}

}  // namespace c2pl
