#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace c2pl {

enum class ErrorCode {
  Syntax,
  Goto,
  Unsupported,
  Type,
  Incomplete,
  NoField,
  UnknownFunc,
  Untranslatable,
  Depth,
  UnknownPred,
  Unbound,
  Segv,
  Inst,
  State,
  Overflow,
  Div0,
  Oom,
  StdinExhausted,
  BadFunc,
};

std::string_view errorCodeName(ErrorCode code);

/// Every failure in the toolkit is reported through this type. The code is
/// the machine-readable part; what() carries the human diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// what() without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace c2pl
