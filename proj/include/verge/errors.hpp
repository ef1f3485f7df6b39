#pragma once

#include <stdexcept>
#include <string>

namespace verge {

enum class ErrorCode {
  SyntaxError,
  SortMismatch,
  UnknownSymbol,
  UndeclaredSymbol,
  DuplicateLabel,
  DuplicateName,
  EmptyDomain,
  UnsortedVariable,
  NonLinear,
  NonPropositional,
  TooManyAtoms,
  SolverCrashed,
  ProtocolError,
  InconsistentContext,
  ContextIrreparable,
  LimitExceeded,
  EmptyAnswer,
  NoVotes,
  AllCandidatesInvalid,
  MalformedOutput,
  FixtureMiss,
  NetworkError,
  RateLimited,
  GatewayUnavailable,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace verge
