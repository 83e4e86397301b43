#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace recur {

enum class ErrorKind {
  InvalidArgument,
  ConfigError,
  NoBranchingSymbol,
  EmptyAlphabet,
  EmptySurvivor,
  InfeasibleTarget,
  HorizonTooShort,
  NotExpanding,
  NotConverged,
  BoundaryOrbit,
  InadmissibleWord,
  ZeroMassCylinder,
  SourceInfeasible,
  BirkhoffMiss,
  Censored,
  VerificationFailed,
};

std::string_view to_string(ErrorKind kind);

/// Process exit status for an error kind: 2 for configuration problems,
/// 4 for horizon/censoring failures and 3 for every other domain error.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const char* what) {
  if (!condition) [[unlikely]] fail(kind, what);
}
// Message built eagerly; keep out of hot loops.
inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) [[unlikely]] fail(kind, what);
}

}  // namespace recur
