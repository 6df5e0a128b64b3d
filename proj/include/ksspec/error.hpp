#pragma once

#include <stdexcept>
#include <string>

namespace ksspec {

enum class ErrorKind {
  Config,     // invalid configuration or argument
  Domain,     // argument outside the mathematical domain (poles, r = 0, ...)
  Numerical,  // overflow, stiffness, non-convergence, bracket failure
  Invariant   // a checked property did not hold
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ksspec
