#pragma once

#include <stdexcept>
#include <string>

namespace mlab {

// Root of every error thrown by the library. Each subclass corresponds to one
// failure category named in the module contracts; the CLI maps them onto exit
// codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class ContractError : public Error { using Error::Error; };
class SizeError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class SignatureError : public Error { using Error::Error; };
class SolverError : public Error { using Error::Error; };
class AssemblyError : public Error { using Error::Error; };

// Degenerate induced metric; carries the condition number that triggered it.
class FrameError : public Error {
 public:
  FrameError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

// A non-finite integrand value; the message names the node.
class PoisonedResult : public Error { using Error::Error; };

// A precondition of an identity that is not a theorem hypothesis (e.g. a
// non-parallel normal field handed to the multi-normal identity).
class PreconditionError : public Error { using Error::Error; };

// A theorem hypothesis (sigma_k > 0, convexity, hemisphere containment...)
// fails on the sampled surface. Reported, never treated as a numerical failure.
class HypothesisViolation : public Error { using Error::Error; };

}  // namespace mlab
