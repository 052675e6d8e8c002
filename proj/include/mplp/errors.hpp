#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mplp {

/// Base for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MPLP_DEFINE_ERROR(Name)        \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

// graph-core
MPLP_DEFINE_ERROR(DuplicateEdge);
MPLP_DEFINE_ERROR(UnknownEdge);
MPLP_DEFINE_ERROR(AlreadyEvaluated);
MPLP_DEFINE_ERROR(InvalidTransition);
// evaluator / monitor
MPLP_DEFINE_ERROR(SuccessorMismatch);
MPLP_DEFINE_ERROR(MalformedPath);
// planners
MPLP_DEFINE_ERROR(ConfigError);
MPLP_DEFINE_ERROR(DomainContractViolation);
MPLP_DEFINE_ERROR(GraphTooLarge);
// domains
MPLP_DEFINE_ERROR(DimensionMismatch);
MPLP_DEFINE_ERROR(ContractViolation);
// bench
MPLP_DEFINE_ERROR(NoFreeStart);
MPLP_DEFINE_ERROR(IoError);

#undef MPLP_DEFINE_ERROR

/// Malformed input file. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mplp
