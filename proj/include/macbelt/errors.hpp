#ifndef MACBELT_ERRORS_HPP
#define MACBELT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace macbelt {

/// Unreadable files, invalid JSON, or structurally invalid complex/polytope
/// input.  The command-line driver maps this to exit code 2.
class MalformedInput : public std::runtime_error {
 public:
  explicit MalformedInput(const std::string& what) : std::runtime_error(what) {}
};

/// A documented precondition of an operation does not hold; the message names
/// the failed check.  The command-line driver maps this to exit code 1.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& check)
      : std::runtime_error(check) {}
};

/// An internal algorithm failed to make the progress its contract promises;
/// this always indicates an implementation bug, never bad input.
class ProcedureFailure : public std::logic_error {
 public:
  explicit ProcedureFailure(const std::string& what) : std::logic_error(what) {}
};

}  // namespace macbelt

#endif  // MACBELT_ERRORS_HPP
