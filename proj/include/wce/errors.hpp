#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wce {

// Every failure carries a stable machine-readable code so that callers
// (and the command line driver) can map errors to exit statuses without
// parsing human-oriented messages.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Malformed or inconsistent inputs: bad weights, overlapping atoms,
// length mismatches, unparsable instances. Mapped to exit status 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// A requested enumeration would exceed a configured size cap.
// Mapped to exit status 3.
class CapError : public Error {
 public:
  using Error::Error;
};

// A mathematical precondition of an operation does not hold for the given
// arguments (e.g. the supplied operator is not an orthogonal projection).
// Mapped to exit status 2.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace wce
