#pragma once

#include <stdexcept>
#include <string>

namespace pqe {

// Base class for all recoverable toolkit errors. The CLI turns these into a
// diagnostic line and a nonzero exit status.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An input file could not be parsed. Carries a 1-based line number when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, long line = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace pqe
