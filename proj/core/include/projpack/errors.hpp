#pragma once

#include <stdexcept>
#include <string>

namespace projpack {

// Base for everything thrown on purpose. The CLI maps ValidationError /
// ApplicabilityError / ParseError to exit code 3 and IoError to exit code 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad argument values, broken invariants, rejected frames.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A formula or operation was asked outside its stated applicability range.
class ApplicabilityError : public ValidationError {
 public:
  explicit ApplicabilityError(const std::string& what) : ValidationError(what) {}
};

// Malformed packing file; line is 1-based and refers to the physical line.
class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace projpack
