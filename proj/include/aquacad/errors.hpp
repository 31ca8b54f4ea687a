#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aquacad {

/// Base of every error the library throws. The CLI maps these to exit
/// code 1 and the service maps them to HTTP status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

/// An argument outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class Conflict : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> fields)
      : Error(join(fields)), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const noexcept { return fields_; }

 private:
  static std::string join(const std::vector<std::string>& fields) {
    std::string out = "invalid record:";
    for (const auto& f : fields) out += " " + f + ";";
    return out;
  }
  std::vector<std::string> fields_;
};

}  // namespace aquacad
