#pragma once

#include <stdexcept>
#include <string>

namespace satac {

enum class ErrorKind {
  invalid_argument,  // bad parameter or malformed input data
  io,                // file read/write failure
  bad_state,         // operation called before its preconditions were set up
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace satac
