#pragma once

#include <stdexcept>
#include <string>

namespace fslice {

enum class ErrorKind {
  Syntax,
  NotAnf,
  Validation,
  Runtime,
  HoleObserved,
  Timeout,
  Criterion,
  Artifact,
  Mismatch,
  UnknownLabel,
  FirstifyUnsupported,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fslice
