#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace powres {

enum class ErrorCode {
  NotPrime,
  TooSmall,
  TooLarge,
  BadN,
  BadResidue,
  NotResidue,
  ScaleLimit,
  NotEnumerated,
  TrivialSubgroup,
  BadRadius,
  ZeroFrequency,
  EmptyRange,
  InvalidConfig,
  InsufficientData,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every domain failure in the library is reported through this type; the
// code is stable and drives the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace powres
