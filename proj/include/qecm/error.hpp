#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qecm {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  DimensionOverflow,
  DimensionMismatch,
  NotPSD,
  ParseError,
  MixedArity,
  BadProbability,
  BadIndex,
  EmptyCode,
  ConditionsViolated,
  DegenerateError,
  BadN,
  InvalidConfig,
  RecoveryDimensionMismatch,
  MissingParam,
  InvalidSpec,
  DegenerateInput,
};

std::string_view to_string(ErrorKind kind);

// Numerical failures map to CLI exit code 3, everything else to 2.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Pauli-expression syntax error, carries the byte offset of the offending character.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(ErrorKind::ParseError, "at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace qecm
