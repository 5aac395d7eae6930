// error.hpp
// Error kinds shared by every module; the CLI maps them onto exit codes.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace exposure_lab {

enum class ErrorKind {
  InvalidDimensions,
  InvalidArgument,
  InvalidState,
  InvalidOperator,
  NumericalFailure,
  RankDeficientState,
  InconsistentPurities,
  NoSolution,
  TruncationError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace exposure_lab
