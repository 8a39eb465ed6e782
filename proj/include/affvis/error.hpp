#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace affvis {

enum class ErrorCode {
  SingularInput,
  BadSymbol,
  Budget,
  NoCone,
  ImproperCone,
  NoGap,
  ExceptionalDirection,
  DirectionInCone,
  EmptyCylinderView,
  NoExit,
  StreamExhausted,
  TooFewScales,
  ParseError,
  NotContractive,
  Singular,
  UnknownScenario,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Module-qualified failure. `module()` names the subsystem that raised it
/// ("linalg2", "symbolic", ...) so reports can print e.g. `symbolic.Budget`.
class Error : public std::runtime_error {
 public:
  Error(std::string_view module, ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }
  std::string qualified_code() const;

 private:
  std::string module_;
  ErrorCode code_;
};

/// Cell/point budget shared by every enumerating routine. Defaults to 5e7 and
/// can be overridden with the AFFINE_VIS_BUDGET environment variable.
std::size_t default_budget();

}  // namespace affvis
