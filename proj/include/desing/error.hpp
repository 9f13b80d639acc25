#pragma once

#include <stdexcept>
#include <string>

namespace desing {

enum class Errc {
  ParseError,
  ZeroIdeal,
  NotAlignable,
  NoUnitLinearPart,
  PermissibilityViolation,
  StepBudgetExceeded,
  InvalidFiber,
  ComponentCountUndecided,
  CompatibilityBroken,
  NoSmoothPoint,
  Internal,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ParseError: return "ParseError";
    case Errc::ZeroIdeal: return "ZeroIdeal";
    case Errc::NotAlignable: return "NotAlignable";
    case Errc::NoUnitLinearPart: return "NoUnitLinearPart";
    case Errc::PermissibilityViolation: return "PermissibilityViolation";
    case Errc::StepBudgetExceeded: return "StepBudgetExceeded";
    case Errc::InvalidFiber: return "InvalidFiber";
    case Errc::ComponentCountUndecided: return "ComponentCountUndecided";
    case Errc::CompatibilityBroken: return "CompatibilityBroken";
    case Errc::NoSmoothPoint: return "NoSmoothPoint";
    case Errc::Internal: return "Internal";
  }
  return "Internal";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void ensure(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace desing
