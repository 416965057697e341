#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace cascade {

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Resonance,
  Geometry,
  Regime,
  Size,
  Numerical,
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

const char* error_kind_name(ErrorKind kind);

// Non-fatal diagnostics. Default handler prints to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void warn(const std::string& msg);

}  // namespace cascade
