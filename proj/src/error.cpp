#include "cascade/error.hpp"

#include <cstdio>
#include <mutex>

namespace cascade {

namespace {
std::mutex g_warn_mutex;
WarningHandler g_warn_handler;
}  // namespace

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Resonance: return "resonance error";
    case ErrorKind::Geometry: return "geometry error";
    case ErrorKind::Regime: return "regime error";
    case ErrorKind::Size: return "size error";
    case ErrorKind::Numerical: return "numerical abort";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "io error";
  }
  return "error";
}

void set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

void warn(const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  if (g_warn_handler) {
    g_warn_handler(msg);
  } else {
    std::fprintf(stderr, "warning: %s\n", msg.c_str());
  }
}

}  // namespace cascade
