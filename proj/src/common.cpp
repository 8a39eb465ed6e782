#include "affvis/error.hpp"
#include "affvis/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace affvis {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::BadSymbol: return "BadSymbol";
    case ErrorCode::Budget: return "Budget";
    case ErrorCode::NoCone: return "NoCone";
    case ErrorCode::ImproperCone: return "ImproperCone";
    case ErrorCode::NoGap: return "NoGap";
    case ErrorCode::ExceptionalDirection: return "ExceptionalDirection";
    case ErrorCode::DirectionInCone: return "DirectionInCone";
    case ErrorCode::EmptyCylinderView: return "EmptyCylinderView";
    case ErrorCode::NoExit: return "NoExit";
    case ErrorCode::StreamExhausted: return "StreamExhausted";
    case ErrorCode::TooFewScales: return "TooFewScales";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotContractive: return "NotContractive";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(std::string_view module, ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(module) + "." + std::string(to_string(code)) + ": " + message),
      module_(module),
      code_(code) {}

std::string Error::qualified_code() const { return module_ + "." + std::string(to_string(code_)); }

std::size_t default_budget() {
  if (const char* env = std::getenv("AFFINE_VIS_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v >= 1.0) return static_cast<std::size_t>(v);
  }
  return 50'000'000;
}

namespace {
std::atomic<unsigned> g_thread_limit{0};
}

void set_thread_limit(unsigned n) { g_thread_limit.store(n); }

unsigned thread_limit() {
  const unsigned n = g_thread_limit.load();
  if (n != 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace affvis
