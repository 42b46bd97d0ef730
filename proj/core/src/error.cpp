#include "uniharm/error.hpp"

namespace uniharm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegeneratePoint: return "degenerate-point";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kConvexCheckFailed: return "convex-check-failed";
    case ErrorCode::kNonSimple: return "non-simple";
    case ErrorCode::kPointOnCurve: return "point-on-curve";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kInvalidSpec: return "invalid-spec";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace uniharm
