#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uniharm {

enum class ErrorCode {
  kDegeneratePoint,   // dilatation denominator vanishes
  kShapeMismatch,     // map data does not fit the requested criterion
  kConvexCheckFailed, // convex basis requested on a non-convex image
  kNonSimple,         // polyline self-intersects
  kPointOnCurve,      // winding number requested for a point on the curve
  kOutOfRange,        // parameter outside its documented range
  kInvalidSpec,       // map spec rejected (parse or semantic)
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uniharm
