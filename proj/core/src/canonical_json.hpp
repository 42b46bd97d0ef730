#pragma once

#include <string>

#include "json.hpp"

namespace uniharm::detail {

/// Sorted keys, no insignificant whitespace, doubles with 17 significant
/// digits, non-finite doubles as null.
std::string canonical_dump(const nlohmann::json& j);

std::string format_double(double x);

}  // namespace uniharm::detail
