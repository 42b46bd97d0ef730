#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uniharm/maps.hpp"

namespace uniharm {

enum class SpecKind { kPolyharmonic, kLogPHarmonic };

std::string_view to_string(SpecKind kind);

/// Declarative map description. components[j-1] is G_j, so the last entry is
/// the weight-1 component G_p and the first carries |z|^{2(p-1)}.
///
/// JSON form:
///   {"kind": "polyharmonic" | "log-p-harmonic", "p": 2,
///    "components": [{"type": "harmonic", "h": [[re, im], ...], "g": [[re, im], ...]},
///                   {"type": "polyzzbar", "terms": [[m, n, re, im], ...]}],
///    "name": "...", "notes": "..."}
struct MapSpec {
  SpecKind kind = SpecKind::kPolyharmonic;
  int p = 1;
  std::vector<Component> components;
  std::optional<std::string> name;
  std::optional<std::string> notes;
};

/// Largest accepted exponent in a spec.
inline constexpr int kMaxSpecDegree = 256;

/// Throws Error(kInvalidSpec) with a message of the form "<field path>: <reason>".
MapSpec parse_spec_text(std::string_view text);
/// Also throws Error(kIo) when the file cannot be read.
MapSpec parse_spec(const std::filesystem::path& path);

/// Sorted keys, no whitespace, 17 significant digits. Re-parsing the output
/// reproduces it byte for byte.
std::string canonical_json(const MapSpec& spec);

/// "fnv1a64:" followed by 16 hex digits of the canonical JSON hash.
std::string spec_digest(const MapSpec& spec);

MapData to_map_data(const MapSpec& spec);

}  // namespace uniharm
