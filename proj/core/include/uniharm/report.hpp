#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uniharm/criteria.hpp"
#include "uniharm/geometry.hpp"
#include "uniharm/oracle.hpp"

namespace uniharm {

/// Canonical JSON (sorted keys, no whitespace, 17 significant digits).
/// Complex numbers are [re, im]; an infinite sup is written as
/// "value": null together with "infinite": true.
std::string to_json(const CriterionReport& r);
std::string to_json(const OracleVerdict& v);
std::string to_json(const UnivalenceReport& r);
std::string to_json(const ConnectivityEstimate& c);
std::string to_json(const std::vector<SweepEntry>& sweep);

std::uint64_t fnv1a64(std::string_view bytes);

/// "theta,re,im" header then n rows theta_j, Re f(e^{i theta_j}),
/// Im f(e^{i theta_j}) with theta_j = 2 pi j / n; LF line endings.
/// Throws Error(kOutOfRange) for n < 1.
std::string boundary_csv(const MapEvaluator& f, int n);

/// boundary_csv written atomically. Throws Error(kIo).
void emit_boundary_csv(const MapEvaluator& f, int n, const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over path.
/// Throws Error(kIo).
void write_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace uniharm
