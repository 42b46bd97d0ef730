#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "uniharm/criteria.hpp"
#include "uniharm/geometry.hpp"
#include "uniharm/maps.hpp"

namespace uniharm {

/// A collision is accepted only below this residual |f(z1) - f(z2)|.
inline constexpr double kCollisionResidual = 1e-12;

struct OracleGrid {
  int n = 256;          // points per axis of the square grid over [-1, 1]^2
  double sigma = 1e-3;  // minimum |z1 - z2| of a collision
  double tau = 1e-6;    // image-space candidate radius
};

enum class OracleStatus { kPass, kCollision, kJacobianSignFailure, kBoundaryAnomaly };

std::string_view to_string(OracleStatus status);

struct OracleVerdict {
  OracleStatus status = OracleStatus::kPass;
  std::optional<cplx> z1;  // collision: both points; Jacobian: the argmin;
  std::optional<cplx> z2;  // boundary: the offending sample
  double residual = 0.0;   // |f(z1) - f(z2)| for collisions, min J for Jacobian failures
  OracleGrid grid;
  long candidates = 0;     // overlapping image-cell pairs examined
  std::optional<int> winding;
};

/// Searches for z1, z2 in the closed disk with |z1 - z2| >= sigma and
/// |f(z1) - f(z2)| <= 1e-12.
///
/// The disk is covered by the triangulated n x n grid (points outside the
/// disk are projected radially onto the circle). Pairs of triangles that share
/// no vertex but whose image triangles overlap, within tau, are refined: the
/// shared image point is pulled back through both piecewise-linear pieces,
/// compass search (4 real coordinates, at most 500 polls, step factor 0.5)
/// minimizes |f(z1) - f(z2)|^2 under a separation penalty, and a Newton solve
/// of f(z2) = f(z1) polishes the result. Candidates are processed in
/// grid-index order and the first confirmed collision wins.
OracleVerdict injectivity_scan(const MapEvaluator& f, const OracleGrid& grid = {});

struct JacobianScan {
  double min_J = 0.0;
  cplx argmin;
  OracleStatus status = OracleStatus::kPass;
};

/// Minimum of J over the grid points inside the disk plus 4n points on the
/// unit circle. Failure when min J <= 0.
JacobianScan jacobian_scan(const MapEvaluator& f, int n = 256);

/// Total signed turning of the polyline around w, in whole turns.
/// Throws Error(kPointOnCurve) when w is within 1e-12 of the polyline.
int winding_number(const BoundaryPolyline& poly, cplx w);

/// Every stage of the univalence check, in evaluation order.
struct UnivalenceReport {
  JacobianScan jacobian;
  bool boundary_simple = false;
  std::optional<int> winding;  // around f(0); empty when f(0) lies on the curve
  std::optional<OracleVerdict> injectivity;  // empty when skipped after an earlier failure
  OracleVerdict verdict;
};

/// Jacobian scan, then boundary simplicity and winding number 1 around f(0)
/// (boundary sampled at 4n points), then the injectivity scan. The verdict is
/// the first failure in that order. With run_all = false the later stages are
/// skipped once one has failed.
UnivalenceReport univalence_report(const MapEvaluator& f, const OracleGrid& grid = {}, bool run_all = true);

OracleVerdict univalence_verdict(const MapEvaluator& f, const OracleGrid& grid = {});
OracleVerdict univalence_verdict(const MapData& map, const OracleGrid& grid = {});

struct SweepEntry {
  cplx a;
  OracleVerdict verdict;
};

/// floor(count/2) evenly spaced angles at modulus 0.5, the rest at 0.95,
/// optionally preceded by a = 0. The default is 8 angles times {0.5, 0.95}.
std::vector<cplx> stable_samples(int count = 16, bool include_zero = false);

/// Runs univalence_verdict on f_a = a |z|^{2(p-1)} G + K for every sample.
/// Throws Error(kOutOfRange) when some |a| >= 1.
std::vector<SweepEntry> stable_sweep(const PolyZZbar& G, const HarmonicComponent& K, int p,
                                     const std::vector<cplx>& samples, const OracleGrid& grid = {});

}  // namespace uniharm
