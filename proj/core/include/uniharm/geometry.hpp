#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "uniharm/maps.hpp"

namespace uniharm {

/// Consecutive boundary samples closer than this are merged.
inline constexpr double kDuplicatePointTol = 1e-14;
/// Segment-intersection tolerance, relative to max(1, polygon diameter).
inline constexpr double kSegmentTol = 1e-12;

/// Closed polyline through f(e^{2 pi i j / n}).
struct BoundaryPolyline {
  std::vector<cplx> points;
  bool closed = true;
};

/// Builds a closed polyline from raw points, merging consecutive (and
/// wrap-around) duplicates.
BoundaryPolyline make_polyline(std::vector<cplx> points);

/// Samples the image of the unit circle. Throws Error(kOutOfRange) for n < 3.
BoundaryPolyline boundary_polyline(const MapEvaluator& f, int n);
BoundaryPolyline boundary_polyline(const MapData& map, int n);

/// Raw samples f(e^{i theta_j}) without duplicate merging.
std::vector<cplx> boundary_samples(const MapEvaluator& f, int n);

/// No two non-adjacent segments meet and adjacent segments share only their
/// common endpoint.
bool is_simple(const BoundaryPolyline& poly);

/// All turns have one sign; |cross| < tol * |e1| * |e2| counts as straight.
/// Throws Error(kNonSimple).
bool is_convex(const BoundaryPolyline& poly, double tol = 1e-9);

struct PolygonPath {
  std::vector<cplx> points;
  double length = 0.0;
};

/// A simple polygon with a precomputed visibility graph over its reflex
/// vertices. Shortest paths inside a simple polygon bend only at reflex
/// vertices, and only along segments tangent there, so the tangent part of
/// this graph plus the two endpoints answers path queries.
class PolygonDomain {
 public:
  /// Throws Error(kNonSimple).
  explicit PolygonDomain(const BoundaryPolyline& poly);
  ~PolygonDomain();
  PolygonDomain(PolygonDomain&&) noexcept;
  PolygonDomain& operator=(PolygonDomain&&) noexcept;

  const std::vector<cplx>& vertices() const noexcept;
  const std::vector<int>& reflex_vertices() const noexcept;

  /// Closed-domain membership (boundary counts as inside).
  bool contains(cplx w) const;
  /// Segment [a, b] stays in the closed domain.
  bool visible(cplx a, cplx b) const;
  /// Shortest path inside the closed domain; both endpoints must be inside.
  PolygonPath shortest_path(cplx a, cplx b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ConnectivityEstimate {
  double Mhat = 1.0;
  std::pair<cplx, cplx> witness;
  double path_length = 0.0;
  long pairs_sampled = 0;
  std::vector<cplx> path;  // shortest path realizing the witness ratio
};

/// Sampled lower bound on the linear-connectivity constant of the polygon's
/// interior: the largest ratio (shortest interior path) / |w1 - w2| over
///   - every pair drawn from the reflex vertices and their neighbours
///     (capped at 64 points),
///   - `forced` pairs,
///   - `pairs` seeded random pairs mixing vertices and interior points.
/// Sampling is done in a frame normalized by the first edge, so results are
/// invariant under w -> a w + b. Throws Error(kNonSimple).
ConnectivityEstimate connectivity_estimate(const BoundaryPolyline& poly, int pairs,
                                           std::uint64_t seed,
                                           const std::vector<std::pair<cplx, cplx>>& forced = {});

}  // namespace uniharm
