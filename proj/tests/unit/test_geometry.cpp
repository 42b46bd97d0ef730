#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "uniharm/error.hpp"
#include "uniharm/geometry.hpp"

using namespace uniharm;
namespace ut = uniharm::testing;

namespace {

const cplx I(0, 1);
const std::vector<cplx> kL = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
const std::vector<cplx> kSquare = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};

MapEvaluator analytic(std::vector<cplx> h) { return MapEvaluator(MapData(HarmonicComponent::analytic(std::move(h)))); }

BoundaryPolyline circle(int n) { return boundary_polyline(analytic({0.0, 1.0}), n); }

BoundaryPolyline cardioid(int n) { return boundary_polyline(analytic({0.0, 1.0, 0.45}), n); }

bool path_inside(const PolygonDomain& d, const std::vector<cplx>& poly, const std::vector<cplx>& path) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (!d.visible(path[i], path[i + 1]) || !ut::segment_inside(poly, path[i], path[i + 1])) return false;
  return true;
}

}  // namespace

TEST_CASE("boundary samples") {
  const auto id = boundary_samples(analytic({0.0, 1.0}), 4);
  const std::vector<cplx> expect = {1.0, I, -1.0, -I};
  for (int j = 0; j < 4; ++j) CHECK(std::abs(id[j] - expect[j]) <= 1e-15);
  const auto twice = boundary_samples(analytic({0.0, 2.0}), 4);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(twice[j] - 2.0 * expect[j]) <= 1e-15);
  const auto sq = boundary_samples(analytic({0.0, 0.0, 1.0}), 4);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(sq[j] - (j % 2 ? -1.0 : 1.0)) <= 1e-15);
  CHECK_FALSE(is_simple(boundary_polyline(analytic({0.0, 0.0, 1.0}), 4)));
  CHECK_THROWS_AS(boundary_samples(analytic({0.0, 1.0}), 2), Error);
}

TEST_CASE("duplicate points are merged") {
  const auto p = make_polyline({0.0, 1.0, 1.0 + 1e-16, cplx(1, 1), cplx(0, 1), 0.0});
  CHECK(p.points.size() == 4);
  const auto c = boundary_polyline(analytic({0.0, 0.0, 1.0}), 256);
  CHECK(c.points.size() == 256);  // doubly traversed, but no consecutive repeats
}

TEST_CASE("simplicity") {
  CHECK(is_simple(circle(256)));
  CHECK_FALSE(is_simple(make_polyline({0.0, cplx(1, 1), 1.0, I})));
  CHECK_FALSE(is_simple(boundary_polyline(analytic({0.0, 0.0, 1.0}), 256)));
  CHECK(is_simple(make_polyline(kL)));
  CHECK(is_simple(cardioid(2048)));
  // a spike folding back onto its own edge
  CHECK_FALSE(is_simple(make_polyline({0.0, 2.0, 1.0, cplx(1, 1)})));
}

TEST_CASE("convexity") {
  CHECK(is_convex(circle(256)));
  CHECK_FALSE(is_convex(make_polyline(kL)));
  CHECK(is_convex(make_polyline(kSquare)));
  CHECK(is_convex(make_polyline({0.0, 0.5, 1.0, cplx(1, 1), I})));  // collinear vertex
  CHECK_FALSE(is_convex(cardioid(1024)));
  CHECK(is_convex(boundary_polyline(analytic({0.0, 1.0, 0.2}), 1024)));
  CHECK_THROWS_AS(is_convex(make_polyline({0.0, cplx(1, 1), 1.0, I})), Error);
}

TEST_CASE("polygon domain queries") {
  const PolygonDomain d(make_polyline(kL));
  REQUIRE(d.reflex_vertices().size() == 1);
  CHECK(d.vertices()[static_cast<std::size_t>(d.reflex_vertices()[0])] == cplx(1, 1));
  CHECK(d.contains(cplx(0.5, 1.5)));
  CHECK(d.contains(cplx(2, 0.5)));  // boundary
  CHECK_FALSE(d.contains(cplx(1.5, 1.5)));
  CHECK(d.visible(cplx(0.5, 0.5), cplx(1.5, 0.5)));
  CHECK(d.visible(cplx(2, 0), cplx(0, 2)));  // through the reflex corner
  CHECK_FALSE(d.visible(cplx(2, 1), cplx(1, 2)));
  CHECK(d.visible(cplx(2, 1), cplx(1, 1)));  // along an edge

  const auto path = d.shortest_path(cplx(2, 1), cplx(1, 2));
  CHECK(path.length == doctest::Approx(2.0).epsilon(1e-15));
  REQUIRE(path.points.size() == 3);
  CHECK(path.points[1] == cplx(1, 1));
  CHECK_THROWS_AS(PolygonDomain(make_polyline({0.0, cplx(1, 1), 1.0, I})), Error);
}

TEST_CASE("L-shape: forced witness pair and lattice cross-check") {
  const auto est = connectivity_estimate(make_polyline(kL), 0, 0, {{cplx(2, 1), cplx(1, 2)}});
  CHECK(est.Mhat == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(est.path_length == doctest::Approx(2.0).epsilon(1e-12));
  const double lattice = ut::lattice_shortest_path(kL, cplx(2, 1), cplx(1, 2), 1.0 / 32);
  CHECK(std::abs(lattice - est.path_length) <= 1e-3);

  // an off-axis pair whose lattice path is only approximately straight
  const cplx a(2, 0.5), b(0.5, 2);
  const PolygonDomain d(make_polyline(kL));
  const double exact = std::abs(a - cplx(1, 1)) + std::abs(cplx(1, 1) - b);
  CHECK(d.shortest_path(a, b).length == doctest::Approx(exact).epsilon(1e-14));
  CHECK(ut::lattice_shortest_path(kL, a, b, 1.0 / 64, 6) - exact <= 1e-2);
  CHECK(ut::lattice_shortest_path(kL, a, b, 1.0 / 64, 6) >= exact - 1e-12);
}

TEST_CASE("convex polygons have Mhat = 1") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(std::abs(connectivity_estimate(make_polyline(kSquare), 200, seed).Mhat - 1.0) <= 1e-9);
    CHECK(std::abs(connectivity_estimate(circle(256), 200, seed).Mhat - 1.0) <= 1e-9);
  }
  const auto disk = connectivity_estimate(circle(2048), 1000, 0);
  CHECK(disk.Mhat >= 1.0);
  CHECK(disk.Mhat <= 1.0 + 1e-3);
}

TEST_CASE("shortest paths match an all-pairs vertex oracle") {
  const auto poly = cardioid(128);
  const auto& v = poly.points;
  const auto geo = ut::vertex_geodesics(v);
  const PolygonDomain d(poly);
  CHECK(d.reflex_vertices().size() > 5);
  double worst = 0.0, dense_M = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const auto path = d.shortest_path(v[i], v[j]);
      worst = std::max(worst, std::abs(path.length - geo[i][j]));
      dense_M = std::max(dense_M, geo[i][j] / std::abs(v[i] - v[j]));
    }
  CHECK(worst <= 1e-12);

  std::vector<std::pair<cplx, cplx>> all_pairs;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) all_pairs.emplace_back(v[i], v[j]);
  const auto forced = connectivity_estimate(poly, 0, 0, all_pairs);
  CHECK(forced.Mhat >= dense_M - 1e-9);
  const auto sampled = connectivity_estimate(poly, 1000, 0);
  CHECK(sampled.Mhat <= forced.Mhat + 1e-9);
  CHECK(sampled.Mhat >= 0.99 * dense_M);
}

TEST_CASE("estimate invariants") {
  for (const auto& poly : {make_polyline(kL), cardioid(512)}) {
    const auto est = connectivity_estimate(poly, 300, 7);
    CHECK(est.Mhat >= 1.0 - 1e-9);
    CHECK(est.Mhat == doctest::Approx(est.path_length / std::abs(est.witness.first - est.witness.second))
                          .epsilon(1e-12));
    const PolygonDomain d(poly);
    CHECK(path_inside(d, poly.points, est.path));
  }
}

TEST_CASE("random shortest paths stay inside") {
  const auto poly = cardioid(512);
  const PolygonDomain d(poly);
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> pick(0, poly.points.size() - 1);
  for (int i = 0; i < 100; ++i) {
    const auto path = d.shortest_path(poly.points[pick(rng)], poly.points[pick(rng)]);
    CHECK(path_inside(d, poly.points, path.points));
  }
}

TEST_CASE("monotone in the number of pairs") {
  const auto poly = cardioid(512);
  double prev = 0.0;
  for (int pairs : {10, 50, 200, 800}) {
    const double m = connectivity_estimate(poly, pairs, 3).Mhat;
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("similarity invariance") {
  const cplx a(0.3, -1.7), b(5.0, 2.0);
  for (const auto& poly : {make_polyline(kL), cardioid(512)}) {
    BoundaryPolyline moved;
    for (cplx w : poly.points) moved.points.push_back(a * w + b);
    const auto e1 = connectivity_estimate(poly, 300, 9);
    const auto e2 = connectivity_estimate(moved, 300, 9);
    CHECK(std::abs(e1.Mhat - e2.Mhat) <= 1e-9);
  }
}
