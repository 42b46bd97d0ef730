#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "uniharm/criteria.hpp"
#include "uniharm/error.hpp"
#include "uniharm/oracle.hpp"
#include "uniharm/parallel.hpp"
#include "uniharm/report.hpp"

using namespace uniharm;
namespace ut = uniharm::testing;

namespace {

const cplx I(0, 1);
const HarmonicComponent kIdentity = HarmonicComponent::analytic({0.0, 1.0});

MapEvaluator poly(PolyZZbar p) { return MapEvaluator(std::move(p)); }

void check_collision_contract(const MapEvaluator& f, const OracleVerdict& v) {
  REQUIRE(v.status == OracleStatus::kCollision);
  REQUIRE(v.z1);
  REQUIRE(v.z2);
  CHECK(std::abs(*v.z1) <= 1.0 + 1e-15);
  CHECK(std::abs(*v.z2) <= 1.0 + 1e-15);
  CHECK(std::abs(*v.z1 - *v.z2) >= v.grid.sigma);
  CHECK(std::abs(f.value(*v.z1) - f.value(*v.z2)) <= kCollisionResidual);
  CHECK(v.residual == std::abs(f.value(*v.z1) - f.value(*v.z2)));
}

}  // namespace

TEST_CASE("status names") {
  CHECK(to_string(OracleStatus::kPass) == "pass");
  CHECK(to_string(OracleStatus::kCollision) == "collision");
  CHECK(to_string(OracleStatus::kJacobianSignFailure) == "jacobian-sign-failure");
  CHECK(to_string(OracleStatus::kBoundaryAnomaly) == "boundary-anomaly");
}

TEST_CASE("injectivity scan on univalent maps") {
  for (const auto& p : {PolyZZbar::z(), PolyZZbar{{1, 0, 1.0}, {0, 1, 0.3}}, PolyZZbar{{1, 0, 1.0}, {2, 0, 0.3}},
                        PolyZZbar{{1, 0, 1.0}, {3, 0, 0.1}}, PolyZZbar{{1, 0, 1.0}, {2, 0, -0.25}},
                        PolyZZbar{{1, 0, 1.0}, {2, 0, cplx(0.1, 0.1)}, {3, 0, 0.05}}}) {
    const auto v = injectivity_scan(poly(p));
    CHECK(v.status == OracleStatus::kPass);
    CHECK(v.grid.n == 256);
    CHECK(univalence_verdict(poly(p)).status == OracleStatus::kPass);
  }
}

TEST_CASE("z^2 collides on the (z, -z) family") {
  const auto f = poly(PolyZZbar{{2, 0, 1.0}});
  const auto v = injectivity_scan(f);
  check_collision_contract(f, v);
  CHECK(std::abs(*v.z1 + *v.z2) <= 1e-6);
}

TEST_CASE("|z|^4 z^4 collides on rotations by quarter turns") {
  const auto f = poly(PolyZZbar{{6, 2, 1.0}});
  const auto v = injectivity_scan(f);
  check_collision_contract(f, v);
  CHECK(std::abs(std::abs(*v.z1) - std::abs(*v.z2)) <= 1e-6);
  CHECK(std::abs(std::pow(*v.z2 / *v.z1, 4) - 1.0) <= 1e-6);
  CHECK(univalence_verdict(f).status != OracleStatus::kPass);
}

TEST_CASE("5|z|^2 + z collides on the family Re z1 + Re z2 = -0.2") {
  const auto f = poly(PolyZZbar{{1, 1, 5.0}, {1, 0, 1.0}});
  CHECK(std::abs(f.value(0.0) - f.value(-0.2)) <= 1e-15);
  const auto v = injectivity_scan(f);
  check_collision_contract(f, v);
  CHECK(std::abs(v.z1->imag() - v.z2->imag()) <= 1e-9);
  CHECK(std::abs(v.z1->real() + v.z2->real() + 0.2) <= 1e-9);
}

TEST_CASE("Jacobian scan") {
  CHECK(jacobian_scan(poly(PolyZZbar::z())).min_J == doctest::Approx(1.0));
  const auto c = jacobian_scan(poly(PolyZZbar::zbar()));
  CHECK(c.min_J == doctest::Approx(-1.0));
  CHECK(c.status == OracleStatus::kJacobianSignFailure);
  // f_z = 0.3 zbar + 1, f_zbar = 0.3 z: J = |1 + 0.3 zbar|^2 - 0.09|z|^2, least at z = -1
  const auto b = jacobian_scan(poly(PolyZZbar{{1, 1, 0.3}, {1, 0, 1.0}}));
  CHECK(std::abs(b.min_J - 0.40) <= 1e-6);
  CHECK(std::abs(b.argmin + 1.0) <= 1e-6);
  CHECK(b.status == OracleStatus::kPass);
}

TEST_CASE("winding numbers") {
  const auto circle = boundary_polyline(poly(PolyZZbar::z()), 256);
  CHECK(winding_number(circle, 0.0) == 1);
  CHECK(winding_number(circle, 2.0) == 0);
  const auto twice = boundary_polyline(poly(PolyZZbar{{2, 0, 1.0}}), 256);
  CHECK(winding_number(twice, 0.5) == 2);
  BoundaryPolyline cw;
  for (auto it = circle.points.rbegin(); it != circle.points.rend(); ++it) cw.points.push_back(*it);
  CHECK(winding_number(cw, 0.1) == -1);
  CHECK_THROWS_AS(winding_number(circle, 1.0), Error);
}

TEST_CASE("univalence verdict order") {
  CHECK(univalence_verdict(poly(PolyZZbar::z())).status == OracleStatus::kPass);
  CHECK(univalence_verdict(poly(PolyZZbar::zbar())).status == OracleStatus::kJacobianSignFailure);
  const auto r = univalence_report(poly(PolyZZbar{{6, 2, 1.0}}));
  CHECK_FALSE(r.boundary_simple);
  REQUIRE(r.injectivity);
  CHECK(r.injectivity->status == OracleStatus::kCollision);
  CHECK(r.verdict.status == OracleStatus::kBoundaryAnomaly);
  const auto quick = univalence_report(poly(PolyZZbar{{6, 2, 1.0}}), {}, false);
  CHECK_FALSE(quick.injectivity);
  CHECK(quick.verdict.status == OracleStatus::kBoundaryAnomaly);
}

TEST_CASE("stable sweep") {
  const auto samples = stable_samples();
  CHECK(samples.size() == 16);
  int inner = 0;
  for (cplx a : samples) inner += std::abs(std::abs(a) - 0.5) < 1e-15;
  CHECK(inner == 8);
  CHECK(stable_samples(16, true).size() == 17);
  CHECK(stable_samples(16, true)[0] == cplx(0.0));
  CHECK(stable_samples(5).size() == 5);

  const auto zero = stable_sweep(PolyZZbar::constant(5.0), kIdentity, 2, {0.0});
  CHECK(zero[0].verdict.status == OracleStatus::kPass);  // f_0 = K

  for (const auto& e : stable_sweep(PolyZZbar::constant(0.2), kIdentity, 2, samples))
    CHECK(e.verdict.status == OracleStatus::kPass);

  CHECK_THROWS_AS(stable_sweep(PolyZZbar::constant(0.2), kIdentity, 2, {1.0}), Error);
}

TEST_CASE("stable sweep finds the real-axis collision of 4.95|z|^2 + z") {
  // 4.95 x^2 + x = 0 at x = 0 and x = -1/4.95 ~ -0.202; in general
  // A(|z1|^2 - |z2|^2) = z2 - z1 forces Im z1 = Im z2 and Re z1 + Re z2 = -1/A.
  const double A = 5.0 * 0.99;
  const auto sweep = stable_sweep(PolyZZbar::constant(5.0), kIdentity, 2, {0.99});
  REQUIRE(sweep.size() == 1);
  const auto f = poly(PolyZZbar{{1, 1, A}, {1, 0, 1.0}});
  const auto v = injectivity_scan(f);
  check_collision_contract(f, v);
  CHECK(std::abs(v.z1->real() + v.z2->real() + 1.0 / A) <= 1e-9);
  CHECK(sweep[0].verdict.status != OracleStatus::kPass);
}

TEST_CASE("collision contract on random non-injective maps") {
  std::mt19937_64 rng(51);
  int collisions = 0;
  for (int i = 0; i < 12; ++i) {
    const auto f = poly(ut::random_poly(rng, 3) * cplx(2.0));
    const auto v = injectivity_scan(f);
    if (v.status == OracleStatus::kCollision) {
      ++collisions;
      check_collision_contract(f, v);
    }
  }
  CHECK(collisions > 0);
}

TEST_CASE("collisions persist under grid refinement") {
  for (const auto& p : {PolyZZbar{{2, 0, 1.0}}, PolyZZbar{{1, 1, 5.0}, {1, 0, 1.0}}, PolyZZbar{{6, 2, 1.0}}}) {
    const auto f = poly(p);
    OracleGrid coarse;
    coarse.n = 128;
    const auto a = injectivity_scan(f, coarse);
    const auto b = injectivity_scan(f, {});
    check_collision_contract(f, a);
    check_collision_contract(f, b);
  }
}

TEST_CASE("no collisions on instances certified by the two-term criterion") {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 8; ++i) {
    const int p = 2 + i % 2;
    const PolyZZbar G = ut::random_poly(rng, 3);
    const double s = sup_disk(Ratio(RatioKind::kT1, to_almansi({p, G, kIdentity}))).value;
    const AlmansiMap a = to_almansi({p, G * cplx(0.9 / s), kIdentity});
    REQUIRE(certify(a, RatioKind::kT1, MBasis::convex()).verdict == Verdict::kCertified);
    CHECK(univalence_verdict(MapData(a)).status == OracleStatus::kPass);
  }
}

TEST_CASE("oracle results do not depend on the worker count") {
  const std::vector<PolyZZbar> maps = {PolyZZbar::z(), PolyZZbar{{1, 1, 5.0}, {1, 0, 1.0}}, PolyZZbar{{6, 2, 1.0}},
                                       PolyZZbar{{1, 0, 1.0}, {0, 2, 0.4}}};
  for (const auto& p : maps) {
    std::string first;
    for (int workers : {1, 3, 8}) {
      ScopedWorkerCount scope(workers);
      const std::string s = to_json(univalence_report(poly(p)));
      if (first.empty()) first = s;
      CHECK(s == first);
    }
  }
}
