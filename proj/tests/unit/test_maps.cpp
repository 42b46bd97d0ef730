#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "uniharm/error.hpp"
#include "uniharm/maps.hpp"

using namespace uniharm;
namespace ut = uniharm::testing;

namespace {

HarmonicComponent random_harmonic(std::mt19937_64& rng, int deg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  HarmonicComponent c;
  for (int k = 0; k <= deg; ++k) c.h.emplace_back(u(rng), u(rng));
  for (int k = 0; k <= deg; ++k) c.g.emplace_back(u(rng), u(rng));
  return c;
}

}  // namespace

TEST_CASE("lowering harmonic components") {
  const PolyZZbar id = lower(HarmonicComponent{{0.0, 1.0}, {0.0}});
  REQUIRE(id.terms().size() == 1);
  CHECK(id.terms()[0] == Term{1, 0, 1.0});

  // h + conj(g): g's coefficients are conjugated onto zbar^k
  const PolyZZbar p = lower(HarmonicComponent{{}, {0.0, cplx(0, 2)}});
  CHECK(p == PolyZZbar{{0, 1, cplx(0, -2)}});
}

TEST_CASE("two-component Almansi map lowers to |z|^2 c + z") {
  const cplx c(0.3, -0.1);
  const AlmansiMap a(2, {HarmonicComponent::analytic({c}), HarmonicComponent::analytic({0.0, 1.0})});
  CHECK(lower(a) == PolyZZbar{{1, 0, 1.0}, {1, 1, c}});
}

TEST_CASE("p=1 lowering is the component itself") {
  std::mt19937_64 rng(21);
  const HarmonicComponent H = random_harmonic(rng, 3);
  CHECK(lower(AlmansiMap(1, {H})) == lower(H));
  const PolyZZbar P = ut::random_poly(rng, 3);
  CHECK(lower(AlmansiMap(1, {P})) == P);

  const cplx z(0.4, 0.3);
  const auto a = MapEvaluator(MapData(AlmansiMap(1, {H}))).jet(z);
  const auto b = MapEvaluator(MapData(H)).jet(z);
  CHECK(a.f == b.f);
  CHECK(a.fz == b.fz);
  CHECK(a.fzbar == b.fzbar);
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(AlmansiMap(0, {}), Error);
  try {
    AlmansiMap(2, {HarmonicComponent::analytic({0.0, 1.0})});
    FAIL("expected a shape mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShapeMismatch);
    CHECK(std::string(e.what()).find("components length 1 ≠ p 2") != std::string::npos);
  }
  const AlmansiMap a(2, {PolyZZbar::z(), PolyZZbar::z()});
  CHECK_THROWS_AS(a.G(0), Error);
  CHECK_THROWS_AS(a.G(3), Error);
}

TEST_CASE("Almansi evaluation matches the weighted sum of components") {
  std::mt19937_64 rng(22);
  for (int p = 1; p <= 4; ++p) {
    std::vector<Component> comps;
    for (int j = 0; j < p; ++j) comps.push_back(j % 2 ? Component(ut::random_poly(rng, 3)) : random_harmonic(rng, 3));
    const AlmansiMap a(p, comps);
    const PolyZZbar f = lower(a);
    for (int i = 0; i < 50; ++i) {
      const cplx z = ut::random_in_disk(rng, 1.0);
      cplx sum = 0;
      for (int k = 1; k <= p; ++k) sum += std::pow(std::norm(z), k - 1) * lower(a.G(p - k + 1))(z);
      CHECK(std::abs(f(z) - sum) <= 1e-12);
    }
  }
}

TEST_CASE("harmonic components: no mixed terms, Delta^p f = 0") {
  std::mt19937_64 rng(23);
  for (int p = 1; p <= 4; ++p) {
    std::vector<Component> comps;
    for (int j = 0; j < p; ++j) {
      const HarmonicComponent h = random_harmonic(rng, 4);
      CHECK(lower(h).is_harmonic());
      comps.push_back(h);
    }
    const AlmansiMap a(p, comps);
    CHECK(a.all_harmonic());
    PolyZZbar f = lower(a);
    for (int k = 0; k < p - 1; ++k) f = laplacian(f);
    CHECK_FALSE(f.empty());  // Delta^{p-1} f does not vanish for generic data
    CHECK(laplacian(f).empty());
  }
}

TEST_CASE("log-p-harmonic evaluation") {
  const LogPHarmonicMap l(2, {HarmonicComponent::analytic({0.3}), HarmonicComponent::analytic({0.0, 1.0})});
  CHECK(std::abs(eval_logp(l, 0.0) - 1.0) <= 1e-15);
  CHECK(std::abs(eval_logp(l, 0.5) - std::exp(0.25 * 0.3 + 0.5)) <= 1e-14);
  const LogPHarmonicMap e(1, {HarmonicComponent::analytic({0.0, 1.0})});
  CHECK(std::abs(eval_logp(e, 1.0) - std::exp(1.0)) <= 1e-14);

  const MapEvaluator ev{MapData(l)};
  CHECK(ev.exponential());
  const cplx z(0.3, -0.2);
  CHECK(std::abs(ev.value(z) - eval_logp(l, z)) <= 1e-14);
  const auto [fz, fzb] = ut::fd_wirtinger([&](cplx w) { return eval_logp(l, w); }, z);
  const auto jet = ev.jet(z);
  CHECK(std::abs(jet.fz - fz) <= 1e-8);
  CHECK(std::abs(jet.fzbar - fzb) <= 1e-8);
}

TEST_CASE("second dilatation") {
  const auto mu = [](HarmonicComponent G, cplx z) {
    return second_dilatation(LogPHarmonicMap(1, {std::move(G)}), 1, z);
  };
  CHECK(std::abs(mu(HarmonicComponent::analytic({0.0, 1.0}), cplx(0.2, 0.1))) == 0.0);
  CHECK(std::abs(mu({{0.0, 1.0}, {0.0, 0.5}}, cplx(-0.4, 0.3)) - 0.5) <= 1e-15);
  CHECK_THROWS_AS(mu(HarmonicComponent::analytic({0.0, 0.0, 1.0}), 0.0), Error);

  // h = z, g = z^2/2: mu(z) = conj(conj(g'))/h' = z. Cross-checked against
  // finite differences of g = exp(G) through the log-harmonic relation
  // conj(g_zbar) = mu * conj(g)/g * g_z.
  const HarmonicComponent G{{0.0, 1.0}, {0.0, 0.0, 0.5}};
  const LogPHarmonicMap l(1, {G});
  std::mt19937_64 rng(24);
  for (int i = 0; i < 100; ++i) {
    const cplx z = ut::random_in_disk(rng, 0.9);
    const cplx m = second_dilatation(l, 1, z);
    CHECK(std::abs(m - z) <= 1e-14);
    const auto g = [&](cplx w) { return eval_logp(l, w); };
    const auto [gz, gzb] = ut::fd_wirtinger(g, z);
    const cplx fd_mu = std::conj(gzb) * g(z) / (std::conj(g(z)) * gz);
    CHECK(std::abs(fd_mu - m) <= 1e-7);
  }
}

TEST_CASE("second dilatation is the analytic dilatation g'/h' of the log component") {
  std::mt19937_64 rng(25);
  const auto derivative = [](const std::vector<cplx>& c, cplx z) {
    cplx s = 0;
    for (std::size_t k = 1; k < c.size(); ++k) s += static_cast<double>(k) * c[k] * std::pow(z, k - 1);
    return s;
  };
  for (int i = 0; i < 50; ++i) {
    HarmonicComponent G = random_harmonic(rng, 3);
    G.h[1] += 3.0;
    const LogPHarmonicMap l(2, {random_harmonic(rng, 2), G});
    const cplx z = ut::random_in_disk(rng, 1.0);
    const cplx mu = second_dilatation(l, 2, z);
    CHECK(std::abs(mu - derivative(G.g, z) / derivative(G.h, z)) <= 1e-13);
    const auto omega = metrics(lower(G), z).omega;
    REQUIRE(omega);
    CHECK(std::abs(std::abs(mu) - std::abs(*omega)) <= 1e-13);
  }
}
