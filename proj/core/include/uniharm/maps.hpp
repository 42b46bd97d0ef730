#pragma once

#include <variant>
#include <vector>

#include "uniharm/metrics.hpp"
#include "uniharm/poly.hpp"

namespace uniharm {

/// h(z) + conj(g(z)) with h, g analytic polynomials given by coefficient
/// lists (index k holds the coefficient of z^k).
struct HarmonicComponent {
  std::vector<cplx> h;
  std::vector<cplx> g;

  static HarmonicComponent analytic(std::vector<cplx> h) { return {std::move(h), {}}; }

  friend bool operator==(const HarmonicComponent&, const HarmonicComponent&) = default;
};

/// A component of an Almansi expansion: harmonic, or an arbitrary
/// z/conj(z) polynomial when the criteria allow non-harmonic data.
using Component = std::variant<HarmonicComponent, PolyZZbar>;

PolyZZbar lower(const HarmonicComponent& c);
PolyZZbar lower(const Component& c);
bool is_harmonic(const Component& c);

/// f(z) = sum_{k=1}^{p} |z|^{2(k-1)} G_{p-k+1}(z).
///
/// components()[j-1] holds G_j, so G_p carries weight 1 and G_1 carries
/// |z|^{2(p-1)}.
class AlmansiMap {
 public:
  AlmansiMap(int p, std::vector<Component> components);

  int p() const noexcept { return p_; }
  const std::vector<Component>& components() const noexcept { return components_; }
  /// G_j for 1 <= j <= p.
  const Component& G(int j) const;
  bool all_harmonic() const;

  friend bool operator==(const AlmansiMap&, const AlmansiMap&) = default;

 private:
  int p_;
  std::vector<Component> components_;
};

PolyZZbar lower(const AlmansiMap& a);

/// f(z) = exp( sum_{k=1}^{p} |z|^{2(k-1)} G_{p-k+1}(z) ) with harmonic G_k,
/// equivalently prod_k g_{p-k+1}^{|z|^{2(k-1)}} with g_k = exp(G_k).
class LogPHarmonicMap {
 public:
  LogPHarmonicMap(int p, std::vector<HarmonicComponent> log_components);

  int p() const noexcept { return p_; }
  const std::vector<HarmonicComponent>& log_components() const noexcept { return log_components_; }
  /// G_j = log g_j for 1 <= j <= p.
  const HarmonicComponent& G(int j) const;
  /// The p-harmonic map log f.
  AlmansiMap log_map() const;

  friend bool operator==(const LogPHarmonicMap&, const LogPHarmonicMap&) = default;

 private:
  int p_;
  std::vector<HarmonicComponent> log_components_;
};

/// Lowers log f.
PolyZZbar lower(const LogPHarmonicMap& l);

cplx eval_logp(const LogPHarmonicMap& l, cplx z);

/// Second dilatation of g_j = exp(G_j): conj((G_j)_zbar) / (G_j)_z.
/// Throws Error(kDegeneratePoint) when |(G_j)_z| < 1e-14.
cplx second_dilatation(const LogPHarmonicMap& l, int j, cplx z);

using MapData = std::variant<HarmonicComponent, AlmansiMap, LogPHarmonicMap>;

/// Point evaluation of f, f_z and f_zbar for any supported map.
class MapEvaluator {
 public:
  explicit MapEvaluator(const MapData& map);
  explicit MapEvaluator(PolyZZbar f);

  cplx value(cplx z) const;
  Jet::Value jet(cplx z) const;
  PointMetrics metrics(cplx z) const;

  bool exponential() const noexcept { return exponential_; }
  /// The lowered polynomial (log f for log-p-harmonic maps).
  const PolyZZbar& polynomial() const noexcept { return jet_.f(); }

 private:
  Jet jet_;
  bool exponential_ = false;
};

}  // namespace uniharm
