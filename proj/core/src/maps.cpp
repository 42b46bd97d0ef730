#include "uniharm/maps.hpp"

#include <cmath>
#include <string>

#include "uniharm/error.hpp"

namespace uniharm {

PolyZZbar lower(const HarmonicComponent& c) {
  std::vector<Term> terms;
  terms.reserve(c.h.size() + c.g.size());
  for (std::size_t k = 0; k < c.h.size(); ++k) terms.push_back({static_cast<int>(k), 0, c.h[k]});
  for (std::size_t k = 0; k < c.g.size(); ++k)
    terms.push_back({0, static_cast<int>(k), std::conj(c.g[k])});
  return PolyZZbar(std::move(terms));
}

PolyZZbar lower(const Component& c) {
  return std::visit([](const auto& v) -> PolyZZbar {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, PolyZZbar>) {
      return v;
    } else {
      return lower(v);
    }
  }, c);
}

bool is_harmonic(const Component& c) {
  if (const auto* p = std::get_if<PolyZZbar>(&c)) return p->is_harmonic();
  return true;
}

AlmansiMap::AlmansiMap(int p, std::vector<Component> components)
    : p_(p), components_(std::move(components)) {
  if (p_ < 1) throw Error(ErrorCode::kOutOfRange, "p must be >= 1, got " + std::to_string(p_));
  if (static_cast<int>(components_.size()) != p_) {
    throw Error(ErrorCode::kShapeMismatch, "components length " + std::to_string(components_.size()) +
                                               " ≠ p " + std::to_string(p_));
  }
}

const Component& AlmansiMap::G(int j) const {
  if (j < 1 || j > p_) throw Error(ErrorCode::kOutOfRange, "component index out of range");
  return components_[static_cast<std::size_t>(j - 1)];
}

bool AlmansiMap::all_harmonic() const {
  for (const Component& c : components_)
    if (!is_harmonic(c)) return false;
  return true;
}

PolyZZbar lower(const AlmansiMap& a) {
  const int p = a.p();
  PolyZZbar out;
  for (int k = 1; k <= p; ++k) out += PolyZZbar::modulus_power(k - 1) * lower(a.G(p - k + 1));
  return out;
}

LogPHarmonicMap::LogPHarmonicMap(int p, std::vector<HarmonicComponent> log_components)
    : p_(p), log_components_(std::move(log_components)) {
  if (p_ < 1) throw Error(ErrorCode::kOutOfRange, "p must be >= 1, got " + std::to_string(p_));
  if (static_cast<int>(log_components_.size()) != p_) {
    throw Error(ErrorCode::kShapeMismatch, "components length " +
                                               std::to_string(log_components_.size()) + " ≠ p " +
                                               std::to_string(p_));
  }
}

const HarmonicComponent& LogPHarmonicMap::G(int j) const {
  if (j < 1 || j > p_) throw Error(ErrorCode::kOutOfRange, "component index out of range");
  return log_components_[static_cast<std::size_t>(j - 1)];
}

AlmansiMap LogPHarmonicMap::log_map() const {
  return AlmansiMap(p_, std::vector<Component>(log_components_.begin(), log_components_.end()));
}

PolyZZbar lower(const LogPHarmonicMap& l) { return lower(l.log_map()); }

cplx eval_logp(const LogPHarmonicMap& l, cplx z) { return std::exp(lower(l)(z)); }

cplx second_dilatation(const LogPHarmonicMap& l, int j, cplx z) {
  const Jet jet(lower(l.G(j)));
  const Jet::Value v = jet(z);
  if (std::abs(v.fz) < kDilatationUndefinedTol)
    throw Error(ErrorCode::kDegeneratePoint, "(G_" + std::to_string(j) + ")_z vanishes at the requested point");
  return std::conj(v.fzbar) / v.fz;
}

namespace {

PolyZZbar lowered_map(const MapData& map) {
  return std::visit([](const auto& m) { return lower(m); }, map);
}

}  // namespace

MapEvaluator::MapEvaluator(const MapData& map)
    : jet_(lowered_map(map)), exponential_(std::holds_alternative<LogPHarmonicMap>(map)) {}

MapEvaluator::MapEvaluator(PolyZZbar f) : jet_(std::move(f)) {}

cplx MapEvaluator::value(cplx z) const {
  const cplx v = jet_.value(z);
  return exponential_ ? std::exp(v) : v;
}

Jet::Value MapEvaluator::jet(cplx z) const {
  Jet::Value v = jet_(z);
  if (exponential_) {
    // f = exp(F): f_z = f F_z, f_zbar = f F_zbar.
    v.f = std::exp(v.f);
    v.fz *= v.f;
    v.fzbar *= v.f;
  }
  return v;
}

PointMetrics MapEvaluator::metrics(cplx z) const {
  const Jet::Value v = jet(z);
  return metrics_from(v.fz, v.fzbar);
}

}  // namespace uniharm
