#include "uniharm/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace uniharm {

namespace {

constexpr int kStackPowers = 32;

template <typename Fn>
auto with_power_tables(int count, cplx z, Fn&& fn) {
  auto fill = [count](cplx base, cplx* out) {
    out[0] = 1.0;
    for (int k = 1; k < count; ++k) out[k] = out[k - 1] * base;
  };
  if (count <= kStackPowers) {
    std::array<cplx, kStackPowers> zp;
    std::array<cplx, kStackPowers> zbp;
    fill(z, zp.data());
    fill(std::conj(z), zbp.data());
    return fn(zp.data(), zbp.data());
  }
  std::vector<cplx> zp(count);
  std::vector<cplx> zbp(count);
  fill(z, zp.data());
  fill(std::conj(z), zbp.data());
  return fn(zp.data(), zbp.data());
}

}  // namespace

PointMetrics metrics_from(cplx fz, cplx fzbar) {
  PointMetrics out;
  out.fz = fz;
  out.fzbar = fzbar;
  const double a = std::abs(fz);
  const double b = std::abs(fzbar);
  out.lambda = a - b;
  out.Lambda = a + b;
  out.J = std::norm(fz) - std::norm(fzbar);
  if (a >= kDilatationUndefinedTol) out.omega = fzbar / fz;
  return out;
}

Jet::Jet(PolyZZbar f) : f_(std::move(f)) {
  auto [dz, dzbar] = wirtinger(f_);
  fz_ = std::move(dz);
  fzbar_ = std::move(dzbar);
  powers_ = std::max(f_.max_m(), f_.max_n()) + 1;
}

Jet::Value Jet::operator()(cplx z) const {
  return with_power_tables(powers_, z, [this](const cplx* zp, const cplx* zbp) {
    return Value{f_.eval_tables(zp, zbp), fz_.eval_tables(zp, zbp), fzbar_.eval_tables(zp, zbp)};
  });
}

cplx Jet::value(cplx z) const {
  return with_power_tables(powers_, z,
                           [this](const cplx* zp, const cplx* zbp) { return f_.eval_tables(zp, zbp); });
}

PointMetrics Jet::metrics(cplx z) const {
  const Value v = (*this)(z);
  return metrics_from(v.fz, v.fzbar);
}

PointMetrics metrics(const PolyZZbar& p, cplx z) { return Jet(p).metrics(z); }

}  // namespace uniharm
