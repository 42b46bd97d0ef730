#pragma once

#include <optional>

#include "uniharm/poly.hpp"

namespace uniharm {

/// |f_z| below this leaves the dilatation undefined.
inline constexpr double kDilatationUndefinedTol = 1e-14;

/// First-order Wirtinger data of a map at one point.
///
/// lambda = |f_z| - |f_zbar| is kept signed; Lambda >= |lambda| always.
struct PointMetrics {
  cplx fz;
  cplx fzbar;
  double lambda = 0.0;
  double Lambda = 0.0;
  double J = 0.0;
  std::optional<cplx> omega;  // f_zbar / f_z, empty when |f_z| < 1e-14
};

PointMetrics metrics_from(cplx fz, cplx fzbar);

/// A polynomial together with both Wirtinger derivatives, evaluated in one
/// pass over a shared table of powers of z and conj(z).
class Jet {
 public:
  struct Value {
    cplx f;
    cplx fz;
    cplx fzbar;
  };

  Jet() = default;
  explicit Jet(PolyZZbar f);

  const PolyZZbar& f() const noexcept { return f_; }
  const PolyZZbar& fz() const noexcept { return fz_; }
  const PolyZZbar& fzbar() const noexcept { return fzbar_; }

  Value operator()(cplx z) const;
  cplx value(cplx z) const;
  PointMetrics metrics(cplx z) const;

 private:
  PolyZZbar f_;
  PolyZZbar fz_;
  PolyZZbar fzbar_;
  int powers_ = 1;  // table length covering every exponent of f
};

PointMetrics metrics(const PolyZZbar& p, cplx z);

}  // namespace uniharm
