#include "uniharm/poly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>

namespace uniharm {

namespace {

constexpr int kStackPowers = 32;

// Fills out[0..count) with base^k.
void fill_powers(cplx base, int count, cplx* out) {
  if (count <= 0) return;
  out[0] = 1.0;
  for (int k = 1; k < count; ++k) out[k] = out[k - 1] * base;
}

cplx eval_with_tables(const std::vector<Term>& terms, const cplx* zp, const cplx* zbp) {
  cplx acc = 0.0;
  for (const Term& t : terms) acc += t.c * zp[t.m] * zbp[t.n];
  return acc;
}

}  // namespace

PolyZZbar::PolyZZbar(std::initializer_list<Term> terms) : terms_(terms) { canonicalize(); }

PolyZZbar::PolyZZbar(std::vector<Term> terms) : terms_(std::move(terms)) { canonicalize(); }

PolyZZbar PolyZZbar::constant(cplx c) { return PolyZZbar{{0, 0, c}}; }
PolyZZbar PolyZZbar::z() { return PolyZZbar{{1, 0, 1.0}}; }
PolyZZbar PolyZZbar::zbar() { return PolyZZbar{{0, 1, 1.0}}; }
PolyZZbar PolyZZbar::modulus_power(int k) { return PolyZZbar{{k, k, 1.0}}; }

void PolyZZbar::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return std::pair(a.m, a.n) < std::pair(b.m, b.n);
  });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().m == t.m && merged.back().n == t.n) {
      merged.back().c += t.c;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return std::abs(t.c) < kCoefficientDropTol; });
  terms_ = std::move(merged);
}

int PolyZZbar::degree() const noexcept {
  int d = -1;
  for (const Term& t : terms_) d = std::max(d, t.m + t.n);
  return d;
}

int PolyZZbar::max_m() const noexcept {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, t.m);
  return d;
}

int PolyZZbar::max_n() const noexcept {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, t.n);
  return d;
}

bool PolyZZbar::is_harmonic() const noexcept {
  return std::none_of(terms_.begin(), terms_.end(),
                      [](const Term& t) { return t.m >= 1 && t.n >= 1; });
}

cplx PolyZZbar::operator()(cplx z) const {
  const int nm = max_m() + 1;
  const int nn = max_n() + 1;
  if (nm <= kStackPowers && nn <= kStackPowers) {
    std::array<cplx, kStackPowers> zp;
    std::array<cplx, kStackPowers> zbp;
    fill_powers(z, nm, zp.data());
    fill_powers(std::conj(z), nn, zbp.data());
    return eval_with_tables(terms_, zp.data(), zbp.data());
  }
  std::vector<cplx> zp(nm);
  std::vector<cplx> zbp(nn);
  fill_powers(z, nm, zp.data());
  fill_powers(std::conj(z), nn, zbp.data());
  return eval_with_tables(terms_, zp.data(), zbp.data());
}

cplx PolyZZbar::eval_tables(const cplx* zp, const cplx* zbp) const noexcept {
  return eval_with_tables(terms_, zp, zbp);
}

PolyZZbar PolyZZbar::conj() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) out.push_back({t.n, t.m, std::conj(t.c)});
  return PolyZZbar(std::move(out));
}

PolyZZbar& PolyZZbar::operator+=(const PolyZZbar& rhs) {
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  canonicalize();
  return *this;
}

PolyZZbar& PolyZZbar::operator-=(const PolyZZbar& rhs) {
  for (const Term& t : rhs.terms_) terms_.push_back({t.m, t.n, -t.c});
  canonicalize();
  return *this;
}

PolyZZbar& PolyZZbar::operator*=(cplx s) {
  for (Term& t : terms_) t.c *= s;
  canonicalize();
  return *this;
}

PolyZZbar operator*(const PolyZZbar& a, const PolyZZbar& b) {
  std::vector<Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const Term& s : a.terms_)
    for (const Term& t : b.terms_) out.push_back({s.m + t.m, s.n + t.n, s.c * t.c});
  return PolyZZbar(std::move(out));
}

Wirtinger wirtinger(const PolyZZbar& p) {
  std::vector<Term> dz;
  std::vector<Term> dzbar;
  for (const Term& t : p.terms()) {
    if (t.m >= 1) dz.push_back({t.m - 1, t.n, static_cast<double>(t.m) * t.c});
    if (t.n >= 1) dzbar.push_back({t.m, t.n - 1, static_cast<double>(t.n) * t.c});
  }
  return {PolyZZbar(std::move(dz)), PolyZZbar(std::move(dzbar))};
}

PolyZZbar laplacian(const PolyZZbar& p) {
  std::vector<Term> out;
  for (const Term& t : p.terms()) {
    if (t.m >= 1 && t.n >= 1)
      out.push_back({t.m - 1, t.n - 1, 4.0 * static_cast<double>(t.m * t.n) * t.c});
  }
  return PolyZZbar(std::move(out));
}

}  // namespace uniharm
