#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace uniharm {

using cplx = std::complex<double>;

/// Coefficients with modulus below this are dropped after every operation.
inline constexpr double kCoefficientDropTol = 1e-15;

/// One monomial c * z^m * conj(z)^n.
struct Term {
  int m = 0;
  int n = 0;
  cplx c;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Finite polynomial in z and conj(z) with complex coefficients.
///
/// Terms are kept sorted lexicographically by (m, n), with no repeated
/// exponent pair and no coefficient of modulus below kCoefficientDropTol.
/// Two polynomials compare equal iff their canonical term lists match.
class PolyZZbar {
 public:
  PolyZZbar() = default;
  PolyZZbar(std::initializer_list<Term> terms);
  explicit PolyZZbar(std::vector<Term> terms);

  static PolyZZbar constant(cplx c);
  static PolyZZbar z();
  static PolyZZbar zbar();
  /// |z|^{2k}, i.e. the single term (k, k, 1).
  static PolyZZbar modulus_power(int k);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  /// Largest m + n over all terms; -1 for the zero polynomial.
  int degree() const noexcept;
  int max_m() const noexcept;
  int max_n() const noexcept;
  /// True iff no term mixes z and conj(z) (m >= 1 and n >= 1).
  bool is_harmonic() const noexcept;

  cplx operator()(cplx z) const;
  /// Evaluation with caller-supplied power tables: zp[k] = z^k for
  /// k <= max_m(), zbp[k] = conj(z)^k for k <= max_n().
  cplx eval_tables(const cplx* zp, const cplx* zbp) const noexcept;

  /// conj(P(z)) as a polynomial: (m, n, c) -> (n, m, conj(c)).
  PolyZZbar conj() const;

  PolyZZbar& operator+=(const PolyZZbar& rhs);
  PolyZZbar& operator-=(const PolyZZbar& rhs);
  PolyZZbar& operator*=(cplx s);

  friend PolyZZbar operator+(PolyZZbar a, const PolyZZbar& b) { return a += b; }
  friend PolyZZbar operator-(PolyZZbar a, const PolyZZbar& b) { return a -= b; }
  friend PolyZZbar operator*(PolyZZbar a, cplx s) { return a *= s; }
  friend PolyZZbar operator*(cplx s, PolyZZbar a) { return a *= s; }
  friend PolyZZbar operator*(const PolyZZbar& a, const PolyZZbar& b);

  friend bool operator==(const PolyZZbar&, const PolyZZbar&) = default;

 private:
  void canonicalize();

  std::vector<Term> terms_;
};

/// Wirtinger derivatives d/dz and d/dconj(z).
struct Wirtinger {
  PolyZZbar dz;
  PolyZZbar dzbar;
};

Wirtinger wirtinger(const PolyZZbar& p);

/// 4 * d^2/dz dconj(z), the Laplacian in Wirtinger form.
PolyZZbar laplacian(const PolyZZbar& p);

}  // namespace uniharm
