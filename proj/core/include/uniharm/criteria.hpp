#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "uniharm/geometry.hpp"
#include "uniharm/maps.hpp"

namespace uniharm {

/// Denominators below this are treated as zero.
inline constexpr double kDegeneracyTol = 1e-12;

/// Which univalence condition a ratio belongs to.
///
///   T1  (2(p-1)|G| + Lambda_G) / |lambda_K|            f = |z|^{2(p-1)} G + K
///   T2  sum_{k<p} (2k|G_{p-k}| + (k-1) Lambda_{G_{p-k}}) / |lambda_{G_p}|
///   T4  T1 numerator / |lambda_f|
///   T5  sum_{k<p} (2k|G_{p-k}| + 2(k-1) Lambda_{G_{p-k}}) / |lambda_f|
///   T6  T4 ratio, compared against 1/(2M)
///   T7  T2 applied to the log-components (canonical), or the product-form
///       expression in g_k = exp(G_k) (literal)
enum class RatioKind { kT1, kT2, kT4, kT5, kT6, kT7Canonical, kT7Literal };

std::string_view to_string(RatioKind kind);
std::optional<RatioKind> ratio_kind_from_string(std::string_view s);

/// num/den with the degeneracy contract: a denominator below 1e-12 gives 0
/// when the numerator is also below 1e-12 and +infinity otherwise.
double guarded_ratio(double num, double den);

/// f = |z|^{2(p-1)} G + K with G arbitrary and K harmonic.
struct TwoTermMap {
  int p = 2;
  PolyZZbar G;
  HarmonicComponent K;
};

/// Reads an AlmansiMap as a two-term map: requires p >= 2, G_2..G_{p-1}
/// identically zero and G_p harmonic. Throws Error(kShapeMismatch).
TwoTermMap two_term_form(const AlmansiMap& a);
AlmansiMap to_almansi(const TwoTermMap& t);
PolyZZbar lower(const TwoTermMap& t);

/// Converts a harmonic polynomial (no mixed terms) back to h + conj(g).
HarmonicComponent to_harmonic(const PolyZZbar& p);

double ratio_T1(const PolyZZbar& G, const HarmonicComponent& K, int p, cplx z);
double ratio_T2(const AlmansiMap& a, cplx z);
double ratio_T4(const PolyZZbar& G, const HarmonicComponent& K, int p, cplx z);
double ratio_T5(const AlmansiMap& a, cplx z);

enum class T7Variant { kCanonical, kLiteral };
double ratio_T7(const LogPHarmonicMap& l, cplx z, T7Variant variant);

/// A criterion ratio bound to one map, with all derivative polynomials
/// precomputed. Cheap to copy; evaluation is thread-safe.
class Ratio {
 public:
  /// Throws Error(kShapeMismatch) when the map cannot carry this ratio.
  Ratio(RatioKind kind, const MapData& map);

  RatioKind kind() const noexcept { return kind_; }
  double operator()(cplx z) const;

  /// Map whose image supplies the linear-connectivity constant:
  /// K (T1), G_p (T2), f (T4, T5, T6), log g_p (T7).
  const MapEvaluator& reference_map() const noexcept { return reference_; }

 private:
  double numerator_two_term(cplx z) const;
  double numerator_sum(cplx z, double lambda_weight) const;
  double literal_t7(cplx z) const;

  RatioKind kind_;
  int p_ = 1;
  std::vector<Jet> components_;  // G_1..G_p lowered
  Jet denominator_;
  MapEvaluator reference_;
};

struct SupPlan {
  int nr = 64;
  int ntheta = 256;
  int refine_top = 10;
  int max_iter = 200;
};

struct SupEstimate {
  double value = 0.0;  // +infinity when a degenerate sample was hit
  cplx arg_point;
  long samples_used = 0;
  bool refined = false;

  bool infinite() const noexcept;
};

/// Polar-grid scan of the closed disk, r_i = i/(nr-1), theta_j = 2 pi j/ntheta,
/// followed by compass-search maximization from the best grid local maxima.
/// Ties resolve to the lowest (i, j) index.
SupEstimate sup_disk(const std::function<double(cplx)>& ratio, const SupPlan& plan = {});

enum class ThresholdBasis { kUserM, kConvexUnit, kEstimatedM };
enum class Verdict { kCertified, kHeuristicPass, kNotCertified, kDegenerate };

std::string_view to_string(ThresholdBasis basis);
std::string_view to_string(Verdict verdict);

struct MBasis {
  ThresholdBasis kind = ThresholdBasis::kConvexUnit;
  double M = 1.0;  // used by kUserM

  static MBasis user(double m) { return {ThresholdBasis::kUserM, m}; }
  static MBasis convex() { return {ThresholdBasis::kConvexUnit, 1.0}; }
  static MBasis estimate() { return {ThresholdBasis::kEstimatedM, 1.0}; }
};

struct CertifyOptions {
  /// T5 only: compare against 1/M as printed instead of the 1/(2M) the
  /// argument supports.
  bool as_stated = false;
  int boundary_n = 2048;
  int pairs = 1000;
  std::uint64_t seed = 0;
  double convex_tol = 1e-9;
};

struct CriterionReport {
  RatioKind kind = RatioKind::kT2;
  SupEstimate sup;
  double threshold = 0.0;
  ThresholdBasis basis = ThresholdBasis::kConvexUnit;
  double M = 1.0;
  double margin = 0.0;  // threshold - sup
  Verdict verdict = Verdict::kNotCertified;
  std::optional<ConnectivityEstimate> connectivity;  // set for kEstimatedM
};

/// Throws Error(kShapeMismatch) for incompatible map data and
/// Error(kConvexCheckFailed) when the convex basis is requested but the
/// reference boundary image is not convex.
CriterionReport certify(const MapData& map, RatioKind kind, const MBasis& basis,
                        const SupPlan& plan = {}, const CertifyOptions& options = {});

/// Threshold multiplier 1/(factor * M): 2 for T6 and for T5 unless as_stated.
double threshold_factor(RatioKind kind, bool as_stated);

}  // namespace uniharm
