#include "uniharm/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uniharm/error.hpp"
#include "uniharm/parallel.hpp"

namespace uniharm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double modulus_lambda(const Jet::Value& v) { return std::abs(std::abs(v.fz) - std::abs(v.fzbar)); }
double big_lambda(const Jet::Value& v) { return std::abs(v.fz) + std::abs(v.fzbar); }

const AlmansiMap& require_almansi(const MapData& map, RatioKind kind) {
  if (const auto* a = std::get_if<AlmansiMap>(&map)) return *a;
  throw Error(ErrorCode::kShapeMismatch,
              std::string(to_string(kind)) + " needs a polyharmonic (Almansi) map");
}

}  // namespace

std::string_view to_string(RatioKind kind) {
  switch (kind) {
    case RatioKind::kT1: return "T1";
    case RatioKind::kT2: return "T2";
    case RatioKind::kT4: return "T4";
    case RatioKind::kT5: return "T5";
    case RatioKind::kT6: return "T6";
    case RatioKind::kT7Canonical: return "T7";
    case RatioKind::kT7Literal: return "T7-literal";
  }
  return "?";
}

std::optional<RatioKind> ratio_kind_from_string(std::string_view s) {
  for (RatioKind k : {RatioKind::kT1, RatioKind::kT2, RatioKind::kT4, RatioKind::kT5, RatioKind::kT6,
                      RatioKind::kT7Canonical, RatioKind::kT7Literal}) {
    if (to_string(k) == s) return k;
  }
  if (s == "T7-canonical") return RatioKind::kT7Canonical;
  return std::nullopt;
}

std::string_view to_string(ThresholdBasis basis) {
  switch (basis) {
    case ThresholdBasis::kUserM: return "userM";
    case ThresholdBasis::kConvexUnit: return "convexUnit";
    case ThresholdBasis::kEstimatedM: return "estimatedM";
  }
  return "?";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kCertified: return "certified";
    case Verdict::kHeuristicPass: return "heuristic-pass";
    case Verdict::kNotCertified: return "not-certified";
    case Verdict::kDegenerate: return "degenerate";
  }
  return "?";
}

double guarded_ratio(double num, double den) {
  if (den < kDegeneracyTol) return num < kDegeneracyTol ? 0.0 : kInf;
  return num / den;
}

HarmonicComponent to_harmonic(const PolyZZbar& p) {
  if (!p.is_harmonic()) throw Error(ErrorCode::kShapeMismatch, "component is not harmonic");
  HarmonicComponent out;
  for (const Term& t : p.terms()) {
    if (t.n == 0) {
      if (out.h.size() <= static_cast<std::size_t>(t.m)) out.h.resize(static_cast<std::size_t>(t.m) + 1);
      out.h[static_cast<std::size_t>(t.m)] += t.c;
    } else {
      if (out.g.size() <= static_cast<std::size_t>(t.n)) out.g.resize(static_cast<std::size_t>(t.n) + 1);
      out.g[static_cast<std::size_t>(t.n)] += std::conj(t.c);
    }
  }
  return out;
}

TwoTermMap two_term_form(const AlmansiMap& a) {
  const int p = a.p();
  if (p < 2) throw Error(ErrorCode::kShapeMismatch, "two-term form needs p >= 2");
  for (int j = 2; j < p; ++j) {
    if (!lower(a.G(j)).empty())
      throw Error(ErrorCode::kShapeMismatch,
                  "two-term form needs G_2..G_{p-1} = 0; G_" + std::to_string(j) + " is nonzero");
  }
  const Component& top = a.G(p);
  HarmonicComponent K;
  if (const auto* h = std::get_if<HarmonicComponent>(&top)) {
    K = *h;
  } else {
    const PolyZZbar& poly = std::get<PolyZZbar>(top);
    if (!poly.is_harmonic()) throw Error(ErrorCode::kShapeMismatch, "G_p must be harmonic");
    K = to_harmonic(poly);
  }
  return {p, lower(a.G(1)), std::move(K)};
}

AlmansiMap to_almansi(const TwoTermMap& t) {
  std::vector<Component> comps(static_cast<std::size_t>(t.p), PolyZZbar{});
  comps.front() = t.G;
  comps.back() = t.K;
  return AlmansiMap(t.p, std::move(comps));
}

PolyZZbar lower(const TwoTermMap& t) { return PolyZZbar::modulus_power(t.p - 1) * t.G + lower(t.K); }

Ratio::Ratio(RatioKind kind, const MapData& map) : kind_(kind), reference_(PolyZZbar{}) {
  switch (kind) {
    case RatioKind::kT1:
    case RatioKind::kT4:
    case RatioKind::kT6: {
      const TwoTermMap t = two_term_form(require_almansi(map, kind));
      p_ = t.p;
      components_.emplace_back(t.G);
      const PolyZZbar den = kind == RatioKind::kT1 ? lower(t.K) : lower(t);
      denominator_ = Jet(den);
      reference_ = MapEvaluator(den);
      break;
    }
    case RatioKind::kT2:
    case RatioKind::kT5: {
      if (const auto* h = std::get_if<HarmonicComponent>(&map)) {
        p_ = 1;
        components_.emplace_back(lower(*h));
        denominator_ = components_.back();
        reference_ = MapEvaluator(lower(*h));
        break;
      }
      const AlmansiMap& a = require_almansi(map, kind);
      if (kind == RatioKind::kT2 && !is_harmonic(a.G(a.p())))
        throw Error(ErrorCode::kShapeMismatch, "T2 needs a harmonic G_p");
      p_ = a.p();
      for (int j = 1; j <= p_; ++j) components_.emplace_back(lower(a.G(j)));
      const PolyZZbar den = kind == RatioKind::kT2 ? lower(a.G(p_)) : lower(a);
      denominator_ = Jet(den);
      reference_ = MapEvaluator(den);
      break;
    }
    case RatioKind::kT7Canonical:
    case RatioKind::kT7Literal: {
      const auto* l = std::get_if<LogPHarmonicMap>(&map);
      if (l == nullptr) throw Error(ErrorCode::kShapeMismatch, "T7 needs a log-p-harmonic map");
      p_ = l->p();
      for (int j = 1; j <= p_; ++j) components_.emplace_back(lower(l->G(j)));
      denominator_ = components_.back();
      reference_ = MapEvaluator(lower(l->G(p_)));
      break;
    }
  }
}

double Ratio::numerator_two_term(cplx z) const {
  const Jet::Value g = components_.front()(z);
  return 2.0 * (p_ - 1) * std::abs(g.f) + big_lambda(g);
}

// sum_{k=1}^{p-1} 2k |G_{p-k}| + lambda_weight * (k-1) * Lambda_{G_{p-k}}
double Ratio::numerator_sum(cplx z, double lambda_weight) const {
  double num = 0.0;
  for (int k = 1; k <= p_ - 1; ++k) {
    const Jet::Value g = components_[static_cast<std::size_t>(p_ - k - 1)](z);
    num += 2.0 * k * std::abs(g.f) + lambda_weight * (k - 1) * big_lambda(g);
  }
  return num;
}

// |g_p| sum (2k |g_{p-k}| |log g_{p-k}| + (k-1) Lambda_{g_{p-k}}) / |lambda_{g_p}|
// with g = exp(G): |g| = exp(Re G), Lambda_g = |g| Lambda_G, lambda_g = |g| lambda_G.
double Ratio::literal_t7(cplx z) const {
  double sum = 0.0;
  for (int k = 1; k <= p_ - 1; ++k) {
    const Jet::Value g = components_[static_cast<std::size_t>(p_ - k - 1)](z);
    const double mod_g = std::exp(g.f.real());
    sum += 2.0 * k * mod_g * std::abs(g.f) + (k - 1) * mod_g * big_lambda(g);
  }
  const Jet::Value top = denominator_(z);
  const double mod_gp = std::exp(top.f.real());
  return guarded_ratio(mod_gp * sum, mod_gp * modulus_lambda(top));
}

double Ratio::operator()(cplx z) const {
  switch (kind_) {
    case RatioKind::kT1:
    case RatioKind::kT4:
    case RatioKind::kT6:
      return guarded_ratio(numerator_two_term(z), modulus_lambda(denominator_(z)));
    case RatioKind::kT2:
    case RatioKind::kT7Canonical:
      return guarded_ratio(numerator_sum(z, 1.0), modulus_lambda(denominator_(z)));
    case RatioKind::kT5:
      return guarded_ratio(numerator_sum(z, 2.0), modulus_lambda(denominator_(z)));
    case RatioKind::kT7Literal:
      return literal_t7(z);
  }
  return kInf;
}

double ratio_T1(const PolyZZbar& G, const HarmonicComponent& K, int p, cplx z) {
  if (p < 2) throw Error(ErrorCode::kOutOfRange, "T1 needs p >= 2");
  return Ratio(RatioKind::kT1, to_almansi({p, G, K}))(z);
}

double ratio_T2(const AlmansiMap& a, cplx z) { return Ratio(RatioKind::kT2, a)(z); }

double ratio_T4(const PolyZZbar& G, const HarmonicComponent& K, int p, cplx z) {
  if (p < 2) throw Error(ErrorCode::kOutOfRange, "T4 needs p >= 2");
  return Ratio(RatioKind::kT4, to_almansi({p, G, K}))(z);
}

double ratio_T5(const AlmansiMap& a, cplx z) { return Ratio(RatioKind::kT5, a)(z); }

double ratio_T7(const LogPHarmonicMap& l, cplx z, T7Variant variant) {
  return Ratio(variant == T7Variant::kCanonical ? RatioKind::kT7Canonical : RatioKind::kT7Literal, l)(z);
}

bool SupEstimate::infinite() const noexcept { return std::isinf(value); }

namespace {

struct GridPoint {
  double value;
  std::size_t index;
};

cplx polar_point(double r, double theta) { return std::polar(r, theta); }

}  // namespace

SupEstimate sup_disk(const std::function<double(cplx)>& ratio, const SupPlan& plan) {
  if (plan.nr < 2 || plan.ntheta < 1) throw Error(ErrorCode::kOutOfRange, "sup grid too small");
  const std::size_t nr = static_cast<std::size_t>(plan.nr);
  const std::size_t nt = static_cast<std::size_t>(plan.ntheta);
  const double dr = 1.0 / static_cast<double>(nr - 1);
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(nt);
  auto radius = [&](std::size_t i) { return static_cast<double>(i) * dr; };
  auto angle = [&](std::size_t j) { return static_cast<double>(j) * dtheta; };

  std::vector<double> values(nr * nt);
  parallel_for(nr, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < nt; ++j) values[i * nt + j] = ratio(polar_point(radius(i), angle(j)));
  });

  SupEstimate out;
  out.samples_used = static_cast<long>(values.size());
  std::size_t best = 0;
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    if (std::isinf(values[idx]) && !std::isinf(values[best])) {
      best = idx;
      break;
    }
    if (values[idx] > values[best]) best = idx;
  }
  out.value = values[best];
  out.arg_point = polar_point(radius(best / nt), angle(best % nt));
  if (out.infinite() || plan.refine_top <= 0) return out;

  // Discrete local maxima, best first, lowest index on ties.
  std::vector<GridPoint> seeds;
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double v = values[i * nt + j];
      bool peak = true;
      for (int di = -1; di <= 1 && peak; ++di) {
        const long ii = static_cast<long>(i) + di;
        if (ii < 0 || ii >= static_cast<long>(nr)) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const std::size_t jj = (j + nt + static_cast<std::size_t>(dj + 1) - 1) % nt;
          if (values[static_cast<std::size_t>(ii) * nt + jj] > v) {
            peak = false;
            break;
          }
        }
      }
      if (peak) seeds.push_back({v, i * nt + j});
    }
  }
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const GridPoint& a, const GridPoint& b) { return a.value > b.value; });
  if (seeds.size() > static_cast<std::size_t>(plan.refine_top)) seeds.resize(static_cast<std::size_t>(plan.refine_top));

  struct Refined {
    double value;
    cplx point;
    long evals;
  };
  std::vector<Refined> refined(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      double r = radius(seeds[s].index / nt);
      double t = angle(seeds[s].index % nt);
      double v = seeds[s].value;
      double step_r = dr;
      double step_t = dtheta;
      long evals = 0;
      for (int iter = 0; iter < plan.max_iter && !std::isinf(v); ++iter) {
        double best_v = v, best_r = r, best_t = t;
        for (int a = -1; a <= 1; ++a) {
          for (int b = -1; b <= 1; ++b) {
            if (a == 0 && b == 0) continue;
            const double rr = std::clamp(r + a * step_r, 0.0, 1.0);
            double tt = std::fmod(t + b * step_t, 2.0 * std::numbers::pi);
            if (tt < 0) tt += 2.0 * std::numbers::pi;
            const double vv = ratio(polar_point(rr, tt));
            ++evals;
            if (vv > best_v) {
              best_v = vv;
              best_r = rr;
              best_t = tt;
            }
          }
        }
        if (best_v > v) {
          v = best_v;
          r = best_r;
          t = best_t;
        } else {
          step_r *= 0.5;
          step_t *= 0.5;
          if (step_r < 1e-13) break;
        }
      }
      refined[s] = {v, polar_point(r, t), evals};
    }
  });

  for (const Refined& rf : refined) {
    out.samples_used += rf.evals;
    if (rf.value > out.value) {
      out.value = rf.value;
      out.arg_point = rf.point;
    }
  }
  out.refined = true;
  return out;
}

double threshold_factor(RatioKind kind, bool as_stated) {
  if (kind == RatioKind::kT6) return 2.0;
  if (kind == RatioKind::kT5 && !as_stated) return 2.0;
  return 1.0;
}

CriterionReport certify(const MapData& map, RatioKind kind, const MBasis& basis, const SupPlan& plan,
                        const CertifyOptions& options) {
  const Ratio ratio(kind, map);
  CriterionReport report;
  report.kind = kind;
  report.basis = basis.kind;

  switch (basis.kind) {
    case ThresholdBasis::kUserM:
      if (!(basis.M > 0.0) || !std::isfinite(basis.M))
        throw Error(ErrorCode::kOutOfRange, "M must be a positive finite number");
      report.M = basis.M;
      break;
    case ThresholdBasis::kConvexUnit: {
      const BoundaryPolyline poly = boundary_polyline(ratio.reference_map(), options.boundary_n);
      if (!is_simple(poly) || !is_convex(poly, options.convex_tol))
        throw Error(ErrorCode::kConvexCheckFailed, "convex basis requested but the reference image is not convex");
      report.M = 1.0;
      break;
    }
    case ThresholdBasis::kEstimatedM: {
      const BoundaryPolyline poly = boundary_polyline(ratio.reference_map(), options.boundary_n);
      if (!is_simple(poly))
        throw Error(ErrorCode::kNonSimple, "cannot estimate M: reference boundary image is not simple");
      report.connectivity = connectivity_estimate(poly, options.pairs, options.seed);
      report.M = report.connectivity->Mhat;
      break;
    }
  }

  report.sup = sup_disk(std::cref(ratio), plan);
  report.threshold = 1.0 / (threshold_factor(kind, options.as_stated) * report.M);
  report.margin = report.threshold - report.sup.value;
  if (report.sup.infinite()) {
    report.verdict = Verdict::kDegenerate;
  } else if (report.margin > 0.0) {
    report.verdict =
        basis.kind == ThresholdBasis::kEstimatedM ? Verdict::kHeuristicPass : Verdict::kCertified;
  } else {
    report.verdict = Verdict::kNotCertified;
  }
  return report;
}

}  // namespace uniharm
