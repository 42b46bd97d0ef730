#include "uniharm/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uniharm/error.hpp"
#include "uniharm/parallel.hpp"

namespace uniharm {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

cplx clamp_to_disk(cplx z) {
  const double r = std::abs(z);
  return r > 1.0 ? z / r : z;
}

using Tri = std::array<cplx, 3>;

struct Box {
  double x0, y0, x1, y1;
};

Box bbox(const Tri& t, double pad) {
  Box b{t[0].real(), t[0].imag(), t[0].real(), t[0].imag()};
  for (cplx p : t) {
    b.x0 = std::min(b.x0, p.real());
    b.y0 = std::min(b.y0, p.imag());
    b.x1 = std::max(b.x1, p.real());
    b.y1 = std::max(b.y1, p.imag());
  }
  b.x0 -= pad;
  b.y0 -= pad;
  b.x1 += pad;
  b.y1 += pad;
  return b;
}

// Separating-axis test on the edge normals of both triangles; intervals
// closer than tau count as overlapping.
bool triangles_overlap(const Tri& a, const Tri& b, double tau) {
  auto separated_along = [&](cplx axis) {
    const double len = std::abs(axis);
    if (len == 0.0) return false;
    const cplx u = axis / len;
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = -amin;
    for (cplx p : a) {
      const double s = p.real() * u.real() + p.imag() * u.imag();
      amin = std::min(amin, s);
      amax = std::max(amax, s);
    }
    for (cplx p : b) {
      const double s = p.real() * u.real() + p.imag() * u.imag();
      bmin = std::min(bmin, s);
      bmax = std::max(bmax, s);
    }
    return amax + tau < bmin || bmax + tau < amin;
  };
  for (const Tri* t : {&a, &b}) {
    for (int k = 0; k < 3; ++k) {
      const cplx e = (*t)[(k + 1) % 3] - (*t)[k];
      if (separated_along(cplx(-e.imag(), e.real()))) return false;
    }
  }
  return true;
}

// Sutherland-Hodgman clip of `subject` against the convex triangle `clip`.
std::vector<cplx> clip_triangle(const Tri& subject, Tri clip) {
  if (cross(clip[1] - clip[0], clip[2] - clip[0]) < 0) std::swap(clip[1], clip[2]);
  std::vector<cplx> poly(subject.begin(), subject.end());
  for (int k = 0; k < 3 && !poly.empty(); ++k) {
    const cplx a = clip[k];
    const cplx b = clip[(k + 1) % 3];
    auto side = [&](cplx p) { return cross(b - a, p - a); };
    std::vector<cplx> next;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const cplx p = poly[i];
      const cplx q = poly[(i + 1) % poly.size()];
      const double sp = side(p);
      const double sq = side(q);
      if (sp >= 0) next.push_back(p);
      if ((sp >= 0) != (sq >= 0)) next.push_back(p + (q - p) * (sp / (sp - sq)));
    }
    poly = std::move(next);
  }
  return poly;
}

// Affine pull-back of w from the image triangle to the parameter triangle.
cplx pull_back(cplx w, const Tri& image, const Tri& param) {
  const cplx e1 = image[1] - image[0];
  const cplx e2 = image[2] - image[0];
  const double det = cross(e1, e2);
  if (std::abs(det) <= 1e-300) return (param[0] + param[1] + param[2]) / 3.0;
  const cplx d = w - image[0];
  const double s = cross(d, e2) / det;
  const double t = cross(e1, d) / det;
  return param[0] + s * (param[1] - param[0]) + t * (param[2] - param[0]);
}

struct Collision {
  cplx z1;
  cplx z2;
  double residual;
};

class CollisionRefiner {
 public:
  CollisionRefiner(const MapEvaluator& f, double sigma, double h) : f_(f), sigma_(sigma), h_(h) {}

  std::optional<Collision> refine(cplx z1, cplx z2) const {
    compass(z1, z2);
    newton(z1, z2);
    z1 = clamp_to_disk(z1);
    z2 = clamp_to_disk(z2);
    const double residual = std::abs(f_.value(z1) - f_.value(z2));
    if (std::abs(z1 - z2) >= sigma_ && residual <= kCollisionResidual) return Collision{z1, z2, residual};
    // The polish may have slid z2 back onto z1; try solving for z1 instead.
    return std::nullopt;
  }

 private:
  double objective(cplx z1, cplx z2) const {
    const double gap = std::max(0.0, sigma_ - std::abs(z1 - z2));
    return std::norm(f_.value(clamp_to_disk(z1)) - f_.value(clamp_to_disk(z2))) + 1e4 * gap * gap;
  }

  void compass(cplx& z1, cplx& z2) const {
    constexpr int kMaxPolls = 500;
    std::array<double, 4> x{z1.real(), z1.imag(), z2.real(), z2.imag()};
    auto unpack = [](const std::array<double, 4>& v) {
      return std::pair(clamp_to_disk(cplx(v[0], v[1])), clamp_to_disk(cplx(v[2], v[3])));
    };
    double best = objective(cplx(x[0], x[1]), cplx(x[2], x[3]));
    double step = 0.25 * h_;
    for (int poll = 0; poll < kMaxPolls && best > 1e-30 && step > 1e-15; ++poll) {
      bool improved = false;
      for (int k = 0; k < 4 && !improved; ++k) {
        for (double dir : {1.0, -1.0}) {
          std::array<double, 4> y = x;
          y[k] += dir * step;
          const auto [a, b] = unpack(y);
          const double v = objective(a, b);
          if (v < best) {
            best = v;
            x = {a.real(), a.imag(), b.real(), b.imag()};
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    std::tie(z1, z2) = unpack(x);
  }

  // Solves f(moving) = f(fixed) for `moving` by Newton's method in R^2.
  bool solve_for(cplx fixed, cplx& moving) const {
    const cplx target = f_.value(fixed);
    for (int iter = 0; iter < 40; ++iter) {
      const Jet::Value v = f_.jet(moving);
      const cplx r = v.f - target;
      if (std::abs(r) <= 1e-15 * std::max(1.0, std::abs(target))) return true;
      const cplx dx = v.fz + v.fzbar;
      const cplx dy = cplx(0, 1) * (v.fz - v.fzbar);
      const double det = dx.real() * dy.imag() - dy.real() * dx.imag();
      if (std::abs(det) < 1e-14) return false;
      const double sx = (-r.real() * dy.imag() + r.imag() * dy.real()) / det;
      const double sy = (-dx.real() * r.imag() + dx.imag() * r.real()) / det;
      const cplx next = moving + cplx(sx, sy);
      if (std::abs(next) > 1.0 + 1e-12) return false;
      moving = clamp_to_disk(next);
    }
    return true;
  }

  void newton(cplx& z1, cplx& z2) const {
    cplx moved = z2;
    if (solve_for(z1, moved) && std::abs(moved - z1) >= sigma_) {
      z2 = moved;
      return;
    }
    moved = z1;
    if (solve_for(z2, moved) && std::abs(moved - z2) >= sigma_) z1 = moved;
  }

  const MapEvaluator& f_;
  double sigma_;
  double h_;
};

}  // namespace

std::string_view to_string(OracleStatus status) {
  switch (status) {
    case OracleStatus::kPass: return "pass";
    case OracleStatus::kCollision: return "collision";
    case OracleStatus::kJacobianSignFailure: return "jacobian-sign-failure";
    case OracleStatus::kBoundaryAnomaly: return "boundary-anomaly";
  }
  return "?";
}

OracleVerdict injectivity_scan(const MapEvaluator& f, const OracleGrid& grid) {
  if (grid.n < 2 || !(grid.sigma > 0) || !(grid.tau > 0))
    throw Error(ErrorCode::kOutOfRange, "oracle grid needs n >= 2, sigma > 0, tau > 0");
  const std::size_t n = static_cast<std::size_t>(grid.n);
  const double h = 2.0 / static_cast<double>(n - 1);
  auto coord = [&](std::size_t i) { return -1.0 + h * static_cast<double>(i); };
  auto raw_point = [&](std::size_t i, std::size_t j) { return cplx(coord(i), coord(j)); };

  // Vertex values on the clamped grid.
  std::vector<cplx> zs(n * n);
  std::vector<cplx> ws(n * n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const cplx z = clamp_to_disk(raw_point(i, j));
        zs[i * n + j] = z;
        ws[i * n + j] = f.value(z);
      }
    }
  });

  // Triangles of cells with at least one corner strictly inside the disk.
  struct Triangle {
    std::array<std::uint32_t, 3> v;
  };
  std::vector<Triangle> tris;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const bool inside = std::abs(raw_point(i, j)) < 1.0 || std::abs(raw_point(i + 1, j)) < 1.0 ||
                          std::abs(raw_point(i, j + 1)) < 1.0 || std::abs(raw_point(i + 1, j + 1)) < 1.0;
      if (!inside) continue;
      const auto v00 = static_cast<std::uint32_t>(i * n + j);
      const auto v10 = static_cast<std::uint32_t>((i + 1) * n + j);
      const auto v01 = static_cast<std::uint32_t>(i * n + j + 1);
      const auto v11 = static_cast<std::uint32_t>((i + 1) * n + j + 1);
      tris.push_back({{v00, v10, v11}});
      tris.push_back({{v00, v11, v01}});
    }
  }
  const std::size_t nt = tris.size();
  auto image = [&](std::size_t t) {
    return Tri{ws[tris[t].v[0]], ws[tris[t].v[1]], ws[tris[t].v[2]]};
  };
  auto param = [&](std::size_t t) {
    return Tri{zs[tris[t].v[0]], zs[tris[t].v[1]], zs[tris[t].v[2]]};
  };

  std::vector<Box> boxes(nt);
  std::vector<double> sizes(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    boxes[t] = bbox(image(t), grid.tau);
    sizes[t] = std::max(boxes[t].x1 - boxes[t].x0, boxes[t].y1 - boxes[t].y0);
  }
  Box all = boxes.empty() ? Box{0, 0, 1, 1} : boxes[0];
  for (const Box& b : boxes) {
    all.x0 = std::min(all.x0, b.x0);
    all.y0 = std::min(all.y0, b.y0);
    all.x1 = std::max(all.x1, b.x1);
    all.y1 = std::max(all.y1, b.y1);
  }
  std::vector<double> sorted_sizes = sizes;
  std::nth_element(sorted_sizes.begin(), sorted_sizes.begin() + static_cast<long>(nt / 2), sorted_sizes.end());
  double cell = std::max(2.0 * (nt ? sorted_sizes[nt / 2] : 1.0), 1e-12);
  constexpr double kMaxCellsPerAxis = 4096;
  cell = std::max({cell, (all.x1 - all.x0) / kMaxCellsPerAxis, (all.y1 - all.y0) / kMaxCellsPerAxis});
  const int nx = static_cast<int>(std::floor((all.x1 - all.x0) / cell)) + 1;
  const int ny = static_cast<int>(std::floor((all.y1 - all.y0) / cell)) + 1;
  auto cell_x = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - all.x0) / cell)), 0, nx - 1); };
  auto cell_y = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - all.y0) / cell)), 0, ny - 1); };

  // Bucket grid in CSR form: cell c holds items[start[c] .. start[c + 1]).
  const std::size_t ncells = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  std::vector<std::uint32_t> start(ncells + 1, 0);
  for (std::size_t t = 0; t < nt; ++t)
    for (int cy = cell_y(boxes[t].y0); cy <= cell_y(boxes[t].y1); ++cy)
      for (int cx = cell_x(boxes[t].x0); cx <= cell_x(boxes[t].x1); ++cx)
        ++start[static_cast<std::size_t>(cy) * nx + cx + 1];
  for (std::size_t c = 0; c < ncells; ++c) start[c + 1] += start[c];
  std::vector<std::uint32_t> items(start.back());
  {
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (std::size_t t = 0; t < nt; ++t)
      for (int cy = cell_y(boxes[t].y0); cy <= cell_y(boxes[t].y1); ++cy)
        for (int cx = cell_x(boxes[t].x0); cx <= cell_x(boxes[t].x1); ++cx)
          items[fill[static_cast<std::size_t>(cy) * nx + cx]++] = static_cast<std::uint32_t>(t);
  }

  // Partners b > a whose image triangle overlaps that of a, in index order.
  auto partners = [&](std::size_t a, std::vector<std::uint32_t>& out) {
    out.clear();
    const Box& ba = boxes[a];
    for (int cy = cell_y(ba.y0); cy <= cell_y(ba.y1); ++cy) {
      for (int cx = cell_x(ba.x0); cx <= cell_x(ba.x1); ++cx) {
        const std::size_t c = static_cast<std::size_t>(cy) * nx + cx;
        for (std::uint32_t k = start[c]; k < start[c + 1]; ++k) {
          const std::uint32_t b = items[k];
          if (b <= a) continue;
          const Box& bb = boxes[b];
          if (ba.x1 < bb.x0 || bb.x1 < ba.x0 || ba.y1 < bb.y0 || bb.y1 < ba.y0) continue;
          out.push_back(b);
        }
      }
    }
    if (out.empty()) return;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    const Tri ia = image(a);
    std::erase_if(out, [&](std::uint32_t b) {
      for (auto va : tris[a].v)
        for (auto vb : tris[b].v)
          if (va == vb) return true;
      return !triangles_overlap(ia, image(b), grid.tau);
    });
  };

  const CollisionRefiner refiner(f, grid.sigma, h);
  auto try_pair = [&](std::size_t a, std::size_t b) {
    const Tri ia = image(a);
    const Tri ib = image(b);
    const std::vector<cplx> overlap = clip_triangle(ia, ib);
    cplx w = 0.0;
    if (overlap.empty()) {
      w = (ia[0] + ia[1] + ia[2] + ib[0] + ib[1] + ib[2]) / 6.0;
    } else {
      for (cplx p : overlap) w += p;
      w /= static_cast<double>(overlap.size());
    }
    return refiner.refine(clamp_to_disk(pull_back(w, ia, param(a))), clamp_to_disk(pull_back(w, ib, param(b))));
  };

  OracleVerdict out;
  out.grid = grid;

  // Triangles are processed in blocks; within a block every triangle runs
  // through its partners in order, and the lowest triangle index with a
  // confirmed collision wins.
  const std::size_t block = static_cast<std::size_t>(std::max(1, worker_count())) * 256;
  for (std::size_t first = 0; first < nt; first += block) {
    const std::size_t stop = std::min(nt, first + block);
    std::vector<std::optional<Collision>> results(stop - first);
    std::vector<long> examined(stop - first, 0);
    parallel_for(stop - first, [&](std::size_t begin, std::size_t end) {
      std::vector<std::uint32_t> found;
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t a = first + k;
        partners(a, found);
        for (std::uint32_t b : found) {
          ++examined[k];
          if ((results[k] = try_pair(a, b))) break;
        }
      }
    });
    for (std::size_t k = 0; k < results.size(); ++k) {
      out.candidates += examined[k];
      if (results[k]) {
        out.status = OracleStatus::kCollision;
        out.z1 = results[k]->z1;
        out.z2 = results[k]->z2;
        out.residual = results[k]->residual;
        return out;
      }
    }
  }
  return out;
}

JacobianScan jacobian_scan(const MapEvaluator& f, int n) {
  if (n < 2) throw Error(ErrorCode::kOutOfRange, "jacobian grid needs n >= 2");
  const std::size_t m = static_cast<std::size_t>(n);
  const double h = 2.0 / static_cast<double>(m - 1);
  std::vector<cplx> points;
  points.reserve(m * m + 4 * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const cplx z(-1.0 + h * static_cast<double>(i), -1.0 + h * static_cast<double>(j));
      if (std::abs(z) <= 1.0) points.push_back(z);
    }
  }
  for (std::size_t k = 0; k < 4 * m; ++k)
    points.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(4 * m)));

  std::vector<double> J(points.size());
  parallel_for(points.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) J[k] = f.metrics(points[k]).J;
  });
  const auto it = std::min_element(J.begin(), J.end());
  JacobianScan out;
  out.min_J = *it;
  out.argmin = points[static_cast<std::size_t>(it - J.begin())];
  out.status = out.min_J <= 0.0 ? OracleStatus::kJacobianSignFailure : OracleStatus::kPass;
  return out;
}

int winding_number(const BoundaryPolyline& poly, cplx w) {
  const auto& pts = poly.points;
  const std::size_t n = pts.size();
  if (n == 0) throw Error(ErrorCode::kPointOnCurve, "empty polyline");
  double turning = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx a = pts[j] - w;
    const cplx b = pts[(j + 1) % n] - w;
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    const double t = len2 > 0 ? std::clamp(-(a.real() * ab.real() + a.imag() * ab.imag()) / len2, 0.0, 1.0) : 0.0;
    if (std::abs(a + t * ab) < kSegmentTol)
      throw Error(ErrorCode::kPointOnCurve, "point lies on the polyline");
    turning += std::arg(b / a);
  }
  return static_cast<int>(std::lround(turning / (2.0 * std::numbers::pi)));
}

UnivalenceReport univalence_report(const MapEvaluator& f, const OracleGrid& grid, bool run_all) {
  UnivalenceReport rep;
  rep.verdict.grid = grid;
  bool failed = false;
  auto fail = [&](OracleVerdict v) {
    if (!failed) rep.verdict = std::move(v);
    failed = true;
  };

  rep.jacobian = jacobian_scan(f, grid.n);
  if (rep.jacobian.status != OracleStatus::kPass) {
    OracleVerdict v;
    v.status = OracleStatus::kJacobianSignFailure;
    v.z1 = rep.jacobian.argmin;
    v.residual = rep.jacobian.min_J;
    v.grid = grid;
    fail(v);
  }

  if (run_all || !failed) {
    const BoundaryPolyline poly = boundary_polyline(f, 4 * grid.n);
    rep.boundary_simple = is_simple(poly);
    try {
      rep.winding = winding_number(poly, f.value(0.0));
    } catch (const Error&) {
      rep.winding.reset();
    }
    if (!rep.boundary_simple || rep.winding != 1) {
      OracleVerdict v;
      v.status = OracleStatus::kBoundaryAnomaly;
      v.z1 = cplx(1.0, 0.0);
      v.grid = grid;
      v.winding = rep.winding;
      fail(v);
    }
  }

  if (run_all || !failed) {
    rep.injectivity = injectivity_scan(f, grid);
    if (rep.injectivity->status != OracleStatus::kPass) fail(*rep.injectivity);
    if (!failed) rep.verdict = *rep.injectivity;
  }
  return rep;
}

OracleVerdict univalence_verdict(const MapEvaluator& f, const OracleGrid& grid) {
  return univalence_report(f, grid, false).verdict;
}

OracleVerdict univalence_verdict(const MapData& map, const OracleGrid& grid) {
  return univalence_verdict(MapEvaluator(map), grid);
}

std::vector<cplx> stable_samples(int count, bool include_zero) {
  if (count < 0) throw Error(ErrorCode::kOutOfRange, "sample count must be >= 0");
  std::vector<cplx> out;
  if (include_zero) out.emplace_back(0.0, 0.0);
  const int inner = count / 2;
  for (const auto& [modulus, m] : {std::pair(0.5, inner), std::pair(0.95, count - inner)})
    for (int k = 0; k < m; ++k) out.push_back(std::polar(modulus, 2.0 * std::numbers::pi * k / m));
  return out;
}

std::vector<SweepEntry> stable_sweep(const PolyZZbar& G, const HarmonicComponent& K, int p,
                                     const std::vector<cplx>& samples, const OracleGrid& grid) {
  if (p < 1) throw Error(ErrorCode::kOutOfRange, "p must be >= 1");
  for (cplx a : samples) {
    if (std::abs(a) >= 1.0)
      throw Error(ErrorCode::kOutOfRange, "stable sweep sample |a| = " + std::to_string(std::abs(a)) + " is not < 1");
  }
  const PolyZZbar weighted = PolyZZbar::modulus_power(p - 1) * G;
  const PolyZZbar k = lower(K);
  std::vector<SweepEntry> out;
  out.reserve(samples.size());
  for (cplx a : samples) out.push_back({a, univalence_verdict(MapEvaluator(a * weighted + k), grid)});
  return out;
}

}  // namespace uniharm
