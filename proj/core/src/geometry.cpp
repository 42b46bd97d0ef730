#include "uniharm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <string>

#include "uniharm/error.hpp"
#include "uniharm/parallel.hpp"

namespace uniharm {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }
double dot(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

double diameter_scale(const std::vector<cplx>& pts) {
  if (pts.empty()) return 1.0;
  double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
  for (cplx p : pts) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  return std::max(1.0, std::hypot(x1 - x0, y1 - y0));
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// Interiors cross transversally, each segment strictly separating the
// other's endpoints by more than eps.
bool proper_crossing(cplx a, cplx b, cplx c, cplx d, double eps) {
  const double lab = std::abs(b - a);
  const double lcd = std::abs(d - c);
  if (lab == 0.0 || lcd == 0.0) return false;
  const double dc = cross(b - a, c - a) / lab;
  const double dd = cross(b - a, d - a) / lab;
  const double da = cross(d - c, a - c) / lcd;
  const double db = cross(d - c, b - c) / lcd;
  const bool split_cd = (dc > eps && dd < -eps) || (dc < -eps && dd > eps);
  const bool split_ab = (da > eps && db < -eps) || (da < -eps && db > eps);
  return split_cd && split_ab;
}

double segment_distance(cplx a, cplx b, cplx c, cplx d) {
  if (proper_crossing(a, b, c, d, 0.0)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

// Uniform bucket grid over the edges of a closed polygon. Every edge is
// registered in each cell overlapped by its bounding box inflated by
// `inflate`, so any query point within `inflate` of an edge finds it in the
// query point's own cell.
class EdgeGrid {
 public:
  EdgeGrid() = default;

  EdgeGrid(const std::vector<cplx>& pts, double inflate) {
    const std::size_t n = pts.size();
    double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
    for (cplx p : pts) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    }
    const int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
    const double span = std::max({x1 - x0, y1 - y0, 1e-300});
    cell_ = span / side;
    inflate_ = inflate + 1e-9 * cell_;
    x0_ = x0 - inflate_;
    y0_ = y0 - inflate_;
    nx_ = std::max(1, static_cast<int>(std::floor((x1 - x0 + 2 * inflate_) / cell_)) + 1);
    ny_ = std::max(1, static_cast<int>(std::floor((y1 - y0 + 2 * inflate_) / cell_)) + 1);

    std::vector<std::vector<int>> buckets(static_cast<std::size_t>(nx_) * ny_);
    for (std::size_t e = 0; e < n; ++e) {
      const cplx a = pts[e];
      const cplx b = pts[(e + 1) % n];
      const auto [cx0, cy0] = cell_of(std::min(a.real(), b.real()) - inflate_,
                                      std::min(a.imag(), b.imag()) - inflate_);
      const auto [cx1, cy1] = cell_of(std::max(a.real(), b.real()) + inflate_,
                                      std::max(a.imag(), b.imag()) + inflate_);
      for (int cy = cy0; cy <= cy1; ++cy)
        for (int cx = cx0; cx <= cx1; ++cx)
          buckets[static_cast<std::size_t>(cy) * nx_ + cx].push_back(static_cast<int>(e));
    }
    start_.assign(buckets.size() + 1, 0);
    for (std::size_t i = 0; i < buckets.size(); ++i)
      start_[i + 1] = start_[i] + static_cast<int>(buckets[i].size());
    items_.reserve(static_cast<std::size_t>(start_.back()));
    for (const auto& b : buckets) items_.insert(items_.end(), b.begin(), b.end());
  }

  std::pair<int, int> cell_of(double x, double y) const {
    const int cx = std::clamp(static_cast<int>(std::floor((x - x0_) / cell_)), 0, nx_ - 1);
    const int cy = std::clamp(static_cast<int>(std::floor((y - y0_) / cell_)), 0, ny_ - 1);
    return {cx, cy};
  }

  void append_cell(int cx, int cy, std::vector<int>& out) const {
    const std::size_t c = static_cast<std::size_t>(cy) * nx_ + cx;
    out.insert(out.end(), items_.begin() + start_[c], items_.begin() + start_[c + 1]);
  }

  static void unique(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  // Edges possibly within `inflate` of the box.
  std::vector<int> edges_in_box(double x0, double y0, double x1, double y1) const {
    std::vector<int> out;
    const auto [cx0, cy0] = cell_of(x0, y0);
    const auto [cx1, cy1] = cell_of(x1, y1);
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx) append_cell(cx, cy, out);
    unique(out);
    return out;
  }

  // Edges possibly within `inflate` of the segment, via a grid walk.
  std::vector<int> edges_near_segment(cplx a, cplx b) const {
    std::vector<int> out;
    const double ax = (a.real() - x0_) / cell_, ay = (a.imag() - y0_) / cell_;
    const double bx = (b.real() - x0_) / cell_, by = (b.imag() - y0_) / cell_;
    auto [cx, cy] = cell_of(a.real(), a.imag());
    const auto [ex, ey] = cell_of(b.real(), b.imag());
    const double dx = bx - ax, dy = by - ay;
    const int sx = dx > 0 ? 1 : -1;
    const int sy = dy > 0 ? 1 : -1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    double tmx = dx != 0 ? ((sx > 0 ? cx + 1 : cx) - ax) / dx : inf;
    double tmy = dy != 0 ? ((sy > 0 ? cy + 1 : cy) - ay) / dy : inf;
    const double tdx = dx != 0 ? 1.0 / std::abs(dx) : inf;
    const double tdy = dy != 0 ? 1.0 / std::abs(dy) : inf;
    for (int guard = nx_ + ny_ + 2; guard > 0; --guard) {
      append_cell(cx, cy, out);
      if (cx == ex && cy == ey) break;
      if (tmx < tmy) {
        cx += sx;
        tmx += tdx;
      } else {
        cy += sy;
        tmy += tdy;
      }
      if (cx < 0 || cx >= nx_ || cy < 0 || cy >= ny_) break;
    }
    append_cell(ex, ey, out);
    unique(out);
    return out;
  }

  // Edges registered in the cells of p's row to the right of p.
  std::vector<int> edges_right_of(cplx p) const {
    std::vector<int> out;
    const auto [cx, cy] = cell_of(p.real(), p.imag());
    for (int x = cx; x < nx_; ++x) append_cell(x, cy, out);
    unique(out);
    return out;
  }

 private:
  double x0_ = 0, y0_ = 0, cell_ = 1, inflate_ = 0;
  int nx_ = 1, ny_ = 1;
  std::vector<int> start_;
  std::vector<int> items_;
};

bool simple_with_grid(const std::vector<cplx>& pts, const EdgeGrid& grid, double eps) {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  std::vector<char> bad(n, 0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const cplx a = pts[i];
      const cplx b = pts[(i + 1) % n];
      // Adjacent segment folding back over this one.
      const cplx c = pts[(i + 2) % n];
      const cplx ab = b - a;
      const cplx bc = c - b;
      if (std::abs(cross(ab, bc)) <= eps * std::abs(ab) + eps * std::abs(bc) && dot(ab, bc) < 0) {
        bad[i] = 1;
        continue;
      }
      const auto cand = grid.edges_in_box(std::min(a.real(), b.real()) - eps, std::min(a.imag(), b.imag()) - eps,
                                          std::max(a.real(), b.real()) + eps, std::max(a.imag(), b.imag()) + eps);
      for (int e : cand) {
        const std::size_t j = static_cast<std::size_t>(e);
        if (j == i || j == (i + 1) % n || (j + 1) % n == i) continue;
        if (segment_distance(a, b, pts[j], pts[(j + 1) % n]) <= eps) {
          bad[i] = 1;
          break;
        }
      }
    }
  });
  return std::none_of(bad.begin(), bad.end(), [](char c) { return c != 0; });
}

}  // namespace

BoundaryPolyline make_polyline(std::vector<cplx> points) {
  BoundaryPolyline out;
  out.points.reserve(points.size());
  for (cplx p : points) {
    if (!out.points.empty() && std::abs(p - out.points.back()) < kDuplicatePointTol) continue;
    out.points.push_back(p);
  }
  while (out.points.size() > 1 && std::abs(out.points.back() - out.points.front()) < kDuplicatePointTol)
    out.points.pop_back();
  return out;
}

std::vector<cplx> boundary_samples(const MapEvaluator& f, int n) {
  if (n < 3) throw Error(ErrorCode::kOutOfRange, "boundary resolution must be >= 3, got " + std::to_string(n));
  std::vector<cplx> pts(static_cast<std::size_t>(n));
  parallel_for(pts.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
      pts[j] = f.value(std::polar(1.0, theta));
    }
  });
  return pts;
}

BoundaryPolyline boundary_polyline(const MapEvaluator& f, int n) { return make_polyline(boundary_samples(f, n)); }

BoundaryPolyline boundary_polyline(const MapData& map, int n) { return boundary_polyline(MapEvaluator(map), n); }

bool is_simple(const BoundaryPolyline& poly) {
  const auto& pts = poly.points;
  if (pts.size() < 3) return false;
  const double eps = kSegmentTol * diameter_scale(pts);
  const EdgeGrid grid(pts, eps);
  return simple_with_grid(pts, grid, eps);
}

bool is_convex(const BoundaryPolyline& poly, double tol) {
  if (!is_simple(poly)) throw Error(ErrorCode::kNonSimple, "convexity test needs a simple polyline");
  const auto& pts = poly.points;
  const std::size_t n = pts.size();
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx e1 = pts[(i + 1) % n] - pts[i];
    const cplx e2 = pts[(i + 2) % n] - pts[(i + 1) % n];
    const double c = cross(e1, e2);
    const double zero = tol * std::abs(e1) * std::abs(e2);
    if (c > zero) pos = true;
    if (c < -zero) neg = true;
  }
  return !(pos && neg);
}

struct PolygonDomain::Impl {
  std::vector<cplx> v;
  double eps = 0.0;
  EdgeGrid grid;
  std::vector<int> reflex;
  std::vector<std::vector<std::pair<int, double>>> adj;  // over reflex indices

  bool on_boundary(cplx w, const std::vector<int>& edges) const {
    const std::size_t n = v.size();
    for (int e : edges) {
      const std::size_t i = static_cast<std::size_t>(e);
      if (point_segment_distance(w, v[i], v[(i + 1) % n]) <= eps) return true;
    }
    return false;
  }

  bool contains(cplx w) const {
    if (on_boundary(w, grid.edges_in_box(w.real(), w.imag(), w.real(), w.imag()))) return true;
    const std::size_t n = v.size();
    bool inside = false;
    for (int e : grid.edges_right_of(w)) {
      const std::size_t i = static_cast<std::size_t>(e);
      const cplx a = v[i];
      const cplx b = v[(i + 1) % n];
      if ((a.imag() > w.imag()) != (b.imag() > w.imag())) {
        const double x = a.real() + (w.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
        if (x > w.real()) inside = !inside;
      }
    }
    return inside;
  }

  // Segment p-q, q = v[k], is tangent at q: both polygon neighbours of q lie
  // on one side of the line. A taut path can only bend at such a vertex.
  bool tangent(cplx p, std::size_t k) const {
    const std::size_t n = v.size();
    const cplx q = v[k];
    const cplx dir = q - p;
    const cplx e1 = v[(k + n - 1) % n] - q;
    const cplx e2 = v[(k + 1) % n] - q;
    const double s1 = cross(dir, e1), s2 = cross(dir, e2);
    const double tol1 = kSegmentTol * std::abs(dir) * std::abs(e1);
    const double tol2 = kSegmentTol * std::abs(dir) * std::abs(e2);
    return !((s1 > tol1 && s2 < -tol2) || (s1 < -tol1 && s2 > tol2));
  }

  bool visible(cplx a, cplx b) const {
    const double len = std::abs(b - a);
    if (len <= eps) return contains(a);
    const std::size_t n = v.size();
    const auto edges = grid.edges_near_segment(a, b);
    std::vector<double> cuts{0.0, 1.0};
    for (int e : edges) {
      const std::size_t i = static_cast<std::size_t>(e);
      const cplx c = v[i];
      const cplx d = v[(i + 1) % n];
      if (proper_crossing(a, b, c, d, eps)) return false;
      for (cplx q : {c, d}) {
        if (point_segment_distance(q, a, b) <= eps) {
          const double t = dot(q - a, b - a) / (len * len);
          if (t > 0.0 && t < 1.0) cuts.push_back(t);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if ((cuts[k + 1] - cuts[k]) * len <= eps) continue;
      const double t = 0.5 * (cuts[k] + cuts[k + 1]);
      if (!contains(a + t * (b - a))) return false;
    }
    return true;
  }
};

PolygonDomain::PolygonDomain(const BoundaryPolyline& poly) : impl_(std::make_unique<Impl>()) {
  Impl& d = *impl_;
  d.v = poly.points;
  if (d.v.size() < 3) throw Error(ErrorCode::kNonSimple, "polygon needs at least 3 vertices");
  d.eps = kSegmentTol * diameter_scale(d.v);
  d.grid = EdgeGrid(d.v, d.eps);
  if (!simple_with_grid(d.v, d.grid, d.eps)) throw Error(ErrorCode::kNonSimple, "polygon is not simple");

  const std::size_t n = d.v.size();
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) area2 += cross(d.v[i], d.v[(i + 1) % n]);
  const double orient = area2 >= 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx e1 = d.v[i] - d.v[(i + n - 1) % n];
    const cplx e2 = d.v[(i + 1) % n] - d.v[i];
    if (orient * cross(e1, e2) < -kSegmentTol * std::abs(e1) * std::abs(e2))
      d.reflex.push_back(static_cast<int>(i));
  }

  const std::size_t r = d.reflex.size();
  d.adj.assign(r, {});
  std::vector<std::vector<std::pair<int, double>>> upper(r);
  parallel_for(r, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const cplx a = d.v[static_cast<std::size_t>(d.reflex[i])];
      for (std::size_t j = i + 1; j < r; ++j) {
        const cplx b = d.v[static_cast<std::size_t>(d.reflex[j])];
        if (d.tangent(a, static_cast<std::size_t>(d.reflex[j])) &&
            d.tangent(b, static_cast<std::size_t>(d.reflex[i])) && d.visible(a, b)) upper[i].emplace_back(static_cast<int>(j), std::abs(b - a));
      }
    }
  });
  for (std::size_t i = 0; i < r; ++i) {
    for (auto [j, w] : upper[i]) {
      d.adj[i].emplace_back(j, w);
      d.adj[static_cast<std::size_t>(j)].emplace_back(static_cast<int>(i), w);
    }
  }
}

PolygonDomain::~PolygonDomain() = default;
PolygonDomain::PolygonDomain(PolygonDomain&&) noexcept = default;
PolygonDomain& PolygonDomain::operator=(PolygonDomain&&) noexcept = default;

const std::vector<cplx>& PolygonDomain::vertices() const noexcept { return impl_->v; }
const std::vector<int>& PolygonDomain::reflex_vertices() const noexcept { return impl_->reflex; }
bool PolygonDomain::contains(cplx w) const { return impl_->contains(w); }
bool PolygonDomain::visible(cplx a, cplx b) const { return impl_->visible(a, b); }

PolygonPath PolygonDomain::shortest_path(cplx a, cplx b) const {
  const Impl& d = *impl_;
  if (d.visible(a, b)) return {{a, b}, std::abs(b - a)};

  // Nodes: 0 = a, 1 = b, 2 + k = reflex vertex k.
  const std::size_t r = d.reflex.size();
  const std::size_t nodes = r + 2;
  auto pos = [&](std::size_t node) -> cplx {
    if (node == 0) return a;
    if (node == 1) return b;
    return d.v[static_cast<std::size_t>(d.reflex[node - 2])];
  };
  std::vector<char> seen_from_b(r, 0);
  for (std::size_t k = 0; k < r; ++k) {
    const auto vk = static_cast<std::size_t>(d.reflex[k]);
    seen_from_b[k] = d.tangent(b, vk) && d.visible(pos(k + 2), b) ? 1 : 0;
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(nodes, inf);
  std::vector<std::size_t> prev(nodes, nodes);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[0] = 0.0;
  heap.emplace(0.0, 0);
  auto relax = [&](std::size_t from, std::size_t to, double w) {
    if (dist[from] + w < dist[to]) {
      dist[to] = dist[from] + w;
      prev[to] = from;
      heap.emplace(dist[to], to);
    }
  };
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    if (u == 1) break;
    if (u == 0) {
      for (std::size_t k = 0; k < r; ++k)
        if (d.tangent(a, static_cast<std::size_t>(d.reflex[k])) && d.visible(a, pos(k + 2))) relax(0, k + 2, std::abs(pos(k + 2) - a));
      continue;
    }
    const std::size_t k = u - 2;
    if (seen_from_b[k]) relax(u, 1, std::abs(b - pos(u)));
    for (auto [j, w] : d.adj[k]) relax(u, static_cast<std::size_t>(j) + 2, w);
  }
  if (!std::isfinite(dist[1])) return {{}, inf};
  PolygonPath path;
  for (std::size_t node = 1; node != nodes; node = prev[node]) {
    path.points.push_back(pos(node));
    if (node == 0) break;
  }
  std::reverse(path.points.begin(), path.points.end());
  path.length = 0.0;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
    path.length += std::abs(path.points[i + 1] - path.points[i]);
  return path;
}

ConnectivityEstimate connectivity_estimate(const BoundaryPolyline& poly, int pairs, std::uint64_t seed,
                                           const std::vector<std::pair<cplx, cplx>>& forced) {
  if (pairs < 0) throw Error(ErrorCode::kOutOfRange, "pairs must be >= 0");
  if (poly.points.size() < 3) throw Error(ErrorCode::kNonSimple, "polygon needs at least 3 vertices");

  // Frame fixed by the first edge: u = (w - p0) / (p1 - p0).
  const cplx origin = poly.points[0];
  const cplx unit = poly.points[1] - poly.points[0];
  auto to_frame = [&](cplx w) { return (w - origin) / unit; };
  auto from_frame = [&](cplx u) { return origin + u * unit; };

  BoundaryPolyline frame;
  frame.points.reserve(poly.points.size());
  for (cplx w : poly.points) frame.points.push_back(to_frame(w));
  const PolygonDomain domain(frame);
  const auto& v = domain.vertices();
  const std::size_t n = v.size();

  std::vector<std::pair<cplx, cplx>> samples;

  // Reflex vertices and their neighbours.
  std::vector<int> hot;
  for (int k : domain.reflex_vertices()) {
    const int m = static_cast<int>(n);
    hot.push_back((k + m - 1) % m);
    hot.push_back(k);
    hot.push_back((k + 1) % m);
  }
  std::sort(hot.begin(), hot.end());
  hot.erase(std::unique(hot.begin(), hot.end()), hot.end());
  constexpr std::size_t kMaxHot = 64;
  if (hot.size() > kMaxHot) {
    std::vector<int> thinned;
    for (std::size_t k = 0; k < kMaxHot; ++k) thinned.push_back(hot[k * hot.size() / kMaxHot]);
    hot = std::move(thinned);
  }
  for (std::size_t i = 0; i < hot.size(); ++i)
    for (std::size_t j = i + 1; j < hot.size(); ++j)
      samples.emplace_back(v[static_cast<std::size_t>(hot[i])], v[static_cast<std::size_t>(hot[j])]);

  for (const auto& [w1, w2] : forced) samples.emplace_back(to_frame(w1), to_frame(w2));

  double x0 = v[0].real(), x1 = x0, y0 = v[0].imag(), y1 = y0;
  for (cplx p : v) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_vertex(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> ux(x0, x1);
  std::uniform_real_distribution<double> uy(y0, y1);
  auto draw = [&]() -> cplx {
    if (coin(rng) == 0) return v[pick_vertex(rng)];
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const cplx w(ux(rng), uy(rng));
      if (domain.contains(w)) return w;
    }
    return v[pick_vertex(rng)];
  };
  for (int k = 0; k < pairs; ++k) {
    const cplx w1 = draw();
    const cplx w2 = draw();
    samples.emplace_back(w1, w2);
  }

  const double min_sep = kSegmentTol * diameter_scale(v);
  std::vector<double> ratio(samples.size(), 0.0);
  std::vector<PolygonPath> paths(samples.size());
  parallel_for(samples.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto [w1, w2] = samples[i];
      const double dist = std::abs(w2 - w1);
      if (dist <= min_sep) continue;
      paths[i] = domain.shortest_path(w1, w2);
      ratio[i] = paths[i].length / dist;
    }
  });

  ConnectivityEstimate out;
  out.Mhat = 1.0;
  out.pairs_sampled = static_cast<long>(samples.size());
  std::size_t best = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (ratio[i] == 0.0) continue;
    if (best == samples.size() || ratio[i] > ratio[best]) best = i;
  }
  if (best < samples.size()) {
    out.Mhat = std::max(1.0, ratio[best]);
    out.witness = {from_frame(samples[best].first), from_frame(samples[best].second)};
    for (cplx u : paths[best].points) out.path.push_back(from_frame(u));
    out.path_length = paths[best].length * std::abs(unit);
  }
  return out;
}

}  // namespace uniharm
