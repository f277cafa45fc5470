#include "areasig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "areasig/simd/disk_area.hpp"
#include "json.hpp"

namespace areasig {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::VertexCountMismatch: return "VertexCountMismatch";
    case ErrorCode::TwoArcViolation: return "TwoArcViolation";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::NotTCGLSource: return "NotTCGLSource";
    case ErrorCode::NoVerticesDetected: return "NoVerticesDetected";
    case ErrorCode::AngleSolveFailed: return "AngleSolveFailed";
    case ErrorCode::ClosureFailure: return "ClosureFailure";
    case ErrorCode::FrameLoss: return "FrameLoss";
    case ErrorCode::VertexPoint: return "VertexPoint";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

double wrap_two_pi(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

double Shape::wrap_s(double s) const {
  const double L = length();
  double w = std::fmod(s, L);
  if (w < 0.0) w += L;
  if (w >= L) w -= L;
  return w;
}

double signed_area(std::span<const Point2> v) {
  const std::size_t n = v.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(v[i], v[(i + 1) % n]);
  return 0.5 * twice;
}

namespace {

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Rotating calipers over the convex hull.
double point_set_diameter(const std::vector<Point2>& pts) {
  const std::vector<Point2> h = convex_hull(pts);
  const std::size_t m = h.size();
  if (m == 1) return 0.0;
  if (m == 2) return distance(h[0], h[1]);
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 e = h[(i + 1) % m] - h[i];
    while (cross(e, h[(j + 1) % m] - h[i]) > cross(e, h[j] - h[i])) j = (j + 1) % m;
    best = std::max({best, distance(h[i], h[j]), distance(h[(i + 1) % m], h[j])});
  }
  return best;
}

}  // namespace

Polygon Polygon::from_trusted(std::vector<Point2> ccw_vertices) {
  Polygon p;
  p.vertices_ = std::move(ccw_vertices);
  const std::size_t n = p.vertices_.size();
  p.cumulative_.resize(n + 1);
  p.xs_.resize(n + 1);
  p.ys_.resize(n + 1);
  p.cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p.cumulative_[i + 1] = p.cumulative_[i] + distance(p.vertices_[i], p.vertices_[(i + 1) % n]);
    p.xs_[i] = p.vertices_[i].x;
    p.ys_[i] = p.vertices_[i].y;
  }
  p.xs_[n] = p.vertices_[0].x;
  p.ys_[n] = p.vertices_[0].y;
  p.length_ = p.cumulative_[n];
  p.area_ = signed_area(p.vertices_);
  p.diameter_ = point_set_diameter(p.vertices_);
  return p;
}

Point2 Polygon::edge_direction(std::size_t i) const {
  const std::size_t n = size();
  i %= n;
  return (vertices_[(i + 1) % n] - vertices_[i]) / edge_length(i);
}

std::size_t Polygon::edge_at(double s) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t idx = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, size() - 1);
}

std::size_t Polygon::vertex_near(double s) const {
  const double tol = 1e-12 * length_;
  const std::size_t e = edge_at(s);
  if (std::abs(s - cumulative_[e]) <= tol) return e;
  if (std::abs(cumulative_[e + 1] - s) <= tol) return (e + 1) % size();
  if (std::abs(length_ - s) <= tol) return 0;
  return size();
}

BoundaryPoint Polygon::point_at(double s_raw) const {
  const double s = wrap_s(s_raw);
  BoundaryPoint bp;
  const std::size_t n = size();
  const std::size_t v = vertex_near(s);
  if (v < n) {
    bp.s = cumulative_[v];
    bp.position = vertices_[v];
    bp.tangent_in = edge_direction((v + n - 1) % n);
    bp.tangent_out = edge_direction(v);
    return bp;
  }
  const std::size_t e = edge_at(s);
  const double t = (s - cumulative_[e]) / edge_length(e);
  const Point2 a = vertices_[e], b = vertices_[(e + 1) % n];
  bp.s = s;
  bp.position = a + (b - a) * t;
  bp.tangent_in = bp.tangent_out = edge_direction(e);
  return bp;
}

std::vector<Crossing> Polygon::circle_crossings(Point2 c, double r) const {
  const std::size_t n = size();
  const double tol_on = 1e-9 * r;
  const double tol_end = 1e-7 * r;
  constexpr double tol_dir = 1e-12;
  std::vector<Crossing> out;
  std::vector<char> on(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const Point2 rel = vertices_[i] - c;
    const double d = norm(rel);
    if (std::abs(d - r) > tol_on) continue;
    on[i] = 1;
    const Point2 radial = rel / d;
    const double before = dot(edge_direction((i + n - 1) % n), radial);
    const double after = dot(edge_direction(i), radial);
    // A tangent edge leaves the circle on the outside.
    const bool inside_before = before > tol_dir;
    const bool inside_after = after < -tol_dir;
    Crossing x;
    x.s = cumulative_[i];
    x.angle = std::atan2(rel.y, rel.x);
    x.transverse = inside_before != inside_after;
    x.exiting = x.transverse && inside_before;
    x.position = vertices_[i];
    out.push_back(x);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double len = edge_length(i);
    const Point2 a = vertices_[i];
    const Point2 u = (vertices_[(i + 1) % n] - a) / len;
    const Point2 p = a - c;
    const double foot = -dot(p, u);
    const double dmin = std::abs(cross(u, p));
    if (dmin > r + tol_on) continue;
    const bool on_a = on[i] != 0, on_b = on[(i + 1) % n] != 0;
    auto near_flagged_end = [&](double tau) {
      return (on_a && tau <= tol_end) || (on_b && len - tau <= tol_end);
    };
    auto emit = [&](double tau, bool transverse, bool exiting) {
      Crossing x;
      x.s = cumulative_[i] + tau;
      x.position = a + u * tau;
      const Point2 rel = x.position - c;
      x.angle = std::atan2(rel.y, rel.x);
      x.transverse = transverse;
      x.exiting = exiting;
      out.push_back(x);
    };
    if (std::abs(dmin - r) <= tol_on) {
      if (foot > 0.0 && foot < len && !near_flagged_end(foot)) emit(foot, false, false);
      continue;
    }
    const double half = std::sqrt(r * r - dmin * dmin);
    const double t_in = foot - half, t_out = foot + half;
    if (t_in >= 0.0 && t_in < len && !near_flagged_end(t_in)) emit(t_in, true, false);
    if (t_out >= 0.0 && t_out < len && !near_flagged_end(t_out)) emit(t_out, true, true);
  }

  std::sort(out.begin(), out.end(), [](const Crossing& l, const Crossing& r2) { return l.s < r2.s; });
  return out;
}

double Polygon::disk_area(Point2 c, double r) const {
  const double raw = simd::disk_area(xs_, ys_, c.x, c.y, r);
  return std::clamp(raw, 0.0, std::min(area_, kPi * r * r));
}

std::vector<Point2> Polygon::sample_boundary(std::size_t min_points) const {
  const std::size_t n = size();
  if (min_points <= n) return vertices_;
  std::vector<Point2> out;
  out.reserve(min_points + n);
  const double spacing = length_ / static_cast<double>(min_points);
  for (std::size_t e = 0; e < n; ++e) {
    const double len = edge_length(e);
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing)));
    const Point2 a = vertices_[e], b = vertices_[(e + 1) % n];
    for (std::size_t k = 0; k < pieces; ++k) {
      out.push_back(a + (b - a) * (static_cast<double>(k) / static_cast<double>(pieces)));
    }
  }
  return out;
}

BoundaryPoint point_at(const Polygon& polygon, double s) { return polygon.point_at(s); }

std::vector<Crossing> circle_crossings(const Polygon& polygon, Point2 center, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  return polygon.circle_crossings(center, r);
}

double disk_polygon_area(const Polygon& polygon, Point2 center, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  return polygon.disk_area(center, r);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

int orientation_sign(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool adjacent_fold(Point2 a, Point2 shared, Point2 b) {
  // Edges a->shared and shared->b overlap only if they are collinear and reversed.
  const Point2 d1 = shared - a, d2 = b - shared;
  return cross(d1, d2) == 0.0 && dot(d1, d2) < 0.0;
}

bool edges_adjacent(std::size_t i, std::size_t j, std::size_t n) {
  return (i + 1) % n == j || (j + 1) % n == i;
}

}  // namespace

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

std::pair<std::size_t, std::size_t> find_self_intersection(std::span<const Point2> v) {
  const std::size_t n = v.size();
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  auto seg = [&](std::size_t i) { return std::pair{v[i], v[(i + 1) % n]}; };

  for (std::size_t i = 0; i < n; ++i) {
    if (adjacent_fold(v[i], v[(i + 1) % n], v[(i + 2) % n])) return {i, (i + 1) % n};
  }
  if (n <= 3) return {none, none};

  auto test_pair = [&](std::size_t i, std::size_t j) {
    if (i == j || edges_adjacent(i, j, n)) return false;
    const auto [a, b] = seg(i);
    const auto [c, d] = seg(j);
    return segments_intersect(a, b, c, d);
  };

  if (n <= 64) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (test_pair(i, j)) return {i, j};
    return {none, none};
  }

  // Uniform grid over edge bounding boxes; only edges sharing a cell are tested.
  double minx = v[0].x, maxx = v[0].x, miny = v[0].y, maxy = v[0].y;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    minx = std::min(minx, v[i].x);
    maxx = std::max(maxx, v[i].x);
    miny = std::min(miny, v[i].y);
    maxy = std::max(maxy, v[i].y);
    total += distance(v[i], v[(i + 1) % n]);
  }
  const double cell = std::max(2.0 * total / static_cast<double>(n),
                               std::max(maxx - minx, maxy - miny) / 1024.0);
  const auto gx = static_cast<std::size_t>((maxx - minx) / cell) + 1;
  const auto gy = static_cast<std::size_t>((maxy - miny) / cell) + 1;
  std::vector<std::vector<std::size_t>> cells(gx * gy);
  auto cell_index = [&](double x, double lo, std::size_t g) {
    const auto k = static_cast<std::size_t>(std::max(0.0, (x - lo) / cell));
    return std::min(k, g - 1);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto [a, b] = seg(i);
    const std::size_t x0 = cell_index(std::min(a.x, b.x), minx, gx);
    const std::size_t x1 = cell_index(std::max(a.x, b.x), minx, gx);
    const std::size_t y0 = cell_index(std::min(a.y, b.y), miny, gy);
    const std::size_t y1 = cell_index(std::max(a.y, b.y), miny, gy);
    for (std::size_t cx = x0; cx <= x1; ++cx)
      for (std::size_t cy = y0; cy <= y1; ++cy) cells[cy * gx + cx].push_back(i);
  }
  std::pair<std::size_t, std::size_t> best{none, none};
  for (const auto& bucket : cells) {
    for (std::size_t p = 0; p < bucket.size(); ++p) {
      for (std::size_t q = p + 1; q < bucket.size(); ++q) {
        std::size_t i = bucket[p], j = bucket[q];
        if (i > j) std::swap(i, j);
        if (std::pair{i, j} >= best) continue;
        if (test_pair(i, j)) best = {i, j};
      }
    }
  }
  return best;
}

Polygon validate_polygon(std::vector<Point2> raw) {
  for (const Point2& p : raw) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::Degenerate, "non-finite vertex coordinate");
    }
  }
  if (raw.size() < 3) throw Error(ErrorCode::Degenerate, "fewer than 3 vertices");

  double extent = 0.0;
  for (const Point2& p : raw) extent = std::max({extent, std::abs(p.x - raw[0].x), std::abs(p.y - raw[0].y)});
  const double merge_tol = 1e-12 * std::max(extent, std::numeric_limits<double>::min());

  std::vector<Point2> v;
  v.reserve(raw.size());
  for (const Point2& p : raw) {
    if (v.empty() || distance(v.back(), p) > merge_tol) v.push_back(p);
  }
  while (v.size() > 1 && distance(v.back(), v.front()) <= merge_tol) v.pop_back();
  if (v.size() < 3) throw Error(ErrorCode::Degenerate, "fewer than 3 distinct vertices");

  // All points on one line: no interior at all.
  std::size_t far = 1;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (distance(v[k], v[0]) > distance(v[far], v[0])) far = k;
  const Point2 axis = normalized(v[far] - v[0]);
  double spread = 0.0;
  for (const Point2& p : v) spread = std::max(spread, std::abs(cross(axis, p - v[0])));
  if (spread <= 1e-12 * extent) throw Error(ErrorCode::Degenerate, "collinear vertices");

  const auto [i, j] = find_self_intersection(v);
  if (i != std::numeric_limits<std::size_t>::max()) {
    throw Error(ErrorCode::NotSimple,
                "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
  }
  const double area = signed_area(v);
  if (std::abs(area) <= 1e-14 * extent * extent || extent == 0.0) {
    throw Error(ErrorCode::Degenerate, "zero enclosed area");
  }
  if (area < 0.0) std::reverse(v.begin(), v.end());
  return Polygon::from_trusted(std::move(v));
}

// ---------------------------------------------------------------------------
// Rigid alignment

Alignment fit_rigid(std::span<const Point2> from, std::span<const Point2> to) {
  if (from.size() != to.size() || from.empty()) {
    throw Error(ErrorCode::VertexCountMismatch, "point sets differ in size");
  }
  const auto n = static_cast<double>(from.size());
  Point2 ca, cb;
  for (std::size_t i = 0; i < from.size(); ++i) {
    ca += from[i];
    cb += to[i];
  }
  ca = ca / n;
  cb = cb / n;
  double sdot = 0.0, scross = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Point2 a = from[i] - ca, b = to[i] - cb;
    sdot += dot(a, b);
    scross += cross(a, b);
  }
  Alignment out;
  out.transform.angle = std::atan2(scross, sdot);
  out.transform.translation = cb - rotated(ca, out.transform.angle);
  double ss = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Point2 d = out.transform.apply(from[i]) - to[i];
    ss += dot(d, d);
  }
  out.residual = std::sqrt(ss / n);
  return out;
}

Alignment rigid_align(std::span<const Point2> a, std::span<const Point2> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::VertexCountMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " vertices");
  }
  const std::size_t n = a.size();
  Alignment best;
  best.residual = std::numeric_limits<double>::infinity();
  std::vector<Point2> shifted(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) shifted[i] = b[(i + k) % n];
    Alignment cand = fit_rigid(a, shifted);
    if (cand.residual < best.residual) {
      best = cand;
      best.shift = k;
    }
  }
  return best;
}

Alignment rigid_align(const Polygon& a, const Polygon& b) {
  return rigid_align(std::span<const Point2>(a.vertices()), std::span<const Point2>(b.vertices()));
}

// ---------------------------------------------------------------------------
// Polygon files

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Point2> parse_vertices_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw Error(ErrorCode::ParseError, "expected an object with a \"vertices\" array");
  }
  std::vector<Point2> out;
  for (const auto& item : doc["vertices"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw Error(ErrorCode::ParseError, "each vertex must be [x, y]");
    }
    out.push_back({item[0].get<double>(), item[1].get<double>()});
  }
  return out;
}

Polygon read_polygon_json(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return validate_polygon(parse_vertices_json(text));
}

void write_polygon_json(std::ostream& out, std::span<const Point2> vertices) {
  out << "{\"vertices\": [";
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i) out << ", ";
    out << '[' << format_real(vertices[i].x) << ", " << format_real(vertices[i].y) << ']';
  }
  out << "]}\n";
}

}  // namespace areasig
