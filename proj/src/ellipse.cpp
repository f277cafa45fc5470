#include "areasig/ellipse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace areasig {

namespace {

constexpr std::size_t kPanels = 1024;

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kGLx = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLw = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

EllipseShape::EllipseShape(double a, double b, Point2 center, double rotation)
    : a_(a), b_(b), center_(center), rotation_(rotation) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidArgument, "ellipse semi-axes must be positive");
  }
  panel_s_.resize(kPanels + 1);
  panel_s_[0] = 0.0;
  const double dt = kTwoPi / static_cast<double>(kPanels);
  for (std::size_t k = 0; k < kPanels; ++k) {
    panel_s_[k + 1] = panel_s_[k] + integrate_speed(dt * static_cast<double>(k),
                                                    dt * static_cast<double>(k + 1));
  }
  length_ = panel_s_[kPanels];
}

double EllipseShape::speed(double t) const {
  const double st = std::sin(t), ct = std::cos(t);
  return std::sqrt(a_ * a_ * st * st + b_ * b_ * ct * ct);
}

double EllipseShape::integrate_speed(double t0, double t1) const {
  const double half = 0.5 * (t1 - t0), mid = 0.5 * (t1 + t0);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGLx.size(); ++i) sum += kGLw[i] * speed(mid + half * kGLx[i]);
  return half * sum;
}

double EllipseShape::arc_at(double t) const {
  const double w = wrap_two_pi(t);
  const double dt = kTwoPi / static_cast<double>(kPanels);
  const auto k = std::min(static_cast<std::size_t>(w / dt), kPanels - 1);
  return panel_s_[k] + integrate_speed(dt * static_cast<double>(k), w);
}

double EllipseShape::param_at(double s_raw) const {
  const double s = wrap_s(s_raw);
  auto it = std::upper_bound(panel_s_.begin(), panel_s_.end(), s);
  const auto k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
      std::distance(panel_s_.begin(), it) - 1, 0, static_cast<std::ptrdiff_t>(kPanels) - 1));
  const double dt = kTwoPi / static_cast<double>(kPanels);
  const double t0 = dt * static_cast<double>(k);
  double t = t0 + dt * (s - panel_s_[k]) / (panel_s_[k + 1] - panel_s_[k]);
  for (int iter = 0; iter < 8; ++iter) {
    const double step = (panel_s_[k] + integrate_speed(t0, t) - s) / speed(t);
    t -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return t;
}

Point2 EllipseShape::to_local(Point2 p) const { return rotated(p - center_, -rotation_); }
Point2 EllipseShape::to_world(Point2 p) const { return rotated(p, rotation_) + center_; }

Point2 EllipseShape::position_at_param(double t) const {
  return to_world({a_ * std::cos(t), b_ * std::sin(t)});
}

double EllipseShape::curvature_at(double s) const {
  const double t = param_at(s);
  const double v = speed(t);
  return a_ * b_ / (v * v * v);
}

BoundaryPoint EllipseShape::point_at(double s) const {
  BoundaryPoint bp;
  bp.s = wrap_s(s);
  const double t = param_at(bp.s);
  bp.position = position_at_param(t);
  const Point2 d = rotated(Point2{-a_ * std::sin(t), b_ * std::cos(t)}, rotation_);
  bp.tangent_in = bp.tangent_out = normalized(d);
  return bp;
}

std::vector<EllipseShape::LocalRoot> EllipseShape::local_roots(Point2 c, double r) const {
  auto f = [&](double t) {
    const double dx = a_ * std::cos(t) - c.x, dy = b_ * std::sin(t) - c.y;
    return dx * dx + dy * dy - r * r;
  };
  const auto m = static_cast<std::size_t>(
      std::clamp(std::ceil(16.0 * length_ / r), 256.0, static_cast<double>(1 << 18)));
  const double dt = kTwoPi / static_cast<double>(m);
  std::vector<LocalRoot> roots;
  double t_prev = 0.0, f_prev = f(0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    const double t = dt * static_cast<double>(k);
    const double fv = f(t);
    if ((f_prev < 0.0) != (fv < 0.0)) {
      double lo = t_prev, hi = t;
      const bool lo_neg = f_prev < 0.0;
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((f(mid) < 0.0) == lo_neg ? lo : hi) = mid;
      }
      roots.push_back({wrap_two_pi(0.5 * (lo + hi)), lo_neg});
    }
    t_prev = t;
    f_prev = fv;
  }
  std::sort(roots.begin(), roots.end(),
            [](const LocalRoot& x, const LocalRoot& y) { return x.t < y.t; });
  return roots;
}

std::vector<Crossing> EllipseShape::circle_crossings(Point2 c, double r) const {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  std::vector<Crossing> out;
  for (const LocalRoot& root : local_roots(to_local(c), r)) {
    Crossing x;
    x.s = wrap_s(arc_at(root.t));
    x.position = position_at_param(root.t);
    const Point2 rel = x.position - c;
    x.angle = std::atan2(rel.y, rel.x);
    x.transverse = true;
    x.exiting = root.exiting;
    out.push_back(x);
  }
  std::sort(out.begin(), out.end(), [](const Crossing& l, const Crossing& q) { return l.s < q.s; });
  return out;
}

double EllipseShape::disk_area(Point2 world_center, double r) const {
  const Point2 c = to_local(world_center);
  const std::vector<LocalRoot> roots = local_roots(c, r);
  if (roots.empty()) {
    const Point2 probe{c.x + r, c.y};
    const bool circle_in_ellipse =
        (probe.x * probe.x) / (a_ * a_) + (probe.y * probe.y) / (b_ * b_) < 1.0;
    if (circle_in_ellipse) return kPi * r * r;
    const Point2 e{a_ - c.x, -c.y};
    if (dot(e, e) < r * r) return area();
    return 0.0;
  }
  const std::size_t n = roots.size();
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = std::atan2(b_ * std::sin(roots[i].t) - c.y, a_ * std::cos(roots[i].t) - c.x);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!roots[i].exiting) {
      // Ellipse arc inside the disk runs from this entry to the next root.
      const double dt = wrap_two_pi(roots[(i + 1) % n].t - roots[i].t);
      total += 0.5 * a_ * b_ * dt;
      continue;
    }
    // Circle arc inside the ellipse runs counterclockwise to the nearest root.
    double dphi = kTwoPi;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = wrap_two_pi(phi[j] - phi[i]);
      if (d > 0.0) dphi = std::min(dphi, d);
    }
    const double p1 = phi[i], p2 = phi[i] + dphi;
    total += 0.5 * (r * r * dphi + r * c.x * (std::sin(p2) - std::sin(p1)) -
                    r * c.y * (std::cos(p2) - std::cos(p1)));
  }
  return std::clamp(total, 0.0, std::min(area(), kPi * r * r));
}

std::vector<Point2> EllipseShape::sample_boundary(std::size_t min_points) const {
  const std::size_t m = std::max<std::size_t>(min_points, 3);
  std::vector<Point2> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    out[k] = position_at_param(param_at(length_ * static_cast<double>(k) / static_cast<double>(m)));
  }
  return out;
}

}  // namespace areasig
