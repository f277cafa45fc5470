#include <algorithm>
#include <cmath>

#include "areasig/simd/disk_area.hpp"

namespace areasig::simd {

namespace {

inline double sector(double ux, double uy, double vx, double vy, double r2) {
  return 0.5 * r2 * std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
}

}  // namespace

double disk_area_scalar(const double* xs, const double* ys, std::size_t n_edges, double cx,
                        double cy, double r) {
  const double r2 = r * r;
  double sum = 0.0;
  for (std::size_t i = 0; i < n_edges; ++i) {
    const double px = xs[i] - cx, py = ys[i] - cy;
    const double qx = xs[i + 1] - cx, qy = ys[i + 1] - cy;
    const double dx = qx - px, dy = qy - py;
    const double a = dx * dx + dy * dy;
    if (a == 0.0) continue;
    const double b = px * dx + py * dy;
    const double c = px * px + py * py - r2;
    const double disc = b * b - a * c;
    double t1 = 0.0, t2 = 0.0;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      t1 = std::clamp((-b - sq) / a, 0.0, 1.0);
      t2 = std::clamp((-b + sq) / a, 0.0, 1.0);
    }
    const double ax = px + t1 * dx, ay = py + t1 * dy;
    const double bx = px + t2 * dx, by = py + t2 * dy;
    sum += sector(px, py, ax, ay, r2);
    sum += 0.5 * (ax * by - ay * bx);
    sum += sector(bx, by, qx, qy, r2);
  }
  return sum;
}

}  // namespace areasig::simd
