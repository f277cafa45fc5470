#pragma once

// Shared fixtures and independent oracles. Nothing here calls the library's
// area, crossing or alignment code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "areasig/geometry.hpp"

namespace oracle {

using areasig::Point2;

inline std::vector<Point2> unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

// Star-shaped around the origin, hence simple; CCW.
inline std::vector<Point2> random_star_polygon(std::mt19937_64& rng, std::size_t n,
                                               double rmin = 0.5, double rmax = 1.5) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), rad(rmin, rmax);
  std::vector<double> a(n);
  for (;;) {
    for (auto& v : a) v = ang(rng);
    std::sort(a.begin(), a.end());
    double gap = a.front() + 2.0 * M_PI - a.back();
    for (std::size_t i = 1; i < n; ++i) gap = std::max(gap, a[i] - a[i - 1]);
    if (gap < 0.9 * M_PI) break;
  }
  std::vector<Point2> out;
  for (double t : a) {
    const double r = rad(rng);
    out.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return out;
}

// Even-odd ray casting.
inline bool inside_polygon(const std::vector<Point2>& v, Point2 p) {
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y) &&
        p.x < (v[j].x - v[i].x) * (p.y - v[i].y) / (v[j].y - v[i].y) + v[i].x) {
      in = !in;
    }
  }
  return in;
}

struct McEstimate {
  double mean;
  double stderr_;
};

inline McEstimate monte_carlo_disk_area(const std::vector<Point2>& v, Point2 c, double r,
                                        std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double rho = r * std::sqrt(u(rng)), phi = 2.0 * M_PI * u(rng);
    if (inside_polygon(v, {c.x + rho * std::cos(phi), c.y + rho * std::sin(phi)})) ++hits;
  }
  const double area = M_PI * r * r;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {area * p, area * std::sqrt(std::max(p * (1 - p), 1e-12) / static_cast<double>(samples))};
}

// Area of the lens between a disk of radius R and a disk of radius r whose
// center lies on the first circle.
inline double lens_area(double R, double r) {
  // acos(1 - r^2 / 2R^2) written as 2 asin(r / 2R), which stays accurate for small r.
  return r * r * std::acos(r / (2 * R)) + 2 * R * R * std::asin(r / (2 * R)) -
         0.5 * r * std::sqrt(4 * R * R - r * r);
}

// Area of the intersection of two disks with center distance d.
inline double disk_disk_area(double R, double r, double d) {
  if (d >= R + r) return 0.0;
  if (d <= std::abs(R - r)) return M_PI * std::min(R, r) * std::min(R, r);
  const double a1 = std::acos((d * d + R * R - r * r) / (2 * d * R));
  const double a2 = std::acos((d * d + r * r - R * R) / (2 * d * r));
  return R * R * a1 + r * r * a2 -
         0.5 * std::sqrt((-d + R + r) * (d + R - r) * (d - R + r) * (d + R + r));
}

inline std::vector<Point2> regular_polygon(std::size_t n, double R, double phase = 0.0) {
  std::vector<Point2> v;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = phase + 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
    v.push_back({R * std::cos(t), R * std::sin(t)});
  }
  return v;
}

}  // namespace oracle
