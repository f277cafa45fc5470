#include <cmath>
#include <random>
#include <vector>

#include "areasig/geometry.hpp"
#include "areasig/simd/disk_area.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace areasig;

namespace {

struct Closed {
  std::vector<double> xs, ys;
};

Closed closed(const std::vector<Point2>& v) {
  Closed c;
  for (const Point2& p : v) {
    c.xs.push_back(p.x);
    c.ys.push_back(p.y);
  }
  c.xs.push_back(v[0].x);
  c.ys.push_back(v[0].y);
  return c;
}

void compare(const std::vector<Point2>& v, Point2 c, double r) {
  const Closed cl = closed(v);
  const auto n = v.size();
  const double ref = simd::disk_area_scalar(cl.xs.data(), cl.ys.data(), n, c.x, c.y, r);
  const double got = simd::disk_area_kernel(simd::Isa::avx2)(cl.xs.data(), cl.ys.data(), n, c.x, c.y, r);
  const double scale = M_PI * r * r + std::abs(signed_area(v));
  CHECK(std::abs(got - ref) <= 1e-13 * scale * std::sqrt(static_cast<double>(n)));
}

}  // namespace

TEST_CASE("dispatcher reports a usable kernel") {
  INFO("active ISA: " << simd::active_isa_name());
  CHECK(simd::active_disk_area_kernel() != nullptr);
  CHECK(simd::disk_area_kernel(simd::Isa::scalar) == &simd::disk_area_scalar);
  if (!simd::avx2_available()) {
    CHECK(simd::disk_area_kernel(simd::Isa::avx2) == &simd::disk_area_scalar);
  }
}

TEST_CASE("vector kernel matches the scalar reference on random polygons") {
  if (!simd::avx2_available()) {
    MESSAGE("AVX2 not available on this CPU; the dispatcher uses the scalar kernel");
    return;
  }
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 61) + (trial % 7 == 0 ? 400 : 0);
    const auto v = oracle::random_star_polygon(rng, n);
    const Polygon poly = validate_polygon(v);
    Point2 c = point_at(poly, u(rng) * poly.length()).position;
    if (trial % 3 == 1) c = c + Point2{u(rng) - 0.5, u(rng) - 0.5} * 3.0;
    if (trial % 5 == 2) c = v[trial % n];
    compare(v, c, 0.01 + 2.5 * u(rng));
  }
}

TEST_CASE("vector kernel edge cases") {
  if (!simd::avx2_available()) return;
  const auto sq = oracle::unit_square();
  compare(sq, {0.5, 0}, 0.25);    // chord along an edge
  compare(sq, {0.5, 0}, 1.0);     // tangent to the top edge
  compare(sq, {0, 0}, 1.0);       // passes through two vertices
  compare(sq, {0.5, 0.5}, 0.5);   // inscribed circle
  compare(sq, {0.5, 0.5}, 0.2);   // disk fully inside
  compare(sq, {0.5, 0.5}, 10.0);  // polygon fully inside
  compare(sq, {5, 5}, 1.0);       // disjoint
  // Repeated vertex gives a zero-length edge inside a vector lane.
  compare({{0, 0}, {1, 0}, {1, 0}, {1, 1}, {0.5, 1.2}, {0, 1}}, {1, 0}, 0.6);
  compare(oracle::regular_polygon(4096, 1.0), {1, 0}, 0.3);
}

TEST_CASE("polygon area calls go through the active kernel") {
  std::mt19937_64 rng(23);
  const auto v = oracle::random_star_polygon(rng, 37);
  const Polygon poly = validate_polygon(v);
  const Closed cl = closed(poly.vertices());
  const double direct = simd::active_disk_area_kernel()(cl.xs.data(), cl.ys.data(), poly.size(), 0.1, 0.2, 0.7);
  CHECK(poly.disk_area({0.1, 0.2}, 0.7) == doctest::Approx(direct).epsilon(1e-15));
}
