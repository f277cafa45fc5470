#include <cmath>
#include <random>
#include <sstream>

#include "areasig/ellipse.hpp"
#include "areasig/graphlike.hpp"
#include "areasig/reconstruct.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace areasig;

namespace {

Polygon triangle() { return validate_polygon({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}); }

double max_tlike_error(const Shape& shape, double s_hat, double r_hat, double step) {
  const auto n_b = static_cast<std::size_t>(std::llround(shape.length() / step));
  const auto n_r = static_cast<std::size_t>(std::llround(r_hat / step));
  const TLikeData data = generate_tlike_data(shape, s_hat, r_hat, n_b, n_r);
  const auto pts = reconstruct_tlike(data, shape.length() / static_cast<double>(n_b));
  std::vector<Point2> rec, truth;
  for (const auto& p : pts) {
    rec.push_back(p.position);
    truth.push_back(tlike_truth(shape, s_hat, r_hat, p));
  }
  const Alignment al = fit_rigid(rec, truth);
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) worst = std::max(worst, distance(al.transform.apply(rec[i]), truth[i]));
  return worst;
}

}  // namespace

TEST_CASE("vertex detection") {
  const Polygon sq = validate_polygon(oracle::unit_square());
  const Signature sig = signature_uniform(sq, 0.25, 4096);
  auto v = detect_vertices(sig);
  REQUIRE(v.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(v[i].s == doctest::Approx(static_cast<double>(i)).epsilon(1e-12));

  const Polygon tri = triangle();
  const Signature tsig = signature_uniform(tri, 0.2, 1000);
  v = detect_vertices(tsig);
  REQUIRE(v.size() == 3);
  CHECK(v[0].s == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(v[1].s == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(v[2].s == doctest::Approx(2.0).epsilon(1e-6));
  const auto with_oracle = detect_vertices(tsig, make_row_oracle(tri, 0.2));
  REQUIRE(with_oracle.size() == 3);
  CHECK(std::abs(with_oracle[1].s - 1.0) < 1e-11);
  CHECK(std::abs(with_oracle[2].s - 2.0) < 1e-11);

  const Polygon circle = validate_polygon(oracle::regular_polygon(4096, 1.0));
  (void)circle;
  const EllipseShape smooth = EllipseShape::circle(1.0);
  try {
    detect_vertices(signature_uniform(smooth, 0.3, 512));
    FAIL("smooth boundary produced vertices");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoVerticesDetected);
  }
}

TEST_CASE("polygon round trips") {
  const Polygon tri = triangle();
  const Signature tsig = signature_uniform(tri, 0.2, 1000);
  for (bool use_oracle : {false, true}) {
    const auto rec = reconstruct_polygon(tsig, use_oracle ? make_row_oracle(tri, 0.2) : RowOracle{});
    REQUIRE(rec.side_lengths.size() == 3);
    const double tol = use_oracle ? 1e-9 : 1e-6;
    for (double len : rec.side_lengths) CHECK(std::abs(len - 1.0) < tol);
    for (double a : rec.interior_angles) CHECK(std::abs(a - M_PI / 3) < tol);
    CHECK(rec.closure_residual < (use_oracle ? 1e-9 : 1e-5));
    CHECK(rec.psi_crosscheck < 1e-9);
  }

  const Polygon sq = validate_polygon(oracle::unit_square());
  const auto rec = reconstruct_polygon(signature_uniform(sq, 0.25, 1024));
  REQUIRE(rec.side_lengths.size() == 4);
  for (double len : rec.side_lengths) CHECK(len == doctest::Approx(1.0).epsilon(1e-12));
  for (double a : rec.interior_angles) CHECK(a == doctest::Approx(M_PI / 2).epsilon(1e-12));
  const Alignment al = rigid_align(std::span<const Point2>(rec.vertices), std::span<const Point2>(sq.vertices()));
  CHECK(al.residual < 1e-12);
}

TEST_CASE("irregular pentagon at 0.9 of its largest passing radius") {
  const Polygon pent = validate_polygon({{0, 0}, {1.2, -0.1}, {1.6, 0.8}, {0.7, 1.5}, {-0.3, 0.9}});
  double lo = 0.01, hi = 1.0;
  REQUIRE(check_tcgl(pent, lo, 512).pass);
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (check_tcgl(pent, mid, 512).pass ? lo : hi) = mid;
  }
  const double r = 0.9 * lo;
  const Signature sig = signature_uniform(pent, r, 2048);
  const auto rec = reconstruct_polygon(sig, make_row_oracle(pent, r));
  REQUIRE(rec.vertices.size() == 5);
  const Alignment al = rigid_align(std::span<const Point2>(rec.vertices), std::span<const Point2>(pent.vertices()));
  CHECK(al.residual < 1e-8);
  double sum = 0.0;
  for (double a : rec.interior_angles) sum += a;
  CHECK(sum == doctest::Approx(3 * M_PI).epsilon(1e-9));
}

TEST_CASE("T-like marching on a circle") {
  const EllipseShape circle = EllipseShape::circle(1.0);
  CHECK(max_tlike_error(circle, 0.0, 0.5, 1e-3) < 2e-3);
}

TEST_CASE("T-like marching converges on an ellipse") {
  const EllipseShape e(2.0, 1.0);
  const double e1 = max_tlike_error(e, 0.3, 0.3, 1e-2);
  const double e2 = max_tlike_error(e, 0.3, 0.3, 5e-3);
  MESSAGE("errors " << e1 << " " << e2 << " ratio " << e1 / e2);
  CHECK(e1 / e2 >= 1.8);
}

TEST_CASE("T-like input validation") {
  const EllipseShape circle = EllipseShape::circle(1.0);
  TLikeData data = generate_tlike_data(circle, 0.0, 0.5, 600, 50);
  CHECK_THROWS_AS(reconstruct_tlike(data, 0.0), Error);
  // A gap in the radial leg wider than ten steps loses the frame.
  TLikeData gapped = data;
  gapped.radial.erase(gapped.radial.begin() + 5, gapped.radial.begin() + 40);
  try {
    reconstruct_tlike(gapped, circle.length() / 600);
    FAIL("gap accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FrameLoss);
  }
  // A small gap is bridged by interpolation.
  TLikeData small = data;
  small.radial.erase(small.radial.begin() + 20, small.radial.begin() + 23);
  CHECK_NOTHROW(reconstruct_tlike(small, circle.length() / 600));

  std::stringstream ss;
  write_tlike_csv(ss, data);
  const TLikeData back = read_tlike_csv(ss);
  CHECK(back.boundary.size() == data.boundary.size());
  CHECK(back.radial.size() == data.radial.size());
  CHECK(back.r_hat == doctest::Approx(0.5));
  CHECK(back.perimeter == doctest::Approx(circle.length()).epsilon(1e-12));

  std::stringstream no_radial("leg,coord,g,g_r,g_s\nboundary,0,1,1,0\nboundary,1,1,1,0\nboundary,2,1,1,0\n");
  try {
    read_tlike_csv(no_radial);
    FAIL("missing radial leg accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("steep g_s onset near a right angle is not a vertex") {
  // Nearly square quadrilateral: at r = 0.5457 the circle sweeps one corner
  // almost tangentially, so g_s rises steeply mid-edge without jumping.
  const Polygon quad = validate_polygon({{1.0877263868714808, 0.04280057847002617},
                                         {-0.0065406358474645364, 0.98108397857501739},
                                         {-0.9494489368115655, -0.0048274648306186572},
                                         {0.013866572412200275, -1.0983750868750739}});
  const double r = 0.54568818030302857;
  const auto rec = reconstruct_polygon(signature_uniform(quad, r, 2048), make_row_oracle(quad, r));
  REQUIRE(rec.vertices.size() == 4);
  CHECK(rigid_align(std::span<const Point2>(rec.vertices), std::span<const Point2>(quad.vertices())).residual < 1e-9);
}
