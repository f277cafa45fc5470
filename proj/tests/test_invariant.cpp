#include <cmath>
#include <random>
#include <sstream>

#include "areasig/ellipse.hpp"
#include "areasig/invariant.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace areasig;

namespace {

Polygon square() { return validate_polygon(oracle::unit_square()); }

double g_at(const Shape& shape, double s, double r) {
  return shape.disk_area(shape.point_at(s).position, r);
}

}  // namespace

TEST_CASE("straight edge values") {
  const Polygon sq = square();
  const double r = 0.25;
  const SignatureRow row = signature_row(sq, r, 0.5);
  CHECK(std::abs(row.g - M_PI * r * r / 2) <= 1e-12);
  REQUIRE(row.g_r);
  CHECK(std::abs(*row.g_r - M_PI * r) <= 1e-12);
  CHECK(std::abs(*row.g_s_minus) <= 1e-12);
  CHECK(std::abs(*row.g_s_plus) <= 1e-12);
  CHECK(derivative_r(sq, 0.5, r) == doctest::Approx(M_PI * r));
}

TEST_CASE("corner values and one-sided derivatives") {
  const Polygon sq = square();
  const double r = 0.25;
  const SignatureRow row = signature_row(sq, r, 0.0);
  CHECK(row.g == doctest::Approx(M_PI * r * r / 4).epsilon(1e-14));
  REQUIRE(row.g_r);
  CHECK(*row.g_r == doctest::Approx(M_PI * r / 2).epsilon(1e-14));
  // Minus side: the disk slides along the left edge toward the corner.
  const double h = 1e-6;
  const double fd_minus = (row.g - g_at(sq, -h, r)) / h;
  const double fd_plus = (g_at(sq, h, r) - row.g) / h;
  CHECK(*row.g_s_minus == doctest::Approx(fd_minus).epsilon(1e-4));
  CHECK(*row.g_s_plus == doctest::Approx(fd_plus).epsilon(1e-4));
  CHECK(*row.g_s_minus == doctest::Approx(-r));
  CHECK(*row.g_s_plus == doctest::Approx(r));

  // Near the corner, from exact crossing coordinates.
  const auto d = derivative_s(sq, 0.1, r);
  const double y = std::sqrt(r * r - 0.01);
  CHECK(d.plus == doctest::Approx(y));
  CHECK(d.minus == doctest::Approx(y));
  const double fd = (g_at(sq, 0.1 + 1e-6, r) - g_at(sq, 0.1 - 1e-6, r)) / 2e-6;
  CHECK(d.plus == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("64-gon against the lens area") {
  const Polygon ngon = validate_polygon(oracle::regular_polygon(64, 1.0));
  const double lens = oracle::lens_area(1.0, 0.5);
  for (double s : {0.0, 0.05, 1.234, 3.0}) CHECK(std::abs(g_at(ngon, s, 0.5) - lens) < 1e-3);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const EllipseShape ellipse(2.0, 1.0, {0.1, 0.2}, 0.7);
  const Polygon poly = validate_polygon(oracle::random_star_polygon(rng, 9));
  const double h = 1e-6;
  int tested = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const Shape& shape = trial % 2 ? static_cast<const Shape&>(ellipse) : poly;
    const double r = trial % 2 ? 0.3 : 0.15;
    const double s = u(rng) * shape.length();
    const BoundaryPoint bp = shape.point_at(s);
    if (bp.is_corner()) continue;
    const auto frame = try_tgl_frame(shape, s, r, Side::plus);
    if (!frame) continue;
    const double fd_r = (g_at(shape, s, r + h) - g_at(shape, s, r - h)) / (2 * h);
    const double fd_s = (g_at(shape, s + h, r) - g_at(shape, s - h, r)) / (2 * h);
    const double gr = derivative_r(shape, s, r);
    const auto gs = derivative_s(shape, s, r);
    CHECK(std::abs(gr - fd_r) <= 1e-4 * std::abs(gr));
    CHECK(std::abs(gs.plus - fd_s) <= 1e-4 * std::max(std::abs(gs.plus), r));
    CHECK(gs.plus == doctest::Approx(gs.minus));
    CHECK(gr > 0);
    CHECK(gr <= 2 * M_PI * r);
    ++tested;
  }
  CHECK(tested > 40);
}

TEST_CASE("angle inversion") {
  const double r = 0.7;
  auto [a, b] = solve_entry_exit_angles(M_PI * r, 0.0, r);
  CHECK(a == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b == doctest::Approx(M_PI));
  std::tie(a, b) = solve_entry_exit_angles(M_PI * r, -r, r);
  CHECK(a == doctest::Approx(M_PI / 6));
  CHECK(b == doctest::Approx(7 * M_PI / 6));
  CHECK_THROWS_AS(solve_entry_exit_angles(M_PI * r, 2.5 * r, r), Error);
  CHECK_THROWS_AS(solve_entry_exit_angles(-1.0, 0.0, r), Error);
  CHECK_THROWS_AS(solve_entry_exit_angles(7.0 * r, 0.0, r), Error);

  // Frames taken from real geometry invert back to themselves.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Polygon poly = validate_polygon(oracle::regular_polygon(7, 1.0));
  const EllipseShape ellipse(2.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape& shape = trial % 2 ? static_cast<const Shape&>(ellipse) : poly;
    const double rr = 0.1 + 0.3 * u(rng);
    const auto f = tgl_frame(shape, u(rng) * shape.length(), rr, trial % 3 ? Side::plus : Side::minus);
    auto [t1, t2] = solve_entry_exit_angles(rr * (f.theta2 - f.theta1), f.h2() - f.h1(), rr);
    CHECK(std::abs(t1 - f.theta1) < 1e-10);
    CHECK(std::abs(t2 - f.theta2) < 1e-10);
  }
}

TEST_CASE("slide map is strictly decreasing on the bracket") {
  for (double delta = 0.05; delta < 2 * M_PI; delta += 0.05) {
    double prev = INFINITY;
    const double lo = -delta / 2, hi = M_PI - delta / 2;
    for (int k = 1; k < 200; ++k) {
      const double t = lo + (hi - lo) * k / 200.0;
      const double f = std::sin(t + delta) - std::sin(t);
      CHECK(f < prev);
      prev = f;
    }
  }
}

TEST_CASE("signature rows and CSV round trip") {
  const Polygon sq = square();
  const Signature sig = signature_uniform(sq, 0.25, 16);
  REQUIRE(sig.rows.size() == 16);
  for (const auto& row : sig.rows) {
    CHECK(row.g <= M_PI * 0.0625);
    CHECK(row.g_r.has_value());
  }
  CHECK(sig.rows[4].g_s_minus.value() != doctest::Approx(sig.rows[4].g_s_plus.value()));

  // Circle too large for two arcs leaves derivative columns empty.
  const Signature big = signature_uniform(sq, 3.0, 4);
  CHECK(!big.rows[0].g_r.has_value());

  std::stringstream ss;
  write_signature_csv(ss, sig);
  const Signature back = read_signature_csv(ss, 0.25);
  REQUIRE(back.rows.size() == sig.rows.size());
  CHECK(back.perimeter == doctest::Approx(4.0).epsilon(1e-14));
  for (std::size_t i = 0; i < sig.rows.size(); ++i) {
    CHECK(back.rows[i].s == sig.rows[i].s);
    CHECK(back.rows[i].g == sig.rows[i].g);
    CHECK(back.rows[i].g_s_plus == sig.rows[i].g_s_plus);
  }
  std::stringstream empty_cols;
  write_signature_csv(empty_cols, big);
  CHECK(empty_cols.str().find(",,,") != std::string::npos);

  std::stringstream bad1("s,g\n0,1\n");
  CHECK_THROWS_AS(read_signature_csv(bad1, 0.25), Error);
  std::stringstream bad2("s,g,g_r,g_s_minus,g_s_plus\n0,abc,,,\n");
  CHECK_THROWS_AS(read_signature_csv(bad2, 0.25), Error);
  std::stringstream bad3("s,g,g_r,g_s_minus,g_s_plus\n1,0,,,\n0.5,0,,,\n");
  CHECK_THROWS_AS(read_signature_csv(bad3, 0.25), Error);
}
