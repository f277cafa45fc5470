// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "areasig/curvature.hpp"
#include "areasig/ellipse.hpp"
#include "areasig/fit.hpp"
#include "areasig/graphlike.hpp"
#include "areasig/invariant.hpp"
#include "areasig/reconstruct.hpp"
#include "areasig/shapes.hpp"
#include "support.hpp"

using namespace areasig;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seg_dist(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy);
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

// Boundary/circle crossings counted from vertex distances alone: a sign change
// of |v - c| - r along an edge is one crossing; an edge whose endpoints are both
// outside but whose closest point is inside is two.
std::size_t count_crossings(const std::vector<Point2>& v, Point2 c, double r) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i], b = v[(i + 1) % v.size()];
    const bool ia = std::hypot(a.x - c.x, a.y - c.y) < r, ib = std::hypot(b.x - c.x, b.y - c.y) < r;
    if (ia != ib) ++n;
    else if (!ia && seg_dist(c, a, b) < r) n += 2;
  }
  return n;
}

// ---------------------------------------------------------------------------

Outcome exact_area() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> nv(3, 16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int worst_case = 0;
  double worst_z = 0.0;
  for (int p = 0; p < 25; ++p) {
    const Polygon poly = validate_polygon(oracle::random_star_polygon(rng, static_cast<std::size_t>(nv(rng))));
    for (int k = 0; k < 4; ++k) {
      const Point2 c = poly.point_at(u(rng) * poly.length()).position;
      const double r = 0.05 + 1.45 * u(rng);
      const double exact = poly.disk_area(c, r);
      const auto mc = oracle::monte_carlo_disk_area(poly.vertices(), c, r, 1000000, rng());
      const double z = std::abs(exact - mc.mean) / mc.stderr_;
      if (z > worst_z) worst_z = z;
      if (z > 4.0) ++worst_case;
    }
  }
  return {worst_case == 0, fmt("100 cases, largest deviation %.2f standard errors", worst_z)};
}

Outcome derivative_checks() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const EllipseShape circle = EllipseShape::circle(1.0);
  const EllipseShape ellipse(2.0, 1.0);
  const EllipseShape tilted(1.5, 0.7, {0.3, -0.2}, 0.4);
  const Polygon star = validate_polygon(star_vertices(1.0, 0.3, 4, 96));
  const std::vector<const Shape*> corpus{&circle, &ellipse, &tilted, &star};
  const double h = 1e-6;
  double worst = 0.0;
  int count = 0;
  while (count < 200) {
    const Shape& sh = *corpus[static_cast<std::size_t>(count) % corpus.size()];
    double s = u(rng) * sh.length();
    if (&sh == &star) {
      // Star polyline: stay well inside an edge, where the boundary is smooth.
      const auto k = static_cast<std::size_t>(u(rng) * 96.0) % 96;
      s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += star.edge_length(j);
      s += (0.1 + 0.8 * u(rng)) * star.edge_length(k);
    }
    const double r = 0.1 + 0.4 * u(rng);
    if (!try_tgl_frame(sh, s, r, Side::plus) || !try_tgl_frame(sh, s, r, Side::minus)) continue;
    const SidedDerivative ds = derivative_s(sh, s, r);
    if (std::abs(ds.plus - ds.minus) > 1e-12) continue;  // at a vertex
    auto g = [&](double ss, double rr) { return sh.disk_area(sh.point_at(ss).position, rr); };
    const double fd_r = (g(s, r + h) - g(s, r - h)) / (2 * h);
    const double fd_s = (g(s + h, r) - g(s - h, r)) / (2 * h);
    const double an_r = derivative_r(sh, s, r);
    // g_s vanishes on circles, so its error is taken relative to max(|g_s|, r).
    worst = std::max(worst, std::abs(fd_r - an_r) / std::abs(an_r));
    worst = std::max(worst, std::abs(fd_s - ds.plus) / std::max(std::abs(ds.plus), r));
    ++count;
  }
  const Polygon big = validate_polygon({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
  const double r = 0.5;
  const double e_g = std::abs(big.disk_area({5, 0}, r) - M_PI * r * r / 2);
  const double e_r = std::abs(derivative_r(big, 5.0, r) - M_PI * r);
  const double e_s = std::abs(derivative_s(big, 5.0, r).plus);
  const double edge_err = std::max({e_g, e_r, e_s});
  return {worst <= 1e-4 && edge_err <= 1e-12,
          fmt("200 samples, worst relative FD error %.2e; straight edge error %.1e", worst, edge_err)};
}

Outcome tcgl_consistency() {
  struct Case {
    std::string name;
    Polygon poly;
    double r;
  };
  std::vector<Case> cases;
  const Polygon hex = validate_polygon(regular_ngon_vertices(6, 1.0));
  const Polygon oct = validate_polygon(regular_ngon_vertices(8, 1.0));
  const Polygon circ = validate_polygon(regular_ngon_vertices(256, 1.0));
  const Polygon ell = make_polygon(ShapeSpec{ShapeKind::ellipse});
  const Polygon star = validate_polygon(star_vertices(1.0, 0.3, 4, 256));
  const Polygon sq = validate_polygon(oracle::unit_square());
  for (double r : {0.2, 0.4, 0.8}) {
    cases.push_back({"hexagon", hex, r});
    cases.push_back({"octagon", oct, r});
    cases.push_back({"circle", circ, r});
    cases.push_back({"ellipse", ell, r});
    cases.push_back({"star", star, r});
  }
  int passing = 0, inconsistent = 0;
  for (const auto& c : cases) {
    const TCGLReport rep = check_tcgl(c.poly, c.r, 512);
    if (!rep.pass) continue;
    ++passing;
    for (const auto& smp : rep.samples) {
      if (smp.crossing_count != 2 || count_crossings(c.poly.vertices(), c.poly.point_at(smp.s).position, c.r) != 2) {
        ++inconsistent;
        break;
      }
    }
  }
  const bool sq_fail_051 = !check_tcgl(sq, 0.51, 512).pass;
  const bool sq_pass_025 = check_tcgl(sq, 0.25, 512).pass;
  const bool two_arc_025 = check_two_arc(sq, 0.25, 512).pass;
  std::string d = std::to_string(passing) + " passing pairs, " + std::to_string(inconsistent) +
                  " with a crossing count other than 2; square r=0.51 " + (sq_fail_051 ? "fails" : "passes") +
                  ", square r=0.25 " + (sq_pass_025 ? "passes" : "fails (right-angle cone margin is 0)") +
                  ", square two-arc at 0.25 " + (two_arc_025 ? "holds" : "broken");
  return {inconsistent == 0 && passing > 0 && sq_fail_051 && sq_pass_025, d};
}

// Random polygon with n vertices around the unit circle; for n >= 6 vertex 0 is
// moved to 85% of its neighbours' chord midpoint, a mild reflex corner.
std::vector<Point2> jittered_polygon(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point2> v;
  const double dt = 2 * M_PI / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = dt * (static_cast<double>(k) + 0.15 * u(rng));
    const double rad = 1.0 + 0.1 * u(rng);
    v.push_back({rad * std::cos(t), rad * std::sin(t)});
  }
  if (n >= 6) v[0] = 0.425 * (v[1] + v[n - 1]);
  return v;
}

Outcome polygon_round_trip() {
  std::mt19937_64 rng(4242);
  int failed = 0, strict = 0, unverifiable = 0;
  double worst_side = 0, worst_angle = 0, worst_align = 0, worst_sum = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 3 + static_cast<std::size_t>(i) % 7;
    // Strict TCGL needs every interior angle above 90 degrees, so no triangle
    // or quadrilateral qualifies (an acute corner even breaks the two-arc
    // property). For those, draws are rejected until a frame exists on both
    // sides of every vertex; for n >= 5 until check_tcgl passes.
    Polygon poly = validate_polygon(jittered_polygon(rng, n));
    double r = 0.0;
    bool verified = false;
    for (int attempt = 0; attempt < 500 && !verified; ++attempt) {
      if (attempt > 0) poly = validate_polygon(jittered_polygon(rng, n));
      double shortest = INFINITY;
      for (std::size_t k = 0; k < n; ++k) shortest = std::min(shortest, poly.edge_length(k));
      r = 0.4 * shortest;
      if (n >= 5) {
        verified = check_tcgl(poly, r, 512).pass;
      } else {
        verified = true;
        double sv = 0.0;
        for (std::size_t k = 0; k < n; sv += poly.edge_length(k++)) {
          verified = verified && try_tgl_frame(poly, sv, r, Side::minus) && try_tgl_frame(poly, sv, r, Side::plus);
        }
      }
    }
    if (!verified) {
      std::printf("  polygon %d (n=%zu): no TCGL draw\n", i, n);
      ++failed;
      continue;
    }
    (n >= 5 ? strict : unverifiable)++;
    try {
      const auto rec = reconstruct_polygon(signature_uniform(poly, r, 2048), make_row_oracle(poly, r));
      if (rec.vertices.size() != n) {
        std::printf("  polygon %d (n=%zu): %zu vertices recovered\n", i, n, rec.vertices.size());
        ++failed;
        continue;
      }
      const Alignment al = rigid_align(std::span<const Point2>(rec.vertices), std::span<const Point2>(poly.vertices()));
      const std::size_t sh = al.shift;
      double sum = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = (k + sh) % n;
        worst_side = std::max(worst_side, std::abs(rec.side_lengths[k] - poly.edge_length(j)));
        const Point2 a = poly.vertex(j + n - 1), b = poly.vertex(j), c = poly.vertex(j + 1);
        const double turn = std::atan2(cross(b - a, c - b), dot(b - a, c - b));
        worst_angle = std::max(worst_angle, std::abs(rec.interior_angles[k] - (M_PI - turn)));
        sum += rec.interior_angles[k];
      }
      worst_sum = std::max(worst_sum, std::abs(sum - static_cast<double>(n - 2) * M_PI));
      worst_align = std::max(worst_align, al.residual / poly.diameter());
    } catch (const Error& e) {
      std::printf("  polygon %d (n=%zu, r=%.17g): %s\n   ", i, n, r, e.what());
      for (Point2 p : poly.vertices()) std::printf(" [%.17g, %.17g]", p.x, p.y);
      std::printf("\n");
      ++failed;
    }
  }
  const bool ok = failed == 0 && worst_side <= 1e-6 && worst_angle <= 1e-6 && worst_align < 1e-8 && worst_sum <= 1e-6;
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%d TCGL-verified (n>=5) + %d vertex-frame-verified (n<=4) polygons, %d failures; side %.1e, angle %.1e, align/diam %.1e, "
                "angle sum %.1e",
                strict, unverifiable, failed, worst_side, worst_angle, worst_align, worst_sum);
  return {ok, buf};
}

Outcome small_radius_curvature() {
  const std::vector<double> radii{0.1, 0.05, 0.025};
  const double k1 = curvature_small_r(EllipseShape::circle(1.0), 0.7, radii).kappa;
  const double k2 = curvature_small_r(EllipseShape::circle(2.0), 0.7, radii).kappa;
  const Polygon big = validate_polygon({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
  const double k0 = curvature_small_r(big, 5.0, radii).kappa;
  const bool ok = std::abs(k1 - 1.0) <= 1e-3 && std::abs(k0) <= 1e-6 && std::abs(k2 - 0.5) <= 5e-4;
  return {ok, fmt("unit circle %.9f, straight edge %.2e, radius-2 circle %.9f", k1, k0, k2)};
}

Outcome exit_point_kappa() {
  const double r = 0.3;
  double worst = 0.0;
  auto check = [&](const EllipseShape& e, double s) {
    const auto [plus, minus] = curvature_exit_points(e, s, r);
    for (const auto* est : {&plus, &minus}) {
      const double truth = e.curvature_at(est->point_s);
      worst = std::max(worst, std::abs(est->kappa - truth) / truth);
    }
  };
  const EllipseShape c1 = EllipseShape::circle(1.0), c2 = EllipseShape::circle(2.0), el(2.0, 1.0);
  for (double s : {0.0, 1.3, 4.0}) {
    check(c1, s);
    check(c2, s);
  }
  for (int k = 0; k < 12; ++k) check(el, el.length() * k / 12.0);
  return {worst <= 0.01, fmt("30 exit/entry points, worst relative error %.2e", worst)};
}

double tlike_error(const EllipseShape& e, double step) {
  const double s_hat = 0.3, r_hat = 0.3;
  const auto n_b = static_cast<std::size_t>(std::llround(e.length() / step));
  const auto n_r = static_cast<std::size_t>(std::llround(r_hat / step));
  const TLikeData data = generate_tlike_data(e, s_hat, r_hat, n_b, n_r);
  const auto pts = reconstruct_tlike(data, e.length() / static_cast<double>(n_b));
  std::vector<Point2> rec, truth;
  for (const auto& p : pts) {
    rec.push_back(p.position);
    truth.push_back(tlike_truth(e, s_hat, r_hat, p));
  }
  const Alignment al = fit_rigid(rec, truth);
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) worst = std::max(worst, distance(al.transform.apply(rec[i]), truth[i]));
  return worst;
}

Outcome tlike_convergence() {
  const EllipseShape e(2.0, 1.0);
  const double e1 = tlike_error(e, 1e-2), e2 = tlike_error(e, 5e-3);
  return {e1 / e2 >= 1.8, fmt("max error %.3e at step 1e-2, %.3e at 5e-3, ratio %.3f", e1, e2, e1 / e2)};
}

Outcome tcgl_approximation() {
  const EllipseShape circle = EllipseShape::circle(1.0);
  const double eps = 0.1;
  const Polygon approx = tcgl_polygon_approximation(circle, 0.5, eps);
  const bool pass = check_tcgl(approx, 0.4, std::max<std::size_t>(1024, approx.size())).pass;
  double worst = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double t = 2 * M_PI * k / 20000.0;
    const Point2 p{std::cos(t), std::sin(t)};
    double best = INFINITY;
    for (std::size_t i = 0; i < approx.size(); ++i) best = std::min(best, seg_dist(p, approx.vertex(i), approx.vertex(i + 1)));
    worst = std::max(worst, best);
  }
  return {pass && worst <= eps / 6,
          std::to_string(approx.size()) + " vertices, check_tcgl at 0.4 " + (pass ? "passes" : "fails") +
              fmt(", max distance %.3e (bound %.3e)", worst, eps / 6)};
}

Outcome star_fit() {
  const int N = 128;
  const double r = 0.5;
  const Polygon star = validate_polygon(star_vertices(1.0, 0.3, 4, N));
  const Signature target = vertex_signature(star, r);
  MadsOptions opt;
  opt.least_squares_search = true;
  const auto levels = coarse_to_fine_fit(target, 12, 20000, 1, opt);
  bool monotone = levels.size() == 12;
  double prev = INFINITY;
  for (const auto& lv : levels) {
    for (const auto& h : lv.history) {
      if (h.value > prev) monotone = false;
      prev = h.value;
    }
    if (lv.incumbent_value > prev) monotone = false;
    prev = lv.incumbent_value;
  }
  double mean = 0.0;
  for (const auto& row : target.rows) mean += row.g;
  mean /= N;
  const double rms = std::sqrt(levels.back().incumbent_value / N);
  const double align = rigid_align(fourier_to_polygon(levels.back().incumbent), star).residual / star.diameter();
  return {monotone && rms <= 0.01 * mean && align <= 0.02,
          std::string(monotone ? "monotone" : "NOT monotone") +
              fmt(", RMS misfit %.2e of mean g, rigid residual %.2e of diameter", rms / mean, align)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double time_limit;  // seconds, 0 for none
  };
  const std::vector<Criterion> criteria{
      {"exact disk-polygon area vs Monte Carlo", exact_area, 120},
      {"analytic g_r, g_s vs finite differences", derivative_checks, 0},
      {"TCGL verdicts and two-crossing consistency", tcgl_consistency, 0},
      {"polygon reconstruction round trip", polygon_round_trip, 60},
      {"small-radius curvature limit", small_radius_curvature, 0},
      {"exit-point curvature from third-order partials", exit_point_kappa, 0},
      {"T-like marching first-order convergence", tlike_convergence, 0},
      {"TCGL polygon approximation of the unit circle", tcgl_approximation, 0},
      {"coarse-to-fine Fourier fit of the 4-lobe star", star_fit, 600},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criteria[i].time_limit > 0 && secs > criteria[i].time_limit) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s limit", criteria[i].time_limit);
    }
    std::printf("%s criterion %zu: %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
