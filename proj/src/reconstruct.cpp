#include "areasig/reconstruct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace areasig {

RowOracle make_row_oracle(const Shape& shape, double r) {
  return [&shape, r](double s) { return signature_row(shape, r, s); };
}

// ---------------------------------------------------------------------------
// Vertex detection

namespace {

bool has_slopes(const SignatureRow& row) { return row.g_s_minus && row.g_s_plus; }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Cubic Hermite through (s0, g0, d0), (s1, g1, d1); value and slope at s.
std::pair<double, double> hermite(double s0, double g0, double d0, double s1, double g1, double d1, double s) {
  const double h = s1 - s0, t = (s - s0) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double value = (2 * t3 - 3 * t2 + 1) * g0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * g1 +
                       (t3 - t2) * h * d1;
  const double slope = ((6 * t2 - 6 * t) * g0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * g1 +
                        (3 * t2 - 2 * t) * h * d1) /
                       h;
  return {value, slope};
}

// Cubic through four equally spaced samples at offsets 0..3 (in steps), evaluated at x steps.
double cubic(const std::array<double, 4>& y, double x) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    double w = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != i) w *= (x - j) / static_cast<double>(i - j);
    sum += w * y[static_cast<std::size_t>(i)];
  }
  return sum;
}

struct GridView {
  const Signature& sig;
  std::size_t n;
  double h;
  double L;

  const SignatureRow& row(std::ptrdiff_t k) const {
    const auto nn = static_cast<std::ptrdiff_t>(n);
    return sig.rows[static_cast<std::size_t>(((k % nn) + nn) % nn)];
  }
  // Arc length of (possibly wrapped) row index k, continuous across the seam.
  double s(std::ptrdiff_t k) const { return sig.rows.front().s + h * static_cast<double>(k); }
};

// Bisects towards the one-sided branch change. A genuine vertex is hit to
// within the oracle's snapping distance and reports unequal one-sided slopes;
// nullopt means the grid jump was not a vertex (a steep but continuous g_s).
std::optional<DetectedVertex> refine_with_oracle(const GridView& grid, std::ptrdiff_t k, const RowOracle& oracle) {
  double a = grid.s(k), b = grid.s(k + 1);
  double ga = *grid.row(k).g_s_plus, gb = *grid.row(k + 1).g_s_minus;
  const double tol = 1e-12 * grid.L;
  for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
    const double m = 0.5 * (a + b);
    const SignatureRow row = oracle(m);
    if (!has_slopes(row)) break;
    if (*row.g_s_minus != *row.g_s_plus) return DetectedVertex{row.s, row};
    const double v = *row.g_s_plus;
    if (std::abs(v - ga) <= std::abs(v - gb)) {
      a = m;
      ga = v;
    } else {
      b = m;
      gb = v;
    }
  }
  const SignatureRow row = oracle(0.5 * (a + b));
  if (!has_slopes(row) || *row.g_s_minus == *row.g_s_plus) return std::nullopt;
  return DetectedVertex{row.s, row};
}

DetectedVertex refine_on_grid(const GridView& grid, std::ptrdiff_t k) {
  const SignatureRow &l0 = grid.row(k - 1), &l1 = grid.row(k);
  const SignatureRow &r0 = grid.row(k + 1), &r1 = grid.row(k + 2);
  const double sl0 = grid.s(k - 1), sl1 = grid.s(k), sr0 = grid.s(k + 1), sr1 = grid.s(k + 2);
  auto left = [&](double s) { return hermite(sl0, l0.g, *l0.g_s_plus, sl1, l1.g, *l1.g_s_plus, s); };
  auto right = [&](double s) { return hermite(sr0, r0.g, *r0.g_s_minus, sr1, r1.g, *r1.g_s_minus, s); };
  auto diff = [&](double s) { return left(s).first - right(s).first; };
  double a = sl1, b = sr0;
  double fa = diff(a);
  double star = 0.5 * (a + b);
  if ((fa < 0) != (diff(b) < 0)) {
    for (int iter = 0; iter < 200 && b - a > 1e-15 * grid.L; ++iter) {
      const double m = 0.5 * (a + b);
      const double fm = diff(m);
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    star = 0.5 * (a + b);
  }
  DetectedVertex v;
  const auto [g_left, slope_left] = left(star);
  v.row.g = g_left;
  v.row.g_s_minus = slope_left;
  v.row.g_s_plus = right(star).second;
  const double xl = (star - grid.s(k - 3)) / grid.h;
  const double xr = (star - grid.s(k + 1)) / grid.h;
  const double gr_left = cubic({*grid.row(k - 3).g_r, *grid.row(k - 2).g_r, *grid.row(k - 1).g_r, *grid.row(k).g_r}, xl);
  const double gr_right =
      cubic({*grid.row(k + 1).g_r, *grid.row(k + 2).g_r, *grid.row(k + 3).g_r, *grid.row(k + 4).g_r}, xr);
  v.row.g_r = 0.5 * (gr_left + gr_right);
  v.s = star;
  v.row.s = star;
  return v;
}

}  // namespace

std::vector<DetectedVertex> detect_vertices(const Signature& sig, const RowOracle& oracle) {
  const std::size_t n = sig.rows.size();
  if (n < 8) throw Error(ErrorCode::InvalidArgument, "signature needs at least 8 rows");
  if (!(sig.perimeter > 0.0)) throw Error(ErrorCode::InvalidArgument, "signature perimeter unknown (rows not uniform)");
  const GridView grid{sig, n, sig.perimeter / static_cast<double>(n), sig.perimeter};

  // Interleaved one-sided slopes: minus_0, plus_0, minus_1, plus_1, ...
  // jump[2k] is inside row k, jump[2k+1] lies between rows k and k+1.
  const std::size_t m = 2 * n;
  std::vector<double> jump(m, 0.0);
  std::vector<char> known(m, 0);
  std::vector<double> between;
  for (std::size_t k = 0; k < n; ++k) {
    const SignatureRow& a = sig.rows[k];
    const SignatureRow& b = sig.rows[(k + 1) % n];
    if (has_slopes(a)) {
      jump[2 * k] = *a.g_s_plus - *a.g_s_minus;
      known[2 * k] = 1;
    }
    if (has_slopes(a) && has_slopes(b)) {
      jump[2 * k + 1] = *b.g_s_minus - *a.g_s_plus;
      known[2 * k + 1] = 1;
      between.push_back(std::abs(jump[2 * k + 1]));
    }
  }
  const double threshold = std::max(10.0 * median(between), 1e-6 * sig.r);

  std::vector<DetectedVertex> out;
  for (std::size_t j = 0; j < m; ++j) {
    if (!known[j] || !(std::abs(jump[j]) > threshold)) continue;
    // A genuine jump towers over the same-kind differences next to it; the
    // square-root onset of g_s where the circle sweeps a far vertex does not.
    const double nb = std::max(std::abs(jump[(j + m - 2) % m]), std::abs(jump[(j + 2) % m]));
    if (!(std::abs(jump[j]) > 4.0 * nb)) continue;
    const auto k = static_cast<std::ptrdiff_t>(j / 2);
    if (j % 2 == 0) {
      const SignatureRow row = oracle ? oracle(grid.row(k).s) : grid.row(k);
      out.push_back({row.s, row});
      continue;
    }
    bool neighbours_ok = true;
    for (std::ptrdiff_t q = k - 3; q <= k + 4; ++q) {
      neighbours_ok = neighbours_ok && has_slopes(grid.row(q)) && grid.row(q).g_r;
    }
    if (oracle) {
      if (auto v = refine_with_oracle(grid, k, oracle)) out.push_back(*v);
    } else if (neighbours_ok) {
      out.push_back(refine_on_grid(grid, k));
    }
  }
  if (out.empty()) throw Error(ErrorCode::NoVerticesDetected, "g_s has no jumps; the boundary looks smooth");
  for (auto& v : out) {
    v.s = std::fmod(v.s, sig.perimeter);
    if (v.s < 0) v.s += sig.perimeter;
    v.row.s = v.s;
  }
  std::sort(out.begin(), out.end(), [](const DetectedVertex& a, const DetectedVertex& b) { return a.s < b.s; });
  return out;
}

// ---------------------------------------------------------------------------
// Polygon assembly

ReconstructedPolygon reconstruct_polygon(const Signature& sig, const RowOracle& oracle) {
  const std::vector<DetectedVertex> verts = detect_vertices(sig, oracle);
  const std::size_t n = verts.size();
  if (n < 3) throw Error(ErrorCode::NoVerticesDetected, "fewer than 3 vertices detected");
  const double r = sig.r;
  ReconstructedPolygon out;
  for (std::size_t i = 0; i < n; ++i) {
    const SignatureRow& row = verts[i].row;
    if (!row.g_r || !row.g_s_minus || !row.g_s_plus) {
      throw Error(ErrorCode::TwoArcViolation, "no derivative data at vertex s=" + format_real(verts[i].s));
    }
    std::pair<double, double> theta, phi;
    try {
      theta = solve_entry_exit_angles(*row.g_r, *row.g_s_minus, r);
      phi = solve_entry_exit_angles(*row.g_r, *row.g_s_plus, r);
    } catch (const Error& e) {
      throw Error(ErrorCode::AngleSolveFailed, "vertex s=" + format_real(verts[i].s) + ": " + e.what());
    }
    double psi = theta.first - phi.first;
    psi = std::remainder(psi, kTwoPi);
    const double psi2 = std::remainder(theta.second - phi.second, kTwoPi);
    out.psi_crosscheck = std::max(out.psi_crosscheck, std::abs(psi - psi2));
    out.vertex_s.push_back(verts[i].s);
    out.turning_angles.push_back(psi);
    out.interior_angles.push_back(kPi - psi);
    const double next = i + 1 < n ? verts[i + 1].s : verts[0].s + sig.perimeter;
    out.side_lengths.push_back(next - verts[i].s);
  }
  Point2 p{0.0, 0.0};
  double heading = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.vertices.push_back(p);
    p += Point2{std::cos(heading), std::sin(heading)} * out.side_lengths[i];
    heading += out.turning_angles[(i + 1) % n];
  }
  out.closure_residual = norm(p);
  if (out.closure_residual > 1e-6 * sig.perimeter) {
    throw Error(ErrorCode::ClosureFailure, "assembled boundary misses its start by " + format_real(out.closure_residual));
  }
  return out;
}

// ---------------------------------------------------------------------------
// T-like data

TLikeData generate_tlike_data(const Shape& shape, double s_hat, double r_hat, std::size_t n_boundary,
                              std::size_t n_radial) {
  if (!(r_hat > 0.0) || n_boundary < 3 || n_radial < 1) {
    throw Error(ErrorCode::InvalidArgument, "need r_hat > 0, n_boundary >= 3, n_radial >= 1");
  }
  TLikeData data;
  data.r_hat = r_hat;
  data.perimeter = shape.length();
  data.boundary.resize(n_boundary);
  for (std::size_t k = 0; k < n_boundary; ++k) {
    const double u = shape.length() * static_cast<double>(k) / static_cast<double>(n_boundary);
    const SignatureRow row = signature_row(shape, r_hat, s_hat + u);
    if (!row.g_r) throw Error(ErrorCode::TwoArcViolation, "boundary leg at s=" + format_real(s_hat + u));
    data.boundary[k] = {u, row.g, *row.g_r, *row.g_s_plus};
  }
  for (std::size_t k = 1; k <= n_radial; ++k) {
    const double r = r_hat * static_cast<double>(k) / static_cast<double>(n_radial);
    const SignatureRow row = signature_row(shape, r, s_hat);
    if (!row.g_r) throw Error(ErrorCode::TwoArcViolation, "radial leg at r=" + format_real(r));
    data.radial.push_back({r, row.g, *row.g_r, *row.g_s_plus});
  }
  return data;
}

namespace {

Point2 exit_direction(double g_r, double g_s, double r, bool entry) {
  std::pair<double, double> t;
  try {
    t = solve_entry_exit_angles(g_r, g_s, r);
  } catch (const Error& e) {
    throw Error(ErrorCode::AngleSolveFailed, e.what());
  }
  const double a = entry ? t.second : t.first;
  return {std::cos(a), std::sin(a)};
}

// Polyline with cumulative chord length measured from the seed.
struct Trace {
  std::vector<Point2> pts;
  std::vector<double> arc;
  std::size_t seed = 0;

  Point2 at(double u, std::size_t* segment = nullptr) const {
    const double target = arc[seed] + u;
    auto it = std::upper_bound(arc.begin(), arc.end(), target);
    std::size_t i = static_cast<std::size_t>(std::distance(arc.begin(), it));
    i = std::clamp<std::size_t>(i, 1, arc.size() - 1) - 1;
    if (segment) *segment = i;
    const double len = arc[i + 1] - arc[i];
    const double t = len > 0 ? (target - arc[i]) / len : 0.0;
    return pts[i] + (pts[i + 1] - pts[i]) * t;
  }
  double front() const { return arc.back() - arc[seed]; }
  double back() const { return arc[seed] - arc.front(); }
  void push(Point2 p) {
    arc.push_back(arc.back() + distance(pts.back(), p));
    pts.push_back(p);
  }
};

}  // namespace

std::vector<TaggedPoint> reconstruct_tlike(const TLikeData& data, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (data.radial.empty()) throw Error(ErrorCode::InvalidArgument, "T-like data has no radial leg");
  if (data.boundary.size() < 3) throw Error(ErrorCode::InvalidArgument, "T-like data has no boundary leg");
  const double r_hat = data.r_hat;
  const double L = data.perimeter;

  std::vector<TaggedPoint> out;
  std::vector<TLikeRow> radial = data.radial;
  std::sort(radial.begin(), radial.end(), [](const TLikeRow& a, const TLikeRow& b) { return a.coord < b.coord; });
  for (auto it = radial.rbegin(); it != radial.rend(); ++it) {
    out.push_back({exit_direction(it->g_r, it->g_s, it->coord, true) * it->coord, TLikeLeg::radial_entry, it->coord});
  }
  out.push_back({{0.0, 0.0}, TLikeLeg::seed, 0.0});
  for (const auto& row : radial) {
    out.push_back({exit_direction(row.g_r, row.g_s, row.coord, false) * row.coord, TLikeLeg::radial_exit, row.coord});
  }

  Trace trace;
  trace.pts.push_back(out.front().position);
  trace.arc.push_back(0.0);
  for (std::size_t i = 1; i < out.size(); ++i) trace.push(out[i].position);
  trace.seed = radial.size();

  const std::size_t nb = data.boundary.size();
  const double h = L / static_cast<double>(nb);
  auto boundary_at = [&](double u) {
    const double x = u / h;
    const auto k = static_cast<std::size_t>(std::floor(x));
    const double t = x - static_cast<double>(k);
    const TLikeRow& a = data.boundary[k % nb];
    const TLikeRow& b = data.boundary[(k + 1) % nb];
    return std::pair{a.g_r + t * (b.g_r - a.g_r), a.g_s + t * (b.g_s - a.g_s)};
  };
  auto check_segment = [&](std::size_t seg, double u) {
    if (trace.arc[seg + 1] - trace.arc[seg] > 10.0 * step) {
      throw Error(ErrorCode::FrameLoss, "data gap near s=" + format_real(u) + " exceeds 10 steps");
    }
  };

  const auto n_steps = static_cast<std::size_t>(std::floor((L - r_hat) / step));
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const double u = step * static_cast<double>(k);
    if (u >= trace.front()) throw Error(ErrorCode::FrameLoss, "reconstructed front too short at s=" + format_real(u));
    std::size_t seg = 0;
    const Point2 center = trace.at(u, &seg);
    check_segment(seg, u);
    // The entry point lies on the trace behind the center, at distance r_hat.
    // Its direction fixes the frame rotation without differentiating the trace.
    std::optional<Point2> anchor;
    for (std::size_t j = seg + 1; j-- > 0 && !anchor;) {
      const Point2 a = trace.pts[j];
      const Point2 b = j == seg ? center : trace.pts[j + 1];
      if (distance(a, center) < r_hat) continue;
      check_segment(j, u);
      const Point2 d = b - a, p = a - center;
      const double qa = dot(d, d), qb = dot(p, d), qc = dot(p, p) - r_hat * r_hat;
      const double disc = std::max(qb * qb - qa * qc, 0.0);
      const double t = qa > 0 ? std::clamp((-qb - std::sqrt(disc)) / qa, 0.0, 1.0) : 0.0;
      anchor = a + d * t;
    }
    if (!anchor) throw Error(ErrorCode::FrameLoss, "no trace point behind s=" + format_real(u) + " at distance r_hat");
    const auto [g_r, g_s] = boundary_at(u);
    std::pair<double, double> theta;
    try {
      theta = solve_entry_exit_angles(g_r, g_s, r_hat);
    } catch (const Error& e) {
      throw Error(ErrorCode::AngleSolveFailed, e.what());
    }
    const Point2 back = *anchor - center;
    const double rotation = std::atan2(back.y, back.x) - theta.second;
    const Point2 p = center + Point2{std::cos(rotation + theta.first), std::sin(rotation + theta.first)} * r_hat;
    trace.push(p);
    out.push_back({p, TLikeLeg::march, u});
  }
  return out;
}

Point2 tlike_truth(const Shape& shape, double s_hat, double r_hat, const TaggedPoint& p) {
  switch (p.leg) {
    case TLikeLeg::seed:
      return shape.point_at(s_hat).position;
    case TLikeLeg::radial_entry:
      return tgl_frame(shape, s_hat, p.coord, Side::plus).entry_point;
    case TLikeLeg::radial_exit:
      return tgl_frame(shape, s_hat, p.coord, Side::plus).exit_point;
    case TLikeLeg::march:
      return tgl_frame(shape, s_hat + p.coord, r_hat, Side::plus).exit_point;
  }
  return {};
}

// ---------------------------------------------------------------------------
// T-data CSV

void write_tlike_csv(std::ostream& out, const TLikeData& data) {
  out << "leg,coord,g,g_r,g_s\n";
  auto put = [&](const char* leg, const TLikeRow& row) {
    out << leg << ',' << format_real(row.coord) << ',' << format_real(row.g) << ',' << format_real(row.g_r) << ','
        << format_real(row.g_s) << '\n';
  };
  for (const auto& row : data.boundary) put("boundary", row);
  for (const auto& row : data.radial) put("radial", row);
}

TLikeData read_tlike_csv(std::istream& in) {
  std::string line;
  auto strip = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '\r' || c == ' ' || c == '\t'; }), s.end());
    return s;
  };
  if (!std::getline(in, line) || strip(line) != "leg,coord,g,g_r,g_s") {
    throw Error(ErrorCode::ParseError, "expected header leg,coord,g,g_r,g_s");
  }
  TLikeData data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string leg, field;
    std::getline(ss, leg, ',');
    std::array<double, 4> v{};
    for (double& x : v) {
      if (!std::getline(ss, field, ',')) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 5 fields");
      }
      char* end = nullptr;
      x = std::strtod(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(x)) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + field + "'");
      }
    }
    if (std::getline(ss, field, ',')) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 5 fields");
    }
    const TLikeRow row{v[0], v[1], v[2], v[3]};
    if (leg == "boundary") {
      data.boundary.push_back(row);
    } else if (leg == "radial") {
      data.radial.push_back(row);
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unknown leg '" + leg + "'");
    }
  }
  if (data.radial.empty()) throw Error(ErrorCode::InvalidArgument, "T-like data has no radial leg");
  if (data.boundary.size() < 3) throw Error(ErrorCode::InvalidArgument, "T-like data has too few boundary rows");
  std::sort(data.boundary.begin(), data.boundary.end(),
            [](const TLikeRow& a, const TLikeRow& b) { return a.coord < b.coord; });
  const double s0 = data.boundary.front().coord;
  for (auto& row : data.boundary) row.coord -= s0;
  const auto nb = static_cast<double>(data.boundary.size());
  data.perimeter = data.boundary.back().coord * nb / (nb - 1.0);
  for (const auto& row : data.radial) data.r_hat = std::max(data.r_hat, row.coord);
  return data;
}

}  // namespace areasig
