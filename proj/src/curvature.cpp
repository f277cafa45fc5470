#include "areasig/curvature.hpp"

#include <array>
#include <cmath>
#include <tuple>
#include <ostream>
#include <string>

namespace areasig {

namespace {

// One-sided tangents that turn by more than this count as a corner.
constexpr double kCornerTurn = 0.1;
constexpr double kSingular = 1e-9;

struct FirstPartials {
  double g_r, g_s;
};

FirstPartials first_partials(const Shape& shape, const BoundaryPoint& bp, double r) {
  const TGLFrame f = tgl_frame(shape, bp.s, r, Side::plus);
  return {r * (f.theta2 - f.theta1), f.h2() - f.h1()};
}

// Solves -x + y = p, -cos(t1) x + cos(t2) y = q.
std::pair<double, double> solve_pair(double p, double q, double t1, double t2) {
  const double det = std::cos(t2) - std::cos(t1);
  if (!(std::abs(det) > kSingular)) {
    throw Error(ErrorCode::SingularSystem, "cos(theta1) and cos(theta2) coincide");
  }
  const double x = (q - std::cos(t2) * p) / det;
  return {x, p + x};
}

}  // namespace

const char* to_string(CurvatureMethod m) noexcept {
  return m == CurvatureMethod::small_r_limit ? "small_r_limit" : "exit_point";
}

const char* to_string(CurvaturePoint p) noexcept {
  switch (p) {
    case CurvaturePoint::center: return "center";
    case CurvaturePoint::s_plus: return "s_plus";
    case CurvaturePoint::s_minus: return "s_minus";
  }
  return "center";
}

RadialPartials radial_partials(const Shape& shape, double s, double r, double rel_step) {
  if (!(r > 0.0) || !(rel_step > 0.0 && rel_step < 0.25)) {
    throw Error(ErrorCode::InvalidArgument, "radius and step must be positive");
  }
  const BoundaryPoint bp = shape.point_at(s);
  const double h = rel_step * r;
  std::array<FirstPartials, 5> v{};
  for (int k = -2; k <= 2; ++k) v[k + 2] = first_partials(shape, bp, r + k * h);
  auto d1 = [&](double FirstPartials::*m) {
    return (-(v[4].*m) + 8.0 * (v[3].*m) - 8.0 * (v[1].*m) + (v[0].*m)) / (12.0 * h);
  };
  auto d2 = [&](double FirstPartials::*m) {
    return (-(v[4].*m) + 16.0 * (v[3].*m) - 30.0 * (v[2].*m) + 16.0 * (v[1].*m) - (v[0].*m)) / (12.0 * h * h);
  };
  RadialPartials p;
  p.r = r;
  p.g_r = v[2].g_r;
  p.g_s = v[2].g_s;
  p.g_rr = d1(&FirstPartials::g_r);
  p.g_rs = d1(&FirstPartials::g_s);
  p.g_rrr = d2(&FirstPartials::g_r);
  p.g_rrs = d2(&FirstPartials::g_s);
  return p;
}

CurvatureEstimate curvature_small_r(const Shape& shape, double s, const std::vector<double>& radii) {
  if (radii.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least three radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] < radii[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "radii must be positive and strictly descending");
    }
  }
  const BoundaryPoint bp = shape.point_at(s);
  const double turn = std::atan2(cross(bp.tangent_in, bp.tangent_out), dot(bp.tangent_in, bp.tangent_out));
  if (std::abs(turn) > kCornerTurn) {
    throw Error(ErrorCode::VertexPoint, "s=" + format_real(s) + " is a corner");
  }

  CurvatureEstimate est;
  est.s = bp.s;
  est.method = CurvatureMethod::small_r_limit;
  est.which_point = CurvaturePoint::center;
  est.point_s = bp.s;

  auto density = [&](double r) { return shape.disk_area(bp.position, r) / (kPi * r * r); };
  const std::size_t n = radii.size();
  std::vector<double> x(n);
  est.richardson.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radii[i];
    const double h = 1e-2 * r;
    const double d = (-density(r + 2 * h) + 8.0 * density(r + h) - 8.0 * density(r - h) + density(r - 2 * h)) /
                     (12.0 * h);
    est.sequence.emplace_back(r, d);
    x[i] = r * r;
    // Neville extrapolation to r^2 = 0.
    auto& row = est.richardson[i];
    row.push_back(d);
    for (std::size_t j = 1; j <= i; ++j) {
      const auto& prev = est.richardson[i - 1];
      const double xi = x[i], xj = x[i - j];
      row.push_back((xj * row[j - 1] - xi * prev[j - 1]) / (xj - xi));
    }
  }
  est.kappa = -3.0 * kPi * est.richardson.back().back();
  return est;
}

std::pair<double, double> recover_nu(double g_rr, double g_rs, const TGLFrame& frame) {
  const double t1 = frame.theta1, t2 = frame.theta2;
  const auto [a, b] = solve_pair(g_rr - (t2 - t1), g_rs - (std::sin(t2) - std::sin(t1)), t1, t2);
  return {std::atan(a), std::atan(b)};
}

std::pair<double, double> exit_point_curvature(double g_rrr, double g_rrs, const TGLFrame& frame, double r) {
  if (!std::isfinite(frame.nu1) || !std::isfinite(frame.nu2)) {
    throw Error(ErrorCode::InvalidArgument, "frame has no exit angles");
  }
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const double t1 = frame.theta1, t2 = frame.theta2;
  const double a = std::tan(frame.nu1), b = std::tan(frame.nu2);
  const double d1 = a / r, d2 = b / r;  // d theta / d r
  const double p = g_rrr - (d2 - d1);
  const double q = g_rrs - (std::cos(t2) * d2 - std::cos(t1) * d1 - std::sin(t2) * d2 * b + std::sin(t1) * d1 * a);
  const auto [x, y] = solve_pair(p, q, t1, t2);  // sec^2(nu) nu'
  const double c1 = std::cos(frame.nu1), c2 = std::cos(frame.nu2);
  const double nu1p = x * c1 * c1, nu2p = y * c2 * c2;
  // Tangent angle theta1 + nu1 at the exit point, with d sigma / d r = sec nu1; the
  // entry point moves backward along the curve as r grows.
  return {c1 * (d1 + nu1p), -c2 * (d2 + nu2p)};
}

std::pair<CurvatureEstimate, CurvatureEstimate> curvature_exit_points(const Shape& shape, double s, double r) {
  TGLFrame frame = tgl_frame(shape, s, r, Side::plus);
  const RadialPartials p = radial_partials(shape, s, r);
  std::tie(frame.nu1, frame.nu2) = recover_nu(p.g_rr, p.g_rs, frame);
  const auto [kp, km] = exit_point_curvature(p.g_rrr, p.g_rrs, frame, r);
  CurvatureEstimate plus, minus;
  plus.s = minus.s = frame.s;
  plus.method = minus.method = CurvatureMethod::exit_point;
  plus.partials = minus.partials = p;
  plus.which_point = CurvaturePoint::s_plus;
  plus.kappa = kp;
  plus.point_s = frame.s_plus;
  minus.which_point = CurvaturePoint::s_minus;
  minus.kappa = km;
  minus.point_s = frame.s_minus;
  return {plus, minus};
}

void write_curvature_csv(std::ostream& out, const std::vector<CurvatureEstimate>& rows) {
  out << "s,method,which_point,kappa\n";
  for (const auto& e : rows) {
    out << format_real(e.s) << ',' << to_string(e.method) << ',' << to_string(e.which_point) << ','
        << (e.vertex_point ? std::string("VertexPoint") : format_real(e.kappa)) << '\n';
  }
}

}  // namespace areasig
