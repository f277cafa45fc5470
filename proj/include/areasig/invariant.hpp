#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "areasig/geometry.hpp"

namespace areasig {

// Which one-sided tangent defines the frame at a boundary point.
enum class Side { minus, plus };

// Local frame at gamma(s): x-axis along the one-sided tangent, y-axis toward the
// interior. theta1 is the polar angle of the exit point gamma(s_plus) and
// theta2 that of the entry point gamma(s_minus), with 0 < theta2 - theta1 < 2pi.
struct TGLFrame {
  double s = 0.0;
  double r = 0.0;
  Side side = Side::plus;
  Point2 origin;
  Point2 tangent;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double s_plus = 0.0;
  double s_minus = 0.0;
  Point2 exit_point;
  Point2 entry_point;
  double nu1 = std::numeric_limits<double>::quiet_NaN();
  double nu2 = std::numeric_limits<double>::quiet_NaN();

  double h1() const { return r * std::sin(theta1); }
  double h2() const { return r * std::sin(theta2); }
  Point2 normal() const { return left_normal(tangent); }
};

// Frame at (s, r), or nullopt when the circle does not cut the boundary in
// exactly two transverse points (one exit, one entry).
std::optional<TGLFrame> try_tgl_frame(const Shape& shape, double s, double r, Side side);
// Same, throwing TwoArcViolation.
TGLFrame tgl_frame(const Shape& shape, double s, double r, Side side);

// Length of the circle arc inside the shape: r (theta2 - theta1).
double derivative_r(const Shape& shape, double s, double r);

struct SidedDerivative {
  double minus = 0.0;
  double plus = 0.0;
};

// One-sided s-derivatives h2 - h1 in the tangent_in and tangent_out frames.
SidedDerivative derivative_s(const Shape& shape, double s, double r);

// Inverts (g_r, g_s) at radius r to (theta1, theta2) with theta2 - theta1 = g_r / r,
// r (sin theta2 - sin theta1) = g_s, and the arc midpoint in the upper half plane.
// Throws NoSolution when no such pair exists.
std::pair<double, double> solve_entry_exit_angles(double g_r, double g_s, double r);

struct SignatureRow {
  double s = 0.0;
  double g = 0.0;
  std::optional<double> g_r;
  std::optional<double> g_s_minus;
  std::optional<double> g_s_plus;
};

struct Signature {
  double r = 0.0;
  double perimeter = 0.0;  // 0 when unknown
  std::vector<SignatureRow> rows;
};

// Row at one arc length, with derivative columns when the frame is defined.
SignatureRow signature_row(const Shape& shape, double r, double s);
Signature signature(const Shape& shape, double r, const std::vector<double>& samples);
// n rows at s = k L / n.
Signature signature_uniform(const Shape& shape, double r, std::size_t n);

// CSV with header s,g,g_r,g_s_minus,g_s_plus. The reader infers the perimeter as
// n * spacing when the rows are uniformly spaced.
void write_signature_csv(std::ostream& out, const Signature& sig);
Signature read_signature_csv(std::istream& in, double r);

}  // namespace areasig
