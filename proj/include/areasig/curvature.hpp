#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "areasig/geometry.hpp"
#include "areasig/invariant.hpp"

namespace areasig {

enum class CurvatureMethod { small_r_limit, exit_point };
enum class CurvaturePoint { center, s_plus, s_minus };

const char* to_string(CurvatureMethod m) noexcept;
const char* to_string(CurvaturePoint p) noexcept;

// Partials of g in r at fixed s, from 5-point central differences of the exact
// first partials g_r and g_s (plus side).
struct RadialPartials {
  double r = 0.0;
  double g_r = 0.0;
  double g_s = 0.0;
  double g_rr = 0.0;
  double g_rs = 0.0;
  double g_rrr = 0.0;
  double g_rrs = 0.0;
};

RadialPartials radial_partials(const Shape& shape, double s, double r, double rel_step = 1e-4);

struct CurvatureEstimate {
  double s = 0.0;  // arc length of the disk center
  double kappa = 0.0;
  CurvatureMethod method = CurvatureMethod::small_r_limit;
  CurvaturePoint which_point = CurvaturePoint::center;
  // small_r_limit: (r, d/dr[g / (pi r^2)]) per radius and the Neville table in r^2.
  std::vector<std::pair<double, double>> sequence;
  std::vector<std::vector<double>> richardson;
  // exit_point: the partials used and the arc length of the exit/entry point.
  std::optional<RadialPartials> partials;
  double point_s = 0.0;
  bool vertex_point = false;  // set by callers that record a rejected corner
};

// kappa = -3 pi lim_{r->0} d/dr [g / (pi r^2)], extrapolated in r^2 from
// descending radii (at least three). Throws VertexPoint at a corner.
CurvatureEstimate curvature_small_r(const Shape& shape, double s, const std::vector<double>& radii);

// Solves the second-order relations for (nu1, nu2), the angles between the
// boundary at the exit/entry points and the radial direction there.
// Throws SingularSystem when cos(theta1) and cos(theta2) coincide.
std::pair<double, double> recover_nu(double g_rr, double g_rs, const TGLFrame& frame);

// Curvatures at the exit point s+ and entry point s- from the third-order
// relations. The frame must carry nu1, nu2. Throws SingularSystem.
std::pair<double, double> exit_point_curvature(double g_rrr, double g_rrs, const TGLFrame& frame, double r);

// Whole pipeline at (s, r): returns the s+ and s- estimates.
std::pair<CurvatureEstimate, CurvatureEstimate> curvature_exit_points(const Shape& shape, double s, double r);

// CSV with header s,method,which_point,kappa.
void write_curvature_csv(std::ostream& out, const std::vector<CurvatureEstimate>& rows);

}  // namespace areasig
