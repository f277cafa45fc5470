#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "areasig/geometry.hpp"

namespace areasig {

struct TCGLSample {
  double s = 0.0;
  std::size_t crossing_count = 0;
  bool two_arc = false;   // exactly two transverse crossings, one exit and one entry
  bool tcgl_ok = false;   // two_arc and worst_margin > 0 (unset by check_two_arc)
  double worst_margin = 0.0;  // NaN when undefined
};

struct TCGLReport {
  double radius = 0.0;
  bool pass = false;
  bool tcgl_checked = false;  // false for two-arc-only reports
  std::vector<TCGLSample> samples;
  std::optional<double> first_failure;

  std::vector<TCGLSample> failures() const;
};

// All vertex arc lengths plus a uniform fill, n_samples in total (at least).
std::vector<double> tcgl_sample_points(const Polygon& polygon, std::size_t n_samples);

// Smallest inner product between a tangent-cone generator at gamma(s) and an
// edge direction along the boundary arc inside D(gamma(s), r). NaN when the
// circle does not split the boundary into two arcs.
double tcgl_margin(const Polygon& polygon, double s, double r);

// Tangent-cone graph-like check at every sample. Samples run concurrently.
TCGLReport check_tcgl(const Polygon& polygon, double r, std::size_t n_samples);

// Two-arc property only: exactly two transverse crossings at every sample.
TCGLReport check_two_arc(const Shape& shape, double r, std::size_t n_samples);

// Polygon inscribed in the source with arc-length spacing at most epsilon/3.
// The source must pass check_tcgl at r (smooth sources are checked through a
// dense polyline); throws NotTCGLSource otherwise.
Polygon tcgl_polygon_approximation(const Shape& source, double r, double epsilon);

// {"radius": r, "pass": bool, "failures": [{"s", "crossing_count", "margin"}]}
void write_tcgl_report_json(std::ostream& out, const TCGLReport& report);

}  // namespace areasig
