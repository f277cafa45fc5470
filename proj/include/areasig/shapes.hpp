#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "areasig/geometry.hpp"

namespace areasig {

enum class ShapeKind { polygon_file, circle, ellipse, star, rounded_square, regular_ngon };

ShapeKind parse_shape_kind(const std::string& name);

// Test corpus description. Only the fields relevant to `kind` are read.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::circle;
  std::string path;              // polygon_file
  double radius = 1.0;           // circle, star base radius, regular_ngon circumradius
  double semi_a = 2.0;           // ellipse
  double semi_b = 1.0;           // ellipse
  double amplitude = 0.3;        // star lobe amplitude
  int lobes = 4;                 // star
  double width = 1.0;            // rounded_square
  double height = 1.0;           // rounded_square
  double corner = 0.25;          // rounded_square corner radius
  std::size_t sides = 6;         // regular_ngon
  std::size_t resolution = 512;  // vertices for parametric kinds
};

// Polyline for any kind (parametric kinds sampled at `resolution` vertices).
Polygon make_polygon(const ShapeSpec& spec);

// Exact analytic shape for circle and ellipse, polygon otherwise.
std::unique_ptr<Shape> make_shape(const ShapeSpec& spec);

// (R + a cos(k t)) (cos t, sin t) at t = 2 pi j / n, j = 1..n.
std::vector<Point2> star_vertices(double R, double a, int lobes, std::size_t n);
// Regular n-gon with circumradius R, first vertex at angle 2 pi / n.
std::vector<Point2> regular_ngon_vertices(std::size_t n, double R);
// Rectangle centered at the origin with circular corners, equal arc-length spacing.
std::vector<Point2> rounded_rectangle_vertices(double width, double height, double corner, std::size_t n);

struct SvgPath {
  std::vector<Point2> points;
  bool dashed = false;
  std::string color = "#1f4e9c";
  std::string label;
  bool closed = true;
};

// One <path> per entry; viewBox is the union bounding box plus a 5% margin,
// with a scale bar in the lower left corner.
void write_svg(std::ostream& out, const std::vector<SvgPath>& paths);

}  // namespace areasig
