#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "areasig/error.hpp"

namespace areasig {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  constexpr Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  constexpr Point2 operator-() const { return {-x, -y}; }
  constexpr Point2 operator*(double k) const { return {x * k, y * k}; }
  constexpr Point2 operator/(double k) const { return {x / k, y / k}; }
  constexpr Point2& operator+=(Point2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Point2&) const = default;
};

constexpr Point2 operator*(double k, Point2 p) { return {k * p.x, k * p.y}; }
constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 normalized(Point2 a) { return a / norm(a); }
// Counterclockwise quarter turn: the interior side of a CCW boundary.
constexpr Point2 left_normal(Point2 t) { return {-t.y, t.x}; }
inline Point2 rotated(Point2 p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double angle);

struct BoundaryPoint {
  double s = 0.0;
  Point2 position;
  Point2 tangent_in;   // one-sided derivative from the left (s' -> s-)
  Point2 tangent_out;  // one-sided derivative from the right (s' -> s+)

  bool is_corner(double tol = 1e-12) const { return norm(tangent_in - tangent_out) > tol; }
};

// A point where the boundary meets a circle.
struct Crossing {
  double s = 0.0;       // arc length of the boundary point
  double angle = 0.0;   // polar angle around the circle center, world frame
  bool transverse = false;
  bool exiting = false;  // boundary leaves the disk here (meaningful when transverse)
  Point2 position;
};

struct RigidTransform {
  double angle = 0.0;
  Point2 translation;

  Point2 apply(Point2 p) const { return rotated(p, angle) + translation; }
};

// A closed planar boundary traversed counterclockwise and parameterized by arc
// length on [0, length()).
class Shape {
 public:
  virtual ~Shape() = default;

  virtual double length() const = 0;
  virtual double area() const = 0;
  virtual double diameter() const = 0;
  virtual BoundaryPoint point_at(double s) const = 0;
  // All boundary points at distance r from center, sorted by s.
  virtual std::vector<Crossing> circle_crossings(Point2 center, double r) const = 0;
  // Area of the region inside this boundary intersected with the closed disk.
  virtual double disk_area(Point2 center, double r) const = 0;
  // Dense polyline approximation; polygons return their own vertices.
  virtual std::vector<Point2> sample_boundary(std::size_t min_points) const = 0;

  double wrap_s(double s) const;
};

// Simple closed polygon, counterclockwise, with cached arc-length table.
class Polygon final : public Shape {
 public:
  Polygon() = default;

  // Builds a polygon without any checks. Caller guarantees the invariants.
  static Polygon from_trusted(std::vector<Point2> ccw_vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  // Arc length at which vertex i sits.
  double vertex_s(std::size_t i) const { return cumulative_[i]; }
  double edge_length(std::size_t i) const { return cumulative_[i + 1] - cumulative_[i]; }
  Point2 edge_direction(std::size_t i) const;
  // Index of the edge that contains arc length s (s already wrapped).
  std::size_t edge_at(double s) const;
  // Index of the vertex within 1e-12*L of s, or size() if none.
  std::size_t vertex_near(double s) const;

  double length() const override { return length_; }
  double area() const override { return area_; }
  double diameter() const override { return diameter_; }
  BoundaryPoint point_at(double s) const override;
  std::vector<Crossing> circle_crossings(Point2 center, double r) const override;
  double disk_area(Point2 center, double r) const override;
  std::vector<Point2> sample_boundary(std::size_t min_points) const override;

  // Vertex coordinates laid out for the disk-area kernels: n+1 entries, closed.
  std::span<const double> closed_xs() const { return xs_; }
  std::span<const double> closed_ys() const { return ys_; }

 private:
  std::vector<Point2> vertices_;
  std::vector<double> cumulative_;  // n+1 entries, cumulative_[n] == length_
  std::vector<double> xs_, ys_;
  double length_ = 0.0;
  double area_ = 0.0;
  double diameter_ = 0.0;
};

double signed_area(std::span<const Point2> vertices);

// Validates a raw vertex loop and returns a CCW polygon. Consecutive duplicate
// vertices are merged; clockwise input is reversed.
// Throws Error{NotSimple} or Error{Degenerate}.
Polygon validate_polygon(std::vector<Point2> raw);

// Index pair of the first pair of intersecting edges, if any.
std::pair<std::size_t, std::size_t> find_self_intersection(std::span<const Point2> vertices);
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

BoundaryPoint point_at(const Polygon& polygon, double s);
std::vector<Crossing> circle_crossings(const Polygon& polygon, Point2 center, double r);
double disk_polygon_area(const Polygon& polygon, Point2 center, double r);

struct Alignment {
  RigidTransform transform;  // maps the first polygon onto the second
  double residual = 0.0;     // root-mean-square vertex distance
  std::size_t shift = 0;     // vertex i of a corresponds to vertex (i+shift) of b
};

// Least-squares rotation + translation for fixed point correspondences.
Alignment fit_rigid(std::span<const Point2> from, std::span<const Point2> to);

// Best rigid motion over all cyclic vertex relabelings. Throws VertexCountMismatch.
Alignment rigid_align(const Polygon& a, const Polygon& b);
Alignment rigid_align(std::span<const Point2> a, std::span<const Point2> b);

// Polygon file: {"vertices": [[x, y], ...]}.
Polygon read_polygon_json(std::istream& in);
void write_polygon_json(std::ostream& out, std::span<const Point2> vertices);
std::vector<Point2> parse_vertices_json(const std::string& text);

// Formats with 17 significant digits.
std::string format_real(double v);

}  // namespace areasig
