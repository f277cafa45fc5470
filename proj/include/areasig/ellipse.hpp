#pragma once

#include <algorithm>
#include <vector>

#include "areasig/geometry.hpp"

namespace areasig {

// Analytic ellipse x = a cos t, y = b sin t, rotated and translated, traversed
// counterclockwise from t = 0 and parameterized by arc length. Disk areas are
// exact (Green's theorem over the ellipse arcs and circle arcs of the
// intersection boundary), so the ellipse serves as a smooth ground truth.
class EllipseShape final : public Shape {
 public:
  EllipseShape(double a, double b, Point2 center = {}, double rotation = 0.0);
  static EllipseShape circle(double radius, Point2 center = {}) {
    return EllipseShape(radius, radius, center);
  }

  double semi_a() const { return a_; }
  double semi_b() const { return b_; }
  Point2 center() const { return center_; }
  double rotation() const { return rotation_; }

  // Curve parameter t in [0, 2pi) for arc length s, and its inverse.
  double param_at(double s) const;
  double arc_at(double t) const;
  Point2 position_at_param(double t) const;
  double curvature_at(double s) const;

  double length() const override { return length_; }
  double area() const override { return kPi * a_ * b_; }
  double diameter() const override { return 2.0 * std::max(a_, b_); }
  BoundaryPoint point_at(double s) const override;
  std::vector<Crossing> circle_crossings(Point2 center, double r) const override;
  double disk_area(Point2 center, double r) const override;
  std::vector<Point2> sample_boundary(std::size_t min_points) const override;

 private:
  struct LocalRoot {
    double t;
    bool exiting;
  };

  double speed(double t) const;
  double integrate_speed(double t0, double t1) const;
  Point2 to_local(Point2 p) const;
  Point2 to_world(Point2 p) const;
  std::vector<LocalRoot> local_roots(Point2 local_center, double r) const;

  double a_, b_;
  Point2 center_;
  double rotation_;
  std::vector<double> panel_s_;  // arc length at each panel boundary
  double length_ = 0.0;
};

}  // namespace areasig
