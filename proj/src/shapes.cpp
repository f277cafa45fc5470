#include "areasig/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "areasig/ellipse.hpp"

namespace areasig {

ShapeKind parse_shape_kind(const std::string& name) {
  if (name == "polygon_file" || name == "polygon") return ShapeKind::polygon_file;
  if (name == "circle") return ShapeKind::circle;
  if (name == "ellipse") return ShapeKind::ellipse;
  if (name == "star") return ShapeKind::star;
  if (name == "rounded_square" || name == "rounded-square") return ShapeKind::rounded_square;
  if (name == "regular_ngon" || name == "ngon") return ShapeKind::regular_ngon;
  throw Error(ErrorCode::InvalidArgument, "unknown shape kind '" + name + "'");
}

std::vector<Point2> star_vertices(double R, double a, int lobes, std::size_t n) {
  std::vector<Point2> v(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    const double rho = R + a * std::cos(lobes * t);
    v[j - 1] = {rho * std::cos(t), rho * std::sin(t)};
  }
  return v;
}

std::vector<Point2> regular_ngon_vertices(std::size_t n, double R) {
  std::vector<Point2> v(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    v[j - 1] = {R * std::cos(t), R * std::sin(t)};
  }
  return v;
}

std::vector<Point2> rounded_rectangle_vertices(double width, double height, double corner, std::size_t n) {
  if (!(corner > 0.0) || 2.0 * corner > std::min(width, height)) {
    throw Error(ErrorCode::InvalidArgument, "corner radius must be in (0, min(width, height) / 2]");
  }
  const double sx = width - 2 * corner, sy = height - 2 * corner;
  const double quarter = 0.5 * kPi * corner;
  // Pieces in CCW order starting at the middle of the right side.
  struct Piece {
    double len;
    Point2 start, dir;    // straight
    Point2 center;        // arc
    double phase;         // arc start angle
    bool arc;
  };
  const double hx = 0.5 * width, hy = 0.5 * height;
  const std::vector<Piece> pieces = {
      {0.5 * sy, {hx, 0}, {0, 1}, {}, 0, false},
      {quarter, {}, {}, {hx - corner, hy - corner}, 0.0, true},
      {sx, {hx - corner, hy}, {-1, 0}, {}, 0, false},
      {quarter, {}, {}, {-hx + corner, hy - corner}, 0.5 * kPi, true},
      {sy, {-hx, hy - corner}, {0, -1}, {}, 0, false},
      {quarter, {}, {}, {-hx + corner, -hy + corner}, kPi, true},
      {sx, {-hx + corner, -hy}, {1, 0}, {}, 0, false},
      {quarter, {}, {}, {hx - corner, -hy + corner}, 1.5 * kPi, true},
      {0.5 * sy, {hx, -hy + corner}, {0, 1}, {}, 0, false},
  };
  double total = 0.0;
  for (const auto& p : pieces) total += p.len;
  std::vector<Point2> v;
  v.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = total * static_cast<double>(k) / static_cast<double>(n);
    for (const auto& p : pieces) {
      if (s > p.len && &p != &pieces.back()) {
        s -= p.len;
        continue;
      }
      if (p.arc) {
        const double phi = p.phase + s / corner;
        v.push_back(p.center + Point2{corner * std::cos(phi), corner * std::sin(phi)});
      } else {
        v.push_back(p.start + p.dir * s);
      }
      break;
    }
  }
  return v;
}

Polygon make_polygon(const ShapeSpec& spec) {
  const std::size_t n = spec.resolution;
  if (spec.kind != ShapeKind::polygon_file && n < 3) {
    throw Error(ErrorCode::InvalidArgument, "resolution must be at least 3");
  }
  switch (spec.kind) {
    case ShapeKind::polygon_file: {
      std::ifstream in(spec.path);
      if (!in) throw Error(ErrorCode::IoError, "cannot open polygon file '" + spec.path + "'");
      return read_polygon_json(in);
    }
    case ShapeKind::circle:
      if (!(spec.radius > 0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
      return validate_polygon(regular_ngon_vertices(n, spec.radius));
    case ShapeKind::ellipse: {
      const EllipseShape e(spec.semi_a, spec.semi_b);
      return validate_polygon(e.sample_boundary(n));
    }
    case ShapeKind::star:
      if (!(spec.radius > 0) || !(std::abs(spec.amplitude) < spec.radius) || spec.lobes < 1) {
        throw Error(ErrorCode::InvalidArgument, "star needs radius > |amplitude| and lobes >= 1");
      }
      return validate_polygon(star_vertices(spec.radius, spec.amplitude, spec.lobes, n));
    case ShapeKind::rounded_square:
      return validate_polygon(rounded_rectangle_vertices(spec.width, spec.height, spec.corner, n));
    case ShapeKind::regular_ngon:
      if (spec.sides < 3 || !(spec.radius > 0)) throw Error(ErrorCode::InvalidArgument, "need sides >= 3");
      return validate_polygon(regular_ngon_vertices(spec.sides, spec.radius));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown shape kind");
}

std::unique_ptr<Shape> make_shape(const ShapeSpec& spec) {
  if (spec.kind == ShapeKind::circle) {
    if (!(spec.radius > 0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    return std::make_unique<EllipseShape>(EllipseShape::circle(spec.radius));
  }
  if (spec.kind == ShapeKind::ellipse) return std::make_unique<EllipseShape>(spec.semi_a, spec.semi_b);
  return std::make_unique<Polygon>(make_polygon(spec));
}

// ---------------------------------------------------------------------------
// SVG

namespace {

double nice_length(double target) {
  const double p = std::pow(10.0, std::floor(std::log10(target)));
  for (double m : {5.0, 2.0, 1.0})
    if (m * p <= target) return m * p;
  return p;
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<SvgPath>& paths) {
  double minx = INFINITY, miny = INFINITY, maxx = -INFINITY, maxy = -INFINITY;
  for (const auto& p : paths) {
    for (const Point2& q : p.points) {
      minx = std::min(minx, q.x);
      maxx = std::max(maxx, q.x);
      miny = std::min(miny, q.y);
      maxy = std::max(maxy, q.y);
    }
  }
  if (!std::isfinite(minx)) minx = miny = 0.0, maxx = maxy = 1.0;
  const double w = std::max(maxx - minx, 1e-12), h = std::max(maxy - miny, 1e-12);
  const double mx = 0.05 * w, my = 0.05 * h;
  // SVG y grows downward; flip so the boundary keeps its orientation on screen.
  const double vx = minx - mx, vy = -(maxy + my), vw = w + 2 * mx, vh = h + 2 * my;
  const double stroke = 0.004 * std::max(vw, vh);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_real(vx) << ' ' << format_real(vy)
      << ' ' << format_real(vw) << ' ' << format_real(vh) << "\">\n";
  for (const auto& p : paths) {
    out << "  <path";
    if (!p.label.empty()) out << " id=\"" << p.label << "\"";
    out << " fill=\"none\" stroke=\"" << p.color << "\" stroke-width=\"" << format_real(stroke) << "\"";
    if (p.dashed) out << " stroke-dasharray=\"" << format_real(4 * stroke) << ' ' << format_real(3 * stroke) << "\"";
    out << " d=\"";
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      out << (i ? " L" : "M") << format_real(p.points[i].x) << ' ' << format_real(-p.points[i].y);
    }
    if (p.closed) out << " Z";
    out << "\"/>\n";
  }
  const double bar = nice_length(0.25 * w);
  const double bx = minx, by = -(miny - 0.5 * my);
  out << "  <g id=\"scale\" stroke=\"black\" stroke-width=\"" << format_real(stroke) << "\">\n"
      << "    <line x1=\"" << format_real(bx) << "\" y1=\"" << format_real(by) << "\" x2=\"" << format_real(bx + bar)
      << "\" y2=\"" << format_real(by) << "\"/>\n"
      << "    <text x=\"" << format_real(bx + bar + stroke * 2) << "\" y=\"" << format_real(by)
      << "\" font-size=\"" << format_real(0.03 * std::max(vw, vh)) << "\" stroke=\"none\">" << format_real(bar)
      << "</text>\n  </g>\n</svg>\n";
}

}  // namespace areasig
