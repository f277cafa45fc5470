#include "areasig/graphlike.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "areasig/parallel.hpp"

namespace areasig {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ArcEnds {
  double s_minus;
  double s_plus;
  std::size_t count;
};

std::optional<ArcEnds> two_arc_ends(const std::vector<Crossing>& xs) {
  if (xs.size() != 2 || !xs[0].transverse || !xs[1].transverse || xs[0].exiting == xs[1].exiting) {
    return std::nullopt;
  }
  const Crossing& exit = xs[0].exiting ? xs[0] : xs[1];
  const Crossing& entry = xs[0].exiting ? xs[1] : xs[0];
  return ArcEnds{entry.s, exit.s, 2};
}

void finish(TCGLReport& report) {
  report.pass = true;
  for (const auto& smp : report.samples) {
    const bool ok = report.tcgl_checked ? smp.tcgl_ok : smp.two_arc;
    if (!ok) {
      report.pass = false;
      if (!report.first_failure) report.first_failure = smp.s;
    }
  }
}

std::string json_real(double v) { return std::isfinite(v) ? format_real(v) : "null"; }

}  // namespace

std::vector<TCGLSample> TCGLReport::failures() const {
  std::vector<TCGLSample> out;
  for (const auto& smp : samples) {
    if (!(tcgl_checked ? smp.tcgl_ok : smp.two_arc)) out.push_back(smp);
  }
  return out;
}

std::vector<double> tcgl_sample_points(const Polygon& polygon, std::size_t n_samples) {
  const std::size_t n = polygon.size();
  if (n_samples < n) {
    throw Error(ErrorCode::InvalidArgument, "sample count below the vertex count");
  }
  std::vector<double> s;
  s.reserve(n_samples);
  for (std::size_t i = 0; i < n; ++i) s.push_back(polygon.vertex_s(i));
  const std::size_t fill = n_samples - n;
  const double L = polygon.length();
  for (std::size_t k = 0; k < fill; ++k) s.push_back(L * (static_cast<double>(k) + 0.5) / static_cast<double>(fill));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

double tcgl_margin(const Polygon& polygon, double s, double r) {
  const BoundaryPoint bp = polygon.point_at(s);
  const auto ends = two_arc_ends(polygon.circle_crossings(bp.position, r));
  if (!ends) return kNaN;
  const double L = polygon.length();
  const double tol = 1e-12 * L;
  const double span = polygon.wrap_s(ends->s_plus - ends->s_minus);
  std::size_t e = polygon.edge_at(polygon.wrap_s(ends->s_minus));
  double covered = polygon.vertex_s(e + 1) - polygon.wrap_s(ends->s_minus);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t guard = 0; guard <= polygon.size(); ++guard) {
    const Point2 d = polygon.edge_direction(e);
    margin = std::min({margin, dot(bp.tangent_in, d), dot(bp.tangent_out, d)});
    if (covered >= span - tol) break;
    e = (e + 1) % polygon.size();
    covered += polygon.edge_length(e);
  }
  return margin;
}

TCGLReport check_tcgl(const Polygon& polygon, double r, std::size_t n_samples) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  TCGLReport report;
  report.radius = r;
  report.tcgl_checked = true;
  const std::vector<double> pts = tcgl_sample_points(polygon, n_samples);
  report.samples.resize(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    TCGLSample& smp = report.samples[i];
    smp.s = pts[i];
    const auto xs = polygon.circle_crossings(polygon.point_at(pts[i]).position, r);
    smp.crossing_count = xs.size();
    smp.two_arc = two_arc_ends(xs).has_value();
    smp.worst_margin = smp.two_arc ? tcgl_margin(polygon, pts[i], r) : kNaN;
    smp.tcgl_ok = smp.two_arc && smp.worst_margin > 0.0;
  });
  finish(report);
  return report;
}

TCGLReport check_two_arc(const Shape& shape, double r, std::size_t n_samples) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  std::vector<double> pts;
  if (const auto* poly = dynamic_cast<const Polygon*>(&shape)) {
    pts = tcgl_sample_points(*poly, std::max(n_samples, poly->size()));
  } else {
    for (std::size_t k = 0; k < n_samples; ++k) {
      pts.push_back(shape.length() * static_cast<double>(k) / static_cast<double>(n_samples));
    }
  }
  TCGLReport report;
  report.radius = r;
  report.samples.resize(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    TCGLSample& smp = report.samples[i];
    smp.s = pts[i];
    const auto xs = shape.circle_crossings(shape.point_at(pts[i]).position, r);
    smp.crossing_count = xs.size();
    smp.two_arc = two_arc_ends(xs).has_value();
    smp.worst_margin = kNaN;
  });
  finish(report);
  return report;
}

Polygon tcgl_polygon_approximation(const Shape& source, double r, double epsilon) {
  if (!(r > 0.0) || !(epsilon > 0.0) || !(epsilon < r)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < epsilon < r");
  }
  const double L = source.length();
  TCGLReport src;
  if (const auto* poly = dynamic_cast<const Polygon*>(&source)) {
    src = check_tcgl(*poly, r, std::max<std::size_t>(poly->size(), 512));
  } else {
    const auto dense_n = static_cast<std::size_t>(std::max(4096.0, std::ceil(64.0 * L / r)));
    src = check_tcgl(validate_polygon(source.sample_boundary(dense_n)), r, dense_n);
  }
  if (!src.pass) {
    throw Error(ErrorCode::NotTCGLSource,
                "source fails the tangent-cone check at s=" + format_real(src.first_failure.value_or(0.0)));
  }
  const auto n = static_cast<std::size_t>(std::ceil(L / (epsilon / 3.0)));
  std::vector<Point2> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = source.point_at(L * static_cast<double>(k) / static_cast<double>(n)).position;
  }
  return validate_polygon(std::move(v));
}

void write_tcgl_report_json(std::ostream& out, const TCGLReport& report) {
  out << "{\"radius\": " << format_real(report.radius) << ", \"pass\": " << (report.pass ? "true" : "false")
      << ", \"failures\": [";
  bool first = true;
  for (const auto& f : report.failures()) {
    out << (first ? "" : ", ") << "{\"s\": " << format_real(f.s) << ", \"crossing_count\": " << f.crossing_count
        << ", \"margin\": " << json_real(f.worst_margin) << '}';
    first = false;
  }
  out << "]}\n";
}

}  // namespace areasig
