#include "areasig/invariant.hpp"

#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "areasig/parallel.hpp"

namespace areasig {

namespace {

struct CrossingPair {
  Crossing exit;
  Crossing entry;
};

std::optional<CrossingPair> two_arc_pair(const std::vector<Crossing>& xs) {
  if (xs.size() != 2 || !xs[0].transverse || !xs[1].transverse) return std::nullopt;
  if (xs[0].exiting == xs[1].exiting) return std::nullopt;
  return xs[0].exiting ? CrossingPair{xs[0], xs[1]} : CrossingPair{xs[1], xs[0]};
}

TGLFrame frame_from_pair(const BoundaryPoint& bp, double r, Side side, const CrossingPair& p) {
  TGLFrame f;
  f.s = bp.s;
  f.r = r;
  f.side = side;
  f.origin = bp.position;
  f.tangent = side == Side::minus ? bp.tangent_in : bp.tangent_out;
  const Point2 n = f.normal();
  auto polar = [&](Point2 q) {
    const Point2 d = q - f.origin;
    return std::atan2(dot(d, n), dot(d, f.tangent));
  };
  f.theta1 = polar(p.exit.position);
  f.theta2 = f.theta1 + wrap_two_pi(polar(p.entry.position) - f.theta1);
  f.s_plus = p.exit.s;
  f.s_minus = p.entry.s;
  f.exit_point = p.exit.position;
  f.entry_point = p.entry.position;
  return f;
}

}  // namespace

std::optional<TGLFrame> try_tgl_frame(const Shape& shape, double s, double r, Side side) {
  const BoundaryPoint bp = shape.point_at(s);
  const auto pair = two_arc_pair(shape.circle_crossings(bp.position, r));
  if (!pair) return std::nullopt;
  return frame_from_pair(bp, r, side, *pair);
}

TGLFrame tgl_frame(const Shape& shape, double s, double r, Side side) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  auto f = try_tgl_frame(shape, s, r, side);
  if (!f) {
    throw Error(ErrorCode::TwoArcViolation,
                "circle at s=" + format_real(s) + " does not cut the boundary in two arcs");
  }
  return *f;
}

double derivative_r(const Shape& shape, double s, double r) {
  const TGLFrame f = tgl_frame(shape, s, r, Side::plus);
  return r * (f.theta2 - f.theta1);
}

SidedDerivative derivative_s(const Shape& shape, double s, double r) {
  const TGLFrame plus = tgl_frame(shape, s, r, Side::plus);
  const BoundaryPoint bp = shape.point_at(s);
  const Point2 chord = plus.entry_point - plus.exit_point;
  return {dot(chord, left_normal(bp.tangent_in)), dot(chord, left_normal(bp.tangent_out))};
}

std::pair<double, double> solve_entry_exit_angles(double g_r, double g_s, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const double delta = g_r / r;
  if (!(delta > 0.0 && delta < kTwoPi) || !std::isfinite(g_s)) {
    throw Error(ErrorCode::NoSolution, "g_r outside (0, 2 pi r)");
  }
  const double target = g_s / r;
  auto f = [&](double t1) { return std::sin(t1 + delta) - std::sin(t1); };
  // f decreases strictly while the arc midpoint t1 + delta/2 stays in (0, pi).
  double lo = -0.5 * delta, hi = kPi - 0.5 * delta;
  const double amplitude = 2.0 * std::sin(0.5 * delta);
  if (!(std::abs(target) < amplitude)) {
    throw Error(ErrorCode::NoSolution, "height difference incompatible with the arc length");
  }
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > target ? lo : hi) = mid;
  }
  const double t1 = 0.5 * (lo + hi);
  return {t1, t1 + delta};
}

SignatureRow signature_row(const Shape& shape, double r, double s) {
  SignatureRow row;
  const BoundaryPoint bp = shape.point_at(s);
  row.s = bp.s;
  row.g = shape.disk_area(bp.position, r);
  const auto pair = two_arc_pair(shape.circle_crossings(bp.position, r));
  if (pair) {
    const TGLFrame f = frame_from_pair(bp, r, Side::plus, *pair);
    row.g_r = r * (f.theta2 - f.theta1);
    const Point2 chord = pair->entry.position - pair->exit.position;
    row.g_s_minus = dot(chord, left_normal(bp.tangent_in));
    row.g_s_plus = dot(chord, left_normal(bp.tangent_out));
  }
  return row;
}

Signature signature(const Shape& shape, double r, const std::vector<double>& samples) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  Signature sig;
  sig.r = r;
  sig.perimeter = shape.length();
  sig.rows.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) { sig.rows[i] = signature_row(shape, r, samples[i]); });
  return sig;
}

Signature signature_uniform(const Shape& shape, double r, std::size_t n) {
  std::vector<double> samples(n);
  for (std::size_t k = 0; k < n; ++k) {
    samples[k] = shape.length() * static_cast<double>(k) / static_cast<double>(n);
  }
  return signature(shape, r, samples);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

void put_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_real(*v);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r' && ch != ' ' && ch != '\t') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_real(const std::string& text, std::size_t line_no) {
  if (text.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": missing number");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& text, std::size_t line_no) {
  if (text.empty()) return std::nullopt;
  return parse_real(text, line_no);
}

}  // namespace

void write_signature_csv(std::ostream& out, const Signature& sig) {
  out << "s,g,g_r,g_s_minus,g_s_plus\n";
  for (const SignatureRow& row : sig.rows) {
    out << format_real(row.s) << ',' << format_real(row.g) << ',';
    put_optional(out, row.g_r);
    out << ',';
    put_optional(out, row.g_s_minus);
    out << ',';
    put_optional(out, row.g_s_plus);
    out << '\n';
  }
}

Signature read_signature_csv(std::istream& in, double r) {
  Signature sig;
  sig.r = r;
  std::string line;
  if (!std::getline(in, line) || split_fields(line) != std::vector<std::string>{"s", "g", "g_r", "g_s_minus", "g_s_plus"}) {
    throw Error(ErrorCode::ParseError, "expected header s,g,g_r,g_s_minus,g_s_plus");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (split_fields(line) == std::vector<std::string>{""}) continue;
    const auto f = split_fields(line);
    if (f.size() != 5) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 5 fields");
    SignatureRow row;
    row.s = parse_real(f[0], line_no);
    row.g = parse_real(f[1], line_no);
    row.g_r = parse_optional(f[2], line_no);
    row.g_s_minus = parse_optional(f[3], line_no);
    row.g_s_plus = parse_optional(f[4], line_no);
    if (!sig.rows.empty() && !(row.s > sig.rows.back().s)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": s must increase");
    }
    sig.rows.push_back(row);
  }
  if (sig.rows.empty()) throw Error(ErrorCode::ParseError, "no signature rows");
  const std::size_t n = sig.rows.size();
  if (n >= 2) {
    const double h = (sig.rows.back().s - sig.rows.front().s) / static_cast<double>(n - 1);
    bool uniform = true;
    for (std::size_t i = 1; i < n && uniform; ++i) {
      const double expected = sig.rows[0].s + h * static_cast<double>(i);
      uniform = std::abs(sig.rows[i].s - expected) <= 1e-9 * h * static_cast<double>(n);
    }
    if (uniform) sig.perimeter = h * static_cast<double>(n);
  }
  return sig;
}

}  // namespace areasig
