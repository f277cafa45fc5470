#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "areasig/geometry.hpp"
#include "areasig/invariant.hpp"

namespace areasig {

// Evaluates a signature row at any arc length. Stands for "g and its first
// partials are known for every s", which lets vertex positions be refined
// beyond the grid. Rows within 1e-12 L of a vertex should report that vertex.
using RowOracle = std::function<SignatureRow(double s)>;

RowOracle make_row_oracle(const Shape& shape, double r);

struct DetectedVertex {
  double s = 0.0;
  SignatureRow row;  // one-sided values at the vertex
};

// Vertices are the arc lengths where g_s jumps. Needs derivative columns on a
// uniform grid and a known perimeter. Throws NoVerticesDetected.
std::vector<DetectedVertex> detect_vertices(const Signature& sig, const RowOracle& oracle = {});

struct ReconstructedPolygon {
  std::vector<double> vertex_s;
  std::vector<double> side_lengths;     // side i runs from vertex i to vertex i+1
  std::vector<double> turning_angles;   // psi at each vertex
  std::vector<double> interior_angles;  // pi - psi
  std::vector<Point2> vertices;         // first at the origin, first side along +x
  double closure_residual = 0.0;
  double psi_crosscheck = 0.0;  // max |(theta1 - phi1) - (theta2 - phi2)|
};

// Exact polygon reconstruction from fixed-radius g, g_r and one-sided g_s.
// Throws NoVerticesDetected, TwoArcViolation, AngleSolveFailed, ClosureFailure.
ReconstructedPolygon reconstruct_polygon(const Signature& sig, const RowOracle& oracle = {});

struct TLikeRow {
  double coord = 0.0;  // s for the boundary leg, r for the radial leg
  double g = 0.0;
  double g_r = 0.0;
  double g_s = 0.0;
};

// g and first partials along the whole boundary at r_hat (s measured from
// s_hat) and along 0 < r <= r_hat at s_hat.
struct TLikeData {
  double r_hat = 0.0;
  double perimeter = 0.0;
  std::vector<TLikeRow> boundary;
  std::vector<TLikeRow> radial;
};

// Samples T-like data from a shape: n_boundary rows at uniform spacing from
// s_hat, n_radial rows at r = r_hat k / n_radial. Uses the plus-side g_s.
TLikeData generate_tlike_data(const Shape& shape, double s_hat, double r_hat, std::size_t n_boundary,
                              std::size_t n_radial);

enum class TLikeLeg { radial_entry, seed, radial_exit, march };

// Reconstructed point with the data coordinate that produced it.
struct TaggedPoint {
  Point2 position;
  TLikeLeg leg = TLikeLeg::seed;
  double coord = 0.0;  // r for radial points, center s (from s_hat) for marching
};

// Seeds gamma(s_hat) = (0,0) with tangent (1,0), traces the curve inside the
// seed disk from the radial leg, then marches the exit point forward. Throws
// InvalidArgument, TwoArcViolation, AngleSolveFailed or FrameLoss.
std::vector<TaggedPoint> reconstruct_tlike(const TLikeData& data, double step);

// Ground-truth position of a tagged point on the shape that generated the data.
Point2 tlike_truth(const Shape& shape, double s_hat, double r_hat, const TaggedPoint& p);

// CSV with header leg,coord,g,g_r,g_s; leg is "boundary" or "radial".
void write_tlike_csv(std::ostream& out, const TLikeData& data);
TLikeData read_tlike_csv(std::istream& in);

}  // namespace areasig
