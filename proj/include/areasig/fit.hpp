#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "areasig/geometry.hpp"
#include "areasig/invariant.hpp"

namespace areasig {

// Closed N-gon with vertex k = 1..N at
//   x = sum_j a1j cos(2 pi j k/N) + a2j sin(2 pi j k/N)
//   y = sum_j a3j cos(2 pi j k/N) + a4j sin(2 pi j k/N),   j = 0..m.
// j = 0 is the constant center; harmonics 1..m are the free variables.
struct FourierShape {
  int m = 1;
  int N = 3;
  std::vector<std::array<double, 4>> harmonics;  // m + 1 entries

  static FourierShape circle(double radius, int N);
  // Same polygon with harmonics up to new_m (zero-padded).
  FourierShape padded(int new_m) const;

  std::vector<double> variables() const;  // 4m values, harmonics 1..m
  FourierShape with_variables(const std::vector<double>& x) const;
};

std::vector<Point2> fourier_vertices(const FourierShape& shape);
// Throws NotSimple or Degenerate for an infeasible coefficient vector.
Polygon fourier_to_polygon(const FourierShape& shape);

// Sum of squared differences between the candidate's g at its N vertices and
// the target rows (row k-1 pairs with vertex k). +infinity when infeasible.
double objective(const FourierShape& shape, const Signature& target);

// Signature at the vertices of a polygon, one row per vertex in order.
Signature vertex_signature(const Polygon& polygon, double r);

// Regular N-gon (N = target row count) whose vertex g equals the target's
// mean g. Throws NoSolution when the mean is out of reach.
FourierShape best_fit_circle(const Signature& target);

struct MadsHistoryEntry {
  long iteration = 0;
  double value = 0.0;
  double mesh_size = 0.0;
};

struct MadsOptions {
  double initial_poll = 0.1;
  double max_poll = 1.0;
  double min_poll = 1e-9;
  std::size_t batch = 4;  // poll points evaluated together before accepting one
  // Fit only: run a damped Gauss-Newton search step on the misfit residuals
  // (finite-difference Jacobian, every residual vector counts as one evaluation).
  bool least_squares_search = false;
};

// Optional search step: proposes a point given the incumbent, its value, the
// poll size and the remaining budget. Reports how many evaluations it spent.
struct MadsSearchResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  long evaluations = 0;
};
using MadsSearch =
    std::function<MadsSearchResult(const std::vector<double>& x, double value, double poll_size, long remaining)>;

struct MadsResult {
  std::vector<double> x;
  double value = 0.0;
  double mesh_size = 0.0;
  double poll_size = 0.0;
  long evaluation_count = 0;
  std::vector<MadsHistoryEntry> history;
};

// Orthogonal polling directions: the columns of the Householder reflection
// built from the index-th point of an n-dimensional Halton sequence.
std::vector<std::vector<double>> orthogonal_basis(std::size_t n, std::uint64_t index);

// Mesh-adaptive direct search with orthogonal 2n polling, opportunistic
// acceptance and an extreme barrier (infinite values are never accepted).
// Each iteration tries the search step first (when given and not stalled) and
// polls only if the search did not improve.
MadsResult mads_minimize(const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
                         long budget, std::uint64_t seed, const MadsOptions& options = {},
                         const MadsSearch& search = {});

struct MadsState {
  FourierShape incumbent;
  double incumbent_value = 0.0;
  double mesh_size = 0.0;
  double poll_size = 0.0;
  long evaluation_count = 0;
  std::vector<MadsHistoryEntry> history;
};

MadsState mads_solve(const FourierShape& start, const Signature& target, long budget, std::uint64_t seed,
                     const MadsOptions& options = {});

// Levels m = 1..m_max: level 1 starts from the best fit circle, each later
// level from the previous incumbent zero-padded.
std::vector<MadsState> coarse_to_fine_fit(const Signature& target, int m_max, long budget_per_level,
                                          std::uint64_t seed, const MadsOptions& options = {});

struct FitConfig {
  double r = 0.0;
  int N = 0;
  int m_max = 0;
  long budget_per_level = 0;
  std::uint64_t seed = 0;
  bool least_squares_search = true;  // optional key "search": "least_squares" | "none"
};

// {"r":..,"N":..,"m_max":..,"budget_per_level":..,"seed":..}. Throws ParseError
// for malformed JSON and InvalidArgument for out-of-range values.
FitConfig read_fit_config(std::istream& in);

void write_fourier_json(std::ostream& out, const FourierShape& shape, double value);
FourierShape read_fourier_json(std::istream& in);

}  // namespace areasig
