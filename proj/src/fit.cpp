#include "areasig/fit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>

#include "areasig/parallel.hpp"
#include "json.hpp"

namespace areasig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_shape(const FourierShape& shape) {
  if (shape.m < 1 || shape.N < 3 || shape.harmonics.size() != static_cast<std::size_t>(shape.m) + 1) {
    throw Error(ErrorCode::InvalidArgument, "Fourier shape needs m >= 1, N >= 3 and m + 1 harmonics");
  }
}

std::vector<std::uint64_t> first_primes(std::size_t n) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t c = 2; primes.size() < n; ++c) {
    bool prime = true;
    for (std::uint64_t p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0, f = 1.0 / static_cast<double>(base);
  for (; index > 0; index /= base, f /= static_cast<double>(base)) {
    result += f * static_cast<double>(index % base);
  }
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fourier polygons

FourierShape FourierShape::circle(double radius, int N) {
  FourierShape s;
  s.m = 1;
  s.N = N;
  s.harmonics = {{0.0, 0.0, 0.0, 0.0}, {radius, 0.0, 0.0, radius}};
  return s;
}

FourierShape FourierShape::padded(int new_m) const {
  if (new_m < m) throw Error(ErrorCode::InvalidArgument, "cannot pad to fewer harmonics");
  FourierShape s = *this;
  s.m = new_m;
  s.harmonics.resize(static_cast<std::size_t>(new_m) + 1, {0.0, 0.0, 0.0, 0.0});
  return s;
}

std::vector<double> FourierShape::variables() const {
  std::vector<double> x;
  x.reserve(4 * static_cast<std::size_t>(m));
  for (std::size_t j = 1; j < harmonics.size(); ++j) x.insert(x.end(), harmonics[j].begin(), harmonics[j].end());
  return x;
}

FourierShape FourierShape::with_variables(const std::vector<double>& x) const {
  if (x.size() != 4 * static_cast<std::size_t>(m)) throw Error(ErrorCode::InvalidArgument, "variable count");
  FourierShape s = *this;
  for (std::size_t i = 0; i < x.size(); ++i) s.harmonics[1 + i / 4][i % 4] = x[i];
  return s;
}

std::vector<Point2> fourier_vertices(const FourierShape& shape) {
  check_shape(shape);
  const std::size_t N = static_cast<std::size_t>(shape.N);
  std::vector<double> c(N), s(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(N);
    c[i] = std::cos(t);
    s[i] = std::sin(t);
  }
  std::vector<Point2> v(N);
  for (std::size_t k = 1; k <= N; ++k) {
    Point2 p;
    for (std::size_t j = 0; j < shape.harmonics.size(); ++j) {
      const auto& a = shape.harmonics[j];
      const std::size_t idx = (j * k) % N;
      p.x += a[0] * c[idx] + a[1] * s[idx];
      p.y += a[2] * c[idx] + a[3] * s[idx];
    }
    v[k - 1] = p;
  }
  return v;
}

Polygon fourier_to_polygon(const FourierShape& shape) {
  Polygon p = validate_polygon(fourier_vertices(shape));
  if (p.size() != static_cast<std::size_t>(shape.N)) {
    throw Error(ErrorCode::Degenerate, "coincident vertices");
  }
  return p;
}

double objective(const FourierShape& shape, const Signature& target) {
  if (target.rows.size() != static_cast<std::size_t>(shape.N)) {
    throw Error(ErrorCode::InvalidArgument, "target row count differs from N");
  }
  const std::vector<Point2> v = fourier_vertices(shape);
  Polygon poly;
  try {
    poly = validate_polygon(v);
  } catch (const Error&) {
    return kInf;
  }
  if (poly.size() != v.size()) return kInf;
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double d = poly.disk_area(v[k], target.r) - target.rows[k].g;
    sum += d * d;
  }
  return sum;
}

Signature vertex_signature(const Polygon& polygon, double r) {
  std::vector<double> s(polygon.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = polygon.vertex_s(i);
  return signature(polygon, r, s);
}

FourierShape best_fit_circle(const Signature& target) {
  if (target.rows.size() < 3) throw Error(ErrorCode::InvalidArgument, "target needs at least three rows");
  if (!(target.r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const int N = static_cast<int>(target.rows.size());
  double mean = 0.0;
  for (const auto& row : target.rows) mean += row.g;
  mean /= static_cast<double>(N);
  // g at a vertex of the regular N-gon of circumradius R (all vertices agree).
  auto g_of = [&](double R) {
    const std::vector<Point2> v = fourier_vertices(FourierShape::circle(R, N));
    return Polygon::from_trusted(v).disk_area(v.back(), target.r);
  };
  double lo = 1e-3 * target.r, hi = target.r * N;
  const double g_lo = g_of(lo), g_hi = g_of(hi);
  if (!(mean > g_lo && mean < g_hi)) {
    throw Error(ErrorCode::NoSolution, "mean g " + format_real(mean) + " outside the circle family range");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    (g_of(mid) < mean ? lo : hi) = mid;
  }
  return FourierShape::circle(0.5 * (lo + hi), N);
}

// ---------------------------------------------------------------------------
// Direct search

std::vector<std::vector<double>> orthogonal_basis(std::size_t n, std::uint64_t index) {
  const auto primes = first_primes(n);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = 2.0 * radical_inverse(index, primes[i]) - 1.0;
  const double len = std::sqrt(std::inner_product(q.begin(), q.end(), q.begin(), 0.0));
  std::vector<std::vector<double>> basis(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      basis[i][j] = (i == j ? 1.0 : 0.0) - (len > 0.0 ? 2.0 * q[i] * q[j] / (len * len) : 0.0);
    }
  }
  return basis;
}

MadsResult mads_minimize(const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
                         long budget, std::uint64_t seed, const MadsOptions& options, const MadsSearch& search) {
  if (budget <= 0) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
  if (start.empty()) throw Error(ErrorCode::InvalidArgument, "no variables");
  const std::size_t n = start.size();
  const std::size_t batch = std::max<std::size_t>(1, options.batch);
  std::mt19937_64 rng(seed);
  const std::uint64_t offset = 1 + rng() % (1u << 20);

  MadsResult res;
  res.x = std::move(start);
  res.value = f(res.x);
  res.evaluation_count = 1;
  res.poll_size = options.initial_poll;
  res.mesh_size = res.poll_size * res.poll_size;
  res.history.push_back({0, res.value, res.mesh_size});

  std::vector<double> last_step;
  bool search_active = static_cast<bool>(search);
  for (long iter = 1; res.evaluation_count < budget && res.poll_size >= options.min_poll; ++iter) {
    if (search_active) {
      MadsSearchResult s = search(res.x, res.value, res.poll_size, budget - res.evaluation_count);
      res.evaluation_count += s.evaluations;
      if (std::isfinite(s.value) && s.value < res.value && s.x.size() == n) {
        res.x = std::move(s.x);
        res.value = s.value;
        res.history.push_back({iter, res.value, res.mesh_size});
        continue;
      }
      search_active = false;  // re-armed by the next successful poll
      if (res.evaluation_count >= budget) break;
    }

    const auto basis = orthogonal_basis(n, offset + static_cast<std::uint64_t>(iter));
    std::vector<std::vector<double>> dirs;
    dirs.reserve(2 * n);
    for (const auto& col : basis) {
      dirs.push_back(col);
      std::vector<double> neg(col);
      for (double& v : neg) v = -v;
      dirs.push_back(std::move(neg));
    }
    if (!last_step.empty()) {
      // Try directions closest to the last successful step first.
      std::stable_sort(dirs.begin(), dirs.end(), [&](const auto& a, const auto& b) {
        return std::inner_product(a.begin(), a.end(), last_step.begin(), 0.0) >
               std::inner_product(b.begin(), b.end(), last_step.begin(), 0.0);
      });
    }

    bool success = false;
    for (std::size_t i = 0; i < dirs.size() && !success && res.evaluation_count < budget; i += batch) {
      const std::size_t count =
          std::min({batch, dirs.size() - i, static_cast<std::size_t>(budget - res.evaluation_count)});
      std::vector<std::vector<double>> cand(count, res.x);
      for (std::size_t c = 0; c < count; ++c) {
        for (std::size_t k = 0; k < n; ++k) cand[c][k] += res.poll_size * dirs[i + c][k];
      }
      std::vector<double> vals(count);
      parallel_for(count, [&](std::size_t c) { vals[c] = f(cand[c]); });
      res.evaluation_count += static_cast<long>(count);
      for (std::size_t c = 0; c < count; ++c) {
        if (std::isfinite(vals[c]) && vals[c] < res.value) {
          res.x = std::move(cand[c]);
          res.value = vals[c];
          last_step = dirs[i + c];
          success = true;
          break;
        }
      }
    }
    if (success && search) search_active = true;
    res.poll_size = success ? std::min(2.0 * res.poll_size, options.max_poll) : 0.5 * res.poll_size;
    res.mesh_size = res.poll_size * res.poll_size;
    res.history.push_back({iter, res.value, res.mesh_size});
  }
  return res;
}

namespace {

// Misfit residuals g_fit(k) - g_target(k), or nullopt when infeasible.
std::optional<std::vector<double>> residuals(const FourierShape& shape, const Signature& target) {
  const std::vector<Point2> v = fourier_vertices(shape);
  Polygon poly;
  try {
    poly = validate_polygon(v);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (poly.size() != v.size()) return std::nullopt;
  std::vector<double> r(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) r[k] = poly.disk_area(v[k], target.r) - target.rows[k].g;
  return r;
}

double sum_squares(const std::vector<double>& r) {
  return std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
}

// Gaussian elimination with partial pivoting; false when singular.
bool solve_dense(std::vector<std::vector<double>> A, std::vector<double>& b) {
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t p = i;
    for (std::size_t k = i + 1; k < n; ++k)
      if (std::abs(A[k][i]) > std::abs(A[p][i])) p = k;
    if (!(std::abs(A[p][i]) > 0.0)) return false;
    std::swap(A[i], A[p]);
    std::swap(b[i], b[p]);
    for (std::size_t k = i + 1; k < n; ++k) {
      const double m = A[k][i] / A[i][i];
      for (std::size_t j = i; j < n; ++j) A[k][j] -= m * A[i][j];
      b[k] -= m * b[i];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) b[i] -= A[i][j] * b[j];
    b[i] /= A[i][i];
  }
  return true;
}

// Levenberg-Marquardt step on the residual vector. Damping persists between calls.
MadsSearch least_squares_search(const FourierShape& start, const Signature& target) {
  auto lambda = std::make_shared<double>(1e-3);
  return [start, &target, lambda](const std::vector<double>& x, double value, double, long remaining) {
    MadsSearchResult out;
    const std::size_t n = x.size();
    if (remaining < static_cast<long>(n) + 2) return out;
    const auto r0 = residuals(start.with_variables(x), target);
    ++out.evaluations;
    if (!r0) return out;
    const std::size_t N = r0->size();
    std::vector<std::vector<double>> J(n);
    std::vector<char> ok(n, 1);
    parallel_for(n, [&](std::size_t i) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[i]));
      std::vector<double> y(x);
      y[i] += h;
      auto ri = residuals(start.with_variables(y), target);
      if (!ri) {
        ok[i] = 0;
        return;
      }
      J[i].resize(N);
      for (std::size_t k = 0; k < N; ++k) J[i][k] = ((*ri)[k] - (*r0)[k]) / h;
    });
    out.evaluations += static_cast<long>(n);
    if (std::find(ok.begin(), ok.end(), 0) != ok.end()) return out;

    std::vector<std::vector<double>> A(n, std::vector<double>(n));
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        A[i][j] = A[j][i] = std::inner_product(J[i].begin(), J[i].end(), J[j].begin(), 0.0);
      }
      g[i] = -std::inner_product(J[i].begin(), J[i].end(), r0->begin(), 0.0);
    }
    for (int attempt = 0; attempt < 8 && out.evaluations < remaining; ++attempt) {
      auto B = A;
      for (std::size_t i = 0; i < n; ++i) B[i][i] += *lambda * A[i][i] + 1e-15;
      std::vector<double> d = g;
      if (solve_dense(B, d)) {
        std::vector<double> y(x);
        for (std::size_t i = 0; i < n; ++i) y[i] += d[i];
        const auto ry = residuals(start.with_variables(y), target);
        ++out.evaluations;
        if (ry && sum_squares(*ry) < value) {
          out.x = std::move(y);
          out.value = sum_squares(*ry);
          *lambda = std::max(*lambda / 3.0, 1e-12);
          return out;
        }
      }
      *lambda *= 4.0;
    }
    *lambda = std::min(*lambda, 1e6);
    return out;
  };
}

}  // namespace

MadsState mads_solve(const FourierShape& start, const Signature& target, long budget, std::uint64_t seed,
                     const MadsOptions& options) {
  check_shape(start);
  if (target.rows.size() != static_cast<std::size_t>(start.N)) {
    throw Error(ErrorCode::InvalidArgument, "target row count differs from N");
  }
  auto f = [&](const std::vector<double>& x) { return objective(start.with_variables(x), target); };
  const MadsSearch search = options.least_squares_search ? least_squares_search(start, target) : MadsSearch{};
  MadsResult r = mads_minimize(f, start.variables(), budget, seed, options, search);
  MadsState st;
  st.incumbent = start.with_variables(r.x);
  st.incumbent_value = r.value;
  st.mesh_size = r.mesh_size;
  st.poll_size = r.poll_size;
  st.evaluation_count = r.evaluation_count;
  st.history = std::move(r.history);
  return st;
}

std::vector<MadsState> coarse_to_fine_fit(const Signature& target, int m_max, long budget_per_level,
                                          std::uint64_t seed, const MadsOptions& options) {
  if (m_max < 1) throw Error(ErrorCode::InvalidArgument, "m_max must be at least 1");
  if (budget_per_level <= 0) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
  std::vector<MadsState> levels;
  FourierShape start = best_fit_circle(target);
  for (int m = 1; m <= m_max; ++m) {
    if (m > 1) start = levels.back().incumbent.padded(m);
    const std::uint64_t level_seed = seed * 1000003u + static_cast<std::uint64_t>(m);
    levels.push_back(mads_solve(start, target, budget_per_level, level_seed, options));
  }
  return levels;
}

// ---------------------------------------------------------------------------
// JSON

FitConfig read_fit_config(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  auto number = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
      throw Error(ErrorCode::ParseError, std::string("config: missing number '") + key + "'");
    }
    return doc[key].get<double>();
  };
  auto integer = [&](const char* key) {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 9e15) {
      throw Error(ErrorCode::InvalidArgument, std::string("config: '") + key + "' must be an integer");
    }
    return static_cast<long long>(v);
  };
  FitConfig c;
  c.r = number("r");
  const long long N = integer("N"), m_max = integer("m_max"), budget = integer("budget_per_level");
  const long long seed = doc.contains("seed") ? integer("seed") : 0;
  if (!(c.r > 0.0) || !std::isfinite(c.r)) throw Error(ErrorCode::InvalidArgument, "config: r must be positive");
  if (N < 3 || N > 1000000) throw Error(ErrorCode::InvalidArgument, "config: N must be at least 3");
  if (m_max < 1 || m_max > 100000) throw Error(ErrorCode::InvalidArgument, "config: m_max must be at least 1");
  if (budget < 1) throw Error(ErrorCode::InvalidArgument, "config: budget_per_level must be positive");
  if (seed < 0) throw Error(ErrorCode::InvalidArgument, "config: seed must be nonnegative");
  c.N = static_cast<int>(N);
  c.m_max = static_cast<int>(m_max);
  c.budget_per_level = static_cast<long>(budget);
  c.seed = static_cast<std::uint64_t>(seed);
  if (doc.contains("search")) {
    if (!doc["search"].is_string()) throw Error(ErrorCode::ParseError, "config: 'search' must be a string");
    const std::string mode = doc["search"].get<std::string>();
    if (mode != "least_squares" && mode != "none") {
      throw Error(ErrorCode::InvalidArgument, "config: search must be least_squares or none");
    }
    c.least_squares_search = mode == "least_squares";
  }
  return c;
}

void write_fourier_json(std::ostream& out, const FourierShape& shape, double value) {
  out << "{\"m\": " << shape.m << ", \"N\": " << shape.N << ", \"value\": ";
  out << (std::isfinite(value) ? format_real(value) : std::string("null"));
  out << ", \"coefficients\": [";
  for (std::size_t j = 0; j < shape.harmonics.size(); ++j) {
    const auto& a = shape.harmonics[j];
    out << (j ? ", " : "") << '[' << format_real(a[0]) << ", " << format_real(a[1]) << ", " << format_real(a[2])
        << ", " << format_real(a[3]) << ']';
  }
  out << "]}\n";
}

FourierShape read_fourier_json(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  FourierShape s;
  try {
    const auto doc = nlohmann::json::parse(text);
    s.m = doc.at("m").get<int>();
    s.N = doc.at("N").get<int>();
    for (const auto& row : doc.at("coefficients")) {
      if (row.size() != 4) throw Error(ErrorCode::ParseError, "coefficient rows need four entries");
      s.harmonics.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>(), row[3].get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("coefficients: ") + e.what());
  }
  check_shape(s);
  return s;
}

}  // namespace areasig
