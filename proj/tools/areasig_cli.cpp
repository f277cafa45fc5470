#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "areasig/curvature.hpp"
#include "areasig/ellipse.hpp"
#include "areasig/fit.hpp"
#include "areasig/graphlike.hpp"
#include "areasig/invariant.hpp"
#include "areasig/reconstruct.hpp"
#include "areasig/shapes.hpp"

using namespace areasig;

namespace {

// Exit-code contract: 0 ok, 1 semantic failure, 2 bad input, 3 I/O.
int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotSimple:
    case ErrorCode::Degenerate:
    case ErrorCode::VertexCountMismatch:
    case ErrorCode::NotTCGLSource:
      return 2;
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
      return 3;
    default:
      return 1;
  }
}

struct ShapeArgs {
  std::string kind = "circle";
  ShapeSpec spec;

  void add_to(CLI::App* app) {
    app->add_option("--kind", kind, "circle, ellipse, star, rounded_square, regular_ngon or polygon_file");
    app->add_option("--file", spec.path, "polygon JSON for --kind polygon_file");
    app->add_option("--radius-param", spec.radius, "circle radius, star base radius, n-gon circumradius");
    app->add_option("--semi-a", spec.semi_a, "ellipse semi-axis along x");
    app->add_option("--semi-b", spec.semi_b, "ellipse semi-axis along y");
    app->add_option("--amplitude", spec.amplitude, "star lobe amplitude");
    app->add_option("--lobes", spec.lobes, "star lobe count");
    app->add_option("--width", spec.width, "rounded square width");
    app->add_option("--height", spec.height, "rounded square height");
    app->add_option("--corner", spec.corner, "rounded square corner radius");
    app->add_option("--sides", spec.sides, "regular n-gon side count");
    app->add_option("--resolution", spec.resolution, "vertices for parametric kinds");
  }

  ShapeSpec resolved() {
    ShapeSpec s = spec;
    s.kind = parse_shape_kind(kind);
    if (s.kind == ShapeKind::polygon_file && s.path.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--kind polygon_file needs --file");
    }
    return s;
  }
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return in;
}

// Writes to the file, or to stdout when path is empty.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  fn(out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0' || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<Point2> aligned_onto(const Polygon& moving, const Polygon& fixed) {
  std::vector<Point2> pts = moving.vertices();
  if (moving.size() == fixed.size()) {
    const Alignment a = rigid_align(moving, fixed);
    for (Point2& p : pts) p = a.transform.apply(p);
  }
  return pts;
}

// ---------------------------------------------------------------------------

int cmd_signature(ShapeArgs& shape, double r, std::size_t n, bool at_vertices, const std::string& out) {
  require_positive(r, "--r");
  const ShapeSpec spec = shape.resolved();
  Signature sig;
  if (at_vertices) {
    sig = vertex_signature(make_polygon(spec), r);
  } else {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "--n must be positive");
    sig = signature_uniform(*make_shape(spec), r, n);
  }
  emit(out, [&](std::ostream& os) { write_signature_csv(os, sig); });
  return 0;
}

int cmd_check(ShapeArgs& shape, double r, std::size_t n, const std::string& out) {
  require_positive(r, "--r");
  const Polygon poly = make_polygon(shape.resolved());
  const TCGLReport report = check_tcgl(poly, r, std::max(n, poly.size()));
  emit(out, [&](std::ostream& os) { write_tcgl_report_json(os, report); });
  if (!report.pass) {
    std::cerr << "not tangent-cone graph-like at r=" << format_real(r) << ": " << report.failures().size()
              << " failing samples\n";
  }
  return report.pass ? 0 : 1;
}

int cmd_reconstruct_poly(const std::string& sig_path, double r, const std::string& out, const std::string& svg,
                         const std::string& target_path) {
  require_positive(r, "--r");
  std::ifstream in = open_in(sig_path);
  const Signature sig = read_signature_csv(in, r);
  const ReconstructedPolygon rec = reconstruct_polygon(sig);
  emit(out, [&](std::ostream& os) {
    auto list = [&](const std::vector<double>& v) {
      os << '[';
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << format_real(v[i]);
      os << ']';
    };
    os << "{\"vertices\": [";
    for (std::size_t i = 0; i < rec.vertices.size(); ++i) {
      os << (i ? ", " : "") << '[' << format_real(rec.vertices[i].x) << ", " << format_real(rec.vertices[i].y) << ']';
    }
    os << "],\n \"vertex_s\": ";
    list(rec.vertex_s);
    os << ",\n \"side_lengths\": ";
    list(rec.side_lengths);
    os << ",\n \"interior_angles\": ";
    list(rec.interior_angles);
    os << ",\n \"closure_residual\": " << format_real(rec.closure_residual) << "}\n";
  });
  if (!svg.empty()) {
    const Polygon result = Polygon::from_trusted(rec.vertices);
    std::vector<SvgPath> paths;
    if (!target_path.empty()) {
      std::ifstream tin = open_in(target_path);
      const Polygon target = read_polygon_json(tin);
      paths.push_back({aligned_onto(target, result), true, "#888888", "target", true});
    }
    paths.push_back({rec.vertices, false, "#1f4e9c", "reconstruction", true});
    emit(svg, [&](std::ostream& os) { write_svg(os, paths); });
  }
  std::cerr << rec.vertices.size() << " vertices, closure residual " << format_real(rec.closure_residual) << '\n';
  return 0;
}

int cmd_tdata(ShapeArgs& shape, double s_hat, double r_hat, std::size_t n, std::size_t n_radial,
              const std::string& out) {
  require_positive(r_hat, "--r");
  if (n < 4 || n_radial < 2) throw Error(ErrorCode::InvalidArgument, "--n must be >= 4 and --n-radial >= 2");
  const auto sh = make_shape(shape.resolved());
  const TLikeData data = generate_tlike_data(*sh, s_hat, r_hat, n, n_radial);
  emit(out, [&](std::ostream& os) { write_tlike_csv(os, data); });
  return 0;
}

int cmd_reconstruct_tlike(const std::string& tdata_path, double step, const std::string& out, const std::string& svg,
                          ShapeArgs& truth, bool has_truth, double s_hat) {
  require_positive(step, "--step");
  std::ifstream in = open_in(tdata_path);
  const TLikeData data = read_tlike_csv(in);
  const std::vector<TaggedPoint> pts = reconstruct_tlike(data, step);
  std::vector<Point2> trace;
  for (const auto& p : pts) trace.push_back(p.position);

  std::vector<SvgPath> paths;
  if (has_truth) {
    const auto sh = make_shape(truth.resolved());
    std::vector<Point2> expected;
    for (const auto& p : pts) expected.push_back(tlike_truth(*sh, s_hat, data.r_hat, p));
    const Alignment a = fit_rigid(expected, trace);
    double worst = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) worst = std::max(worst, distance(a.transform.apply(expected[i]), trace[i]));
    std::vector<Point2> outline = sh->sample_boundary(1024);
    for (Point2& p : outline) p = a.transform.apply(p);
    paths.push_back({outline, true, "#888888", "target", true});
    std::cout << "max_deviation " << format_real(worst) << '\n';
  }
  paths.push_back({trace, false, "#1f4e9c", "reconstruction", false});
  std::cout << "points " << pts.size() << '\n';
  if (!svg.empty()) emit(svg, [&](std::ostream& os) { write_svg(os, paths); });
  if (!out.empty()) {
    emit(out, [&](std::ostream& os) {
      os << "leg,coord,x,y\n";
      for (const auto& p : pts) {
        const char* leg = p.leg == TLikeLeg::march    ? "march"
                          : p.leg == TLikeLeg::seed   ? "seed"
                          : p.leg == TLikeLeg::radial_entry ? "radial_entry"
                                                            : "radial_exit";
        os << leg << ',' << format_real(p.coord) << ',' << format_real(p.position.x) << ','
           << format_real(p.position.y) << '\n';
      }
    });
  }
  return 0;
}

int cmd_curvature(ShapeArgs& shape, const std::string& s_list, bool all, std::size_t n, const std::string& method,
                  const std::string& radii_text, double r, const std::string& out) {
  const auto sh = make_shape(shape.resolved());
  std::vector<double> samples;
  if (all) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "--n must be positive");
    for (std::size_t k = 0; k < n; ++k) samples.push_back(sh->length() * static_cast<double>(k) / static_cast<double>(n));
  } else {
    samples = parse_list(s_list);
  }
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "give --s or --all");
  const bool small_r = method == "small_r_limit" || method == "small_r";
  if (!small_r && method != "exit_point") throw Error(ErrorCode::InvalidArgument, "unknown method '" + method + "'");
  const std::vector<double> radii = parse_list(radii_text);
  if (!small_r) require_positive(r, "--r");

  std::vector<CurvatureEstimate> rows;
  std::size_t flagged = 0;
  for (double s : samples) {
    if (small_r) {
      try {
        rows.push_back(curvature_small_r(*sh, s, radii));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::VertexPoint) throw;
        CurvatureEstimate flag;
        flag.s = sh->wrap_s(s);
        flag.vertex_point = true;
        rows.push_back(flag);
        ++flagged;
      }
    } else {
      const auto [plus, minus] = curvature_exit_points(*sh, s, r);
      rows.push_back(plus);
      rows.push_back(minus);
    }
  }
  emit(out, [&](std::ostream& os) { write_curvature_csv(os, rows); });
  if (flagged) std::cerr << flagged << " sample(s) at corners flagged VertexPoint\n";
  return 0;
}

int cmd_fit(const std::string& target_path, const std::string& config_path, const std::string& out_dir,
            const std::string& target_polygon, std::optional<std::uint64_t> seed) {
  std::ifstream cin_ = open_in(config_path);
  FitConfig cfg = read_fit_config(cin_);
  if (seed) cfg.seed = *seed;
  std::ifstream tin = open_in(target_path);
  const Signature target = read_signature_csv(tin, cfg.r);
  if (target.rows.size() != static_cast<std::size_t>(cfg.N)) {
    throw Error(ErrorCode::InvalidArgument, "target has " + std::to_string(target.rows.size()) + " rows, config N is " +
                                                std::to_string(cfg.N));
  }
  std::optional<Polygon> shape;
  if (!target_polygon.empty()) {
    std::ifstream pin = open_in(target_polygon);
    shape = read_polygon_json(pin);
  }
  if (out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "--out directory required");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir + "'");

  MadsOptions opt;
  opt.least_squares_search = cfg.least_squares_search;
  const auto levels = coarse_to_fine_fit(target, cfg.m_max, cfg.budget_per_level, cfg.seed, opt);
  double mean = 0.0;
  for (const auto& row : target.rows) mean += row.g;
  mean /= static_cast<double>(target.rows.size());

  std::ostringstream summary;
  summary << "m,value,rms_over_mean_g,evaluations\n";
  for (const MadsState& st : levels) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "level_%02d", st.incumbent.m);
    const std::filesystem::path base = std::filesystem::path(out_dir) / stem;
    const Polygon fit = fourier_to_polygon(st.incumbent);
    emit(base.string() + ".json", [&](std::ostream& os) { write_fourier_json(os, st.incumbent, st.incumbent_value); });
    emit(base.string() + ".csv", [&](std::ostream& os) { write_signature_csv(os, vertex_signature(fit, cfg.r)); });
    std::vector<SvgPath> paths;
    if (shape) paths.push_back({shape->vertices(), true, "#888888", "target", true});
    paths.push_back({shape ? aligned_onto(fit, *shape) : fit.vertices(), false, "#1f4e9c", "fit", true});
    emit(base.string() + ".svg", [&](std::ostream& os) { write_svg(os, paths); });
    const double rms = std::sqrt(st.incumbent_value / static_cast<double>(target.rows.size()));
    summary << st.incumbent.m << ',' << format_real(st.incumbent_value) << ',' << format_real(rms / mean) << ','
            << st.evaluation_count << '\n';
  }
  emit((std::filesystem::path(out_dir) / "summary.csv").string(), [&](std::ostream& os) { os << summary.str(); });
  std::cout << summary.str();
  return 0;
}

int cmd_align(const std::string& a_path, const std::string& b_path) {
  std::ifstream ain = open_in(a_path), bin = open_in(b_path);
  const Polygon a = read_polygon_json(ain), b = read_polygon_json(bin);
  const Alignment al = rigid_align(a, b);
  std::cout << "residual " << format_real(al.residual) << '\n'
            << "angle " << format_real(al.transform.angle) << '\n'
            << "translation " << format_real(al.transform.translation.x) << ' '
            << format_real(al.transform.translation.y) << '\n'
            << "shift " << al.shift << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral area invariant toolkit"};
  app.require_subcommand(1);

  double r = 0.0;
  std::size_t n = 256;
  std::string out;
  std::uint64_t seed = 0;

  ShapeArgs sig_shape;
  bool at_vertices = false;
  auto* sig = app.add_subcommand("signature", "g, g_r and one-sided g_s along a boundary");
  sig_shape.add_to(sig);
  sig->add_option("--r", r, "disk radius")->required();
  sig->add_option("--n", n, "uniform arc-length samples");
  sig->add_flag("--at-vertices", at_vertices, "one row per polygon vertex instead");
  sig->add_option("--out", out, "CSV path (stdout when omitted)");

  ShapeArgs check_shape;
  std::size_t check_n = 512;
  auto* check = app.add_subcommand("check", "tangent-cone graph-like check");
  check_shape.add_to(check);
  check->add_option("--r", r, "disk radius")->required();
  check->add_option("--n", check_n, "sample count (at least the vertex count)");
  check->add_option("--out", out, "JSON report path (stdout when omitted)");

  std::string sig_path, svg_path, target_path;
  auto* rpoly = app.add_subcommand("reconstruct-poly", "polygon from a fixed-radius signature");
  rpoly->add_option("--sig", sig_path, "signature CSV")->required();
  rpoly->add_option("--r", r, "radius the signature was taken at")->required();
  rpoly->add_option("--out", out, "reconstruction JSON (stdout when omitted)");
  rpoly->add_option("--svg", svg_path, "SVG of the reconstruction");
  rpoly->add_option("--target", target_path, "polygon JSON drawn dashed for comparison");

  ShapeArgs td_shape;
  double s_hat = 0.0;
  std::size_t n_radial = 64;
  auto* td = app.add_subcommand("tdata", "T-like data (boundary and radial legs) from a shape");
  td_shape.add_to(td);
  td->add_option("--s-hat", s_hat, "arc length of the seed point");
  td->add_option("--r", r, "seed radius r_hat")->required();
  td->add_option("--n", n, "boundary rows");
  td->add_option("--n-radial", n_radial, "radial rows");
  td->add_option("--out", out, "CSV path (stdout when omitted)");

  std::string tdata_path;
  double step = 0.0;
  ShapeArgs truth_shape;
  auto* rtl = app.add_subcommand("reconstruct-tlike", "curve from T-like data by marching");
  rtl->add_option("--tdata", tdata_path, "T-data CSV")->required();
  rtl->add_option("--step", step, "marching step")->required();
  rtl->add_option("--svg", svg_path, "SVG of the trace");
  rtl->add_option("--out", out, "CSV of reconstructed points");
  rtl->add_option("--s-hat", s_hat, "seed arc length on the truth shape");
  truth_shape.add_to(rtl);

  ShapeArgs curv_shape;
  std::string s_list, method = "small_r_limit", radii = "0.1,0.05,0.025";
  bool all = false;
  auto* curv = app.add_subcommand("curvature", "curvature from the area invariant");
  curv_shape.add_to(curv);
  curv->add_option("--s", s_list, "comma-separated arc lengths");
  curv->add_flag("--all", all, "uniform samples instead of --s");
  curv->add_option("--n", n, "sample count with --all");
  curv->add_option("--method", method, "small_r_limit or exit_point");
  curv->add_option("--radii", radii, "descending radii for small_r_limit");
  curv->add_option("--r", r, "radius for exit_point");
  curv->add_option("--out", out, "CSV path (stdout when omitted)");

  std::string config_path, target_polygon;
  auto* fit = app.add_subcommand("fit", "Fourier polygon fit to a vertex signature");
  fit->add_option("--target", sig_path, "target signature CSV, one row per vertex")->required();
  fit->add_option("--config", config_path, "fit config JSON")->required();
  fit->add_option("--out", out, "output directory")->required();
  fit->add_option("--target-polygon", target_polygon, "target polygon JSON for the overlays");
  auto* seed_opt = fit->add_option("--seed", seed, "overrides the config seed");

  std::string a_path, b_path;
  auto* align = app.add_subcommand("align", "rigid alignment residual between two polygons");
  align->add_option("a", a_path, "first polygon JSON")->required();
  align->add_option("b", b_path, "second polygon JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sig) return cmd_signature(sig_shape, r, n, at_vertices, out);
    if (*check) return cmd_check(check_shape, r, check_n, out);
    if (*rpoly) return cmd_reconstruct_poly(sig_path, r, out, svg_path, target_path);
    if (*td) return cmd_tdata(td_shape, s_hat, r, n, n_radial, out);
    if (*rtl) {
      const bool has_truth = rtl->count("--kind") > 0;
      return cmd_reconstruct_tlike(tdata_path, step, out, svg_path, truth_shape, has_truth, s_hat);
    }
    if (*curv) return cmd_curvature(curv_shape, s_list, all, n, method, radii, r, out);
    if (*fit) {
      return cmd_fit(sig_path, config_path, out, target_polygon,
                     seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    }
    if (*align) return cmd_align(a_path, b_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
