// Batch CLI over the sigma-geometry library: world-function evaluation, tube
// sampling, Euclideanness reports, geodesics, collinearity cones and
// world-function identity diagnostics. Data goes to stdout or --out;
// diagnostics go to stderr.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmageo/config_io.hpp"
#include "sigmageo/errors.hpp"
#include "sigmageo/euclidness.hpp"
#include "sigmageo/geodesic.hpp"
#include "sigmageo/kernel.hpp"
#include "sigmageo/objects.hpp"
#include "sigmageo/tangent.hpp"

namespace {

using nlohmann::ordered_json;
using namespace sigmageo;

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitDegenerateBasis = 4;
constexpr int kExitDimensionCap = 5;
constexpr int kExitNonConvergence = 6;

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      values.push_back(std::stod(cell));
    } catch (...) {
      throw ConfigError("malformed number '" + cell + "' in '" + text + "'");
    }
  }
  if (values.empty()) throw ConfigError("empty coordinate list '" + text + "'");
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

Point parse_point(const std::string& text, const LoadedSpace& loaded) {
  if (loaded.space->is_finite()) {
    try {
      return Point::Label(std::stoi(text));
    } catch (...) {
      throw ConfigError("finite space expects an integer label, got '" + text + "'");
    }
  }
  return Point::Coords(parse_vector(text));
}

std::vector<Point> parse_point_list(const std::string& text, const LoadedSpace& loaded) {
  std::vector<Point> points;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) points.push_back(parse_point(item, loaded));
  if (points.empty()) throw ConfigError("empty point list '" + text + "'");
  return points;
}

// One stream for data output: --out path, or stdout.
class DataSink {
 public:
  explicit DataSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

ordered_json point_to_json(const Point& p) {
  if (p.is_label()) return ordered_json(p.label());
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < p.coords().size(); ++i) arr.push_back(p.coords()[i]);
  return arr;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

std::vector<Point> gather_samples(const LoadedSpace& loaded, const std::string& box,
                                  int count, std::uint64_t seed) {
  if (loaded.space->is_finite()) return all_labels(*loaded.space);
  int dim = loaded.space->dimension();
  double lo = -2.0, hi = 2.0;
  if (!box.empty()) {
    Eigen::VectorXd b = parse_vector(box);
    if (b.size() != 2) throw ConfigError("--box expects 'lo,hi'");
    lo = b[0];
    hi = b[1];
  } else if (loaded.spec.kind == SpaceKind::Sphere) {
    lo = 0.4;
    hi = 2.7;
  } else if (loaded.spec.kind == SpaceKind::PuncturedPlane) {
    lo = -3.0;
    hi = 3.0;
  }
  Eigen::VectorXd lov = Eigen::VectorXd::Constant(dim, lo);
  Eigen::VectorXd hiv = Eigen::VectorXd::Constant(dim, hi);
  return sample_box(*loaded.space, lov, hiv, count, seed);
}

struct EuclidFlags {
  std::string space_path, box, out;
  int samples = 200;
  int pairs = 500;
  int grid = 3;
  int max_dim = 6;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

ordered_json euclid_report_json(const EuclidReport& report) {
  ordered_json doc;
  doc["dimension_found"] = report.dimension_found;
  doc["dimension_capped"] = report.dimension_capped;
  doc["cond1"] = report.cond1.pass ? "pass" : "fail";
  doc["cond1_max_residual"] = report.cond1.max_residual;
  doc["cond2"] = report.cond2.pass ? "pass" : "fail";
  doc["cond2_max_residual"] = report.cond2.max_residual;
  doc["cond3"] = report.cond3.pass ? "pass" : "fail";
  doc["cond3_max_residual"] = report.cond3.max_residual;
  doc["cond3_surjectivity"] = report.cond3_surjectivity;
  ordered_json basis = ordered_json::array();
  for (const Point& p : report.witness) basis.push_back(point_to_json(p));
  doc["witness_basis"] = basis;
  return doc;
}

int run_eval(const std::string& space_path, const std::string& p_text,
             const std::string& q_text, double tol, const std::string& out) {
  LoadedSpace loaded = load_space_config(space_path);
  Point p = parse_point(p_text, loaded);
  Point q = parse_point(q_text, loaded);
  double sigma_value = loaded.space->sigma(p, q);

  std::string rho;
  if (sigma_value < -kTolFloor) {
    rho = "imaginary";
  } else {
    rho = format_real(std::sqrt(2.0 * std::max(sigma_value, 0.0)));
  }

  bool indefinite = loaded.spec.kind == SpaceKind::PseudoEuclidean;
  if (loaded.spec.kind == SpaceKind::ConstantMetric) {
    if (const auto* flat = dynamic_cast<const FlatSpace*>(loaded.space.get()))
      indefinite = flat->indefinite();
  }
  std::string kind = to_string(classify_interval(*loaded.space, p, q, tol));
  if (!indefinite) kind += "-na";

  DataSink sink(out);
  sink.stream() << format_real(sigma_value) << "," << rho << "," << kind << "\n";
  return 0;
}

int run_tube(const std::string& space_path, const std::string& basis_text,
             const std::string& window, const std::string& resolution, double tol,
             const std::string& out) {
  LoadedSpace loaded = load_space_config(space_path);
  std::vector<Point> basis = parse_point_list(basis_text, loaded);
  int dim = loaded.space->dimension();
  if (dim < 1) throw ConfigError("tube sampling needs a coordinate space");

  GridSpec grid;
  grid.lo.resize(dim);
  grid.hi.resize(dim);
  {
    std::stringstream ss(window);
    std::string axis;
    std::vector<std::pair<double, double>> ranges;
    while (std::getline(ss, axis, ';')) {
      Eigen::VectorXd b = parse_vector(axis);
      if (b.size() != 2) throw ConfigError("--window axis ranges must be 'lo,hi'");
      ranges.emplace_back(b[0], b[1]);
    }
    if (ranges.size() == 1) ranges.assign(static_cast<std::size_t>(dim), ranges[0]);
    if (static_cast<int>(ranges.size()) != dim)
      throw ConfigError("--window needs one range or one per axis");
    for (int a = 0; a < dim; ++a) {
      grid.lo[a] = ranges[static_cast<std::size_t>(a)].first;
      grid.hi[a] = ranges[static_cast<std::size_t>(a)].second;
    }
  }
  {
    Eigen::VectorXd r = parse_vector(resolution);
    if (r.size() == 1)
      grid.counts.assign(static_cast<std::size_t>(dim), static_cast<int>(r[0]));
    else if (static_cast<int>(r.size()) == dim)
      for (Eigen::Index a = 0; a < r.size(); ++a) grid.counts.push_back(static_cast<int>(r[a]));
    else
      throw ConfigError("--resolution needs one count or one per axis");
  }

  TubeSample sample = sample_tube(*loaded.space, basis, grid, tol);
  DataSink sink(out);
  std::ostream& os = sink.stream();
  for (int a = 0; a < dim; ++a) os << "x" << (a + 1) << ",";
  os << "residual\n";
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    for (int a = 0; a < dim; ++a) os << format_real(sample.points[i][a]) << ",";
    os << format_real(sample.residuals[i]) << "\n";
  }
  return 0;
}

int run_dim(const EuclidFlags& flags) {
  LoadedSpace loaded = load_space_config(flags.space_path);
  std::vector<Point> samples = gather_samples(loaded, flags.box, flags.samples, flags.seed);
  auto [dim, witness] = detect_dimension(*loaded.space, samples, flags.max_dim, flags.tol);
  ordered_json doc;
  doc["dimension_found"] = dim;
  ordered_json basis = ordered_json::array();
  for (const Point& p : witness) basis.push_back(point_to_json(p));
  doc["witness_basis"] = basis;
  DataSink sink(flags.out);
  sink.stream() << doc.dump(2) << "\n";
  return 0;
}

int run_euclid(const EuclidFlags& flags) {
  LoadedSpace loaded = load_space_config(flags.space_path);
  std::vector<Point> samples = gather_samples(loaded, flags.box, flags.samples, flags.seed);
  DetectResult det = try_detect_dimension(*loaded.space, samples, flags.max_dim, flags.tol);

  EuclidReport report;
  if (det.basis.size() >= 2) {
    Chart chart = build_chart(*loaded.space, det.basis);
    auto pairs = sample_pairs(samples, flags.pairs, flags.seed);
    report = check_conditions(*loaded.space, chart, samples, pairs, flags.grid, flags.tol);
  } else {
    report.dimension_found = det.dim;
    report.cond3_surjectivity = "not-assessable";
    report.witness = det.basis;
  }
  report.dimension_found = det.dim;
  report.dimension_capped = !det.found;
  if (!det.found) report.cond1.pass = false;

  DataSink sink(flags.out);
  sink.stream() << euclid_report_json(report).dump(2) << "\n";
  return 0;
}

int run_geodesic(const std::string& space_path, const std::string& from_text,
                 const std::string& to_text, const SolverOptions& opts,
                 const std::string& out) {
  LoadedSpace loaded = load_space_config(space_path);
  if (!loaded.metric) throw ConfigError("this space kind has no metric field to solve in");
  Eigen::VectorXd from = parse_vector(from_text);
  Eigen::VectorXd to = parse_vector(to_text);
  GeodesicPath path = geodesic_between(*loaded.metric, from, to, opts);
  if (!path.converged) {
    std::cerr << "error: geodesic solver did not converge\n";
    return kExitNonConvergence;
  }
  DataSink sink(out);
  std::ostream& os = sink.stream();
  os << "tau";
  for (int a = 0; a < loaded.metric->dim; ++a) os << ",x" << (a + 1);
  os << "\n";
  for (std::size_t j = 0; j < path.nodes.size(); ++j) {
    os << format_real(path.params[static_cast<Eigen::Index>(j)]);
    for (int a = 0; a < loaded.metric->dim; ++a) os << "," << format_real(path.nodes[j][a]);
    os << "\n";
  }
  os << "# length=" << format_real(path.refined_length) << "\n";
  return 0;
}

int run_cone(const std::string& space_path, const std::string& x_text,
             const std::string& x2_text, const std::string& u_text, int resolution,
             double tol, const std::string& out) {
  LoadedSpace loaded = load_space_config(space_path);
  if (!loaded.metric) throw ConfigError("this space kind has no metric field");
  ConeResult cone = collinearity_cone(*loaded.space, *loaded.metric, parse_vector(x_text),
                                      parse_vector(x2_text), parse_vector(u_text), resolution,
                                      tol);
  ordered_json doc;
  doc["x"] = vector_to_json(cone.x);
  doc["x2"] = vector_to_json(cone.x2);
  doc["u_at_x2"] = vector_to_json(cone.u_at_x2);
  doc["u_at_x"] = vector_to_json(cone.u_at_x);
  doc["degenerate"] = cone.degenerate;
  ordered_json sols = ordered_json::array();
  for (const ConeSolution& s : cone.solutions) {
    ordered_json entry;
    entry["direction"] = vector_to_json(s.direction);
    entry["residual"] = s.residual;
    sols.push_back(entry);
  }
  doc["solutions"] = sols;
  DataSink sink(out);
  sink.stream() << doc.dump(2) << "\n";
  return 0;
}

int run_identities(const std::string& space_path, const std::string& x_text,
                   const std::string& x2_text, const std::string& out) {
  LoadedSpace loaded = load_space_config(space_path);
  if (!loaded.metric) throw ConfigError("this space kind has no metric field");
  IdentityReport report = check_worldfunction_identities(
      *loaded.space, *loaded.metric, parse_vector(x_text), parse_vector(x2_text));
  ordered_json doc;
  doc["sigma"] = report.sigma_value;
  doc["sq_norm_residual"] = report.sq_norm;
  doc["along_geodesic_residual"] = report.along_geodesic;
  doc["metric_recovery_residual"] = report.metric_recovery;
  doc["mixed_det"] = report.mixed_det;
  DataSink sink(out);
  sink.stream() << doc.dump(2) << "\n";
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"sigma-geometry toolkit: metric-only geometry at desk scale"};
  app.require_subcommand(1);

  std::string space_path, out;
  double tol = 1e-9;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_space = true) {
    auto* opt = cmd->add_option("--space", space_path, "space config JSON");
    if (needs_space) opt->required();
    cmd->add_option("--tol", tol, "relative tolerance")->capture_default_str();
    cmd->add_option("--seed", seed, "sampling seed")->capture_default_str();
    cmd->add_option("--out", out, "output path (default stdout)");
  };

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate sigma, rho and the interval kind");
  std::string p_text, q_text;
  add_common(eval_cmd);
  eval_cmd->add_option("--p", p_text, "first point")->required();
  eval_cmd->add_option("--q", q_text, "second point")->required();

  // tube
  auto* tube_cmd = app.add_subcommand("tube", "sample an n-th order tube on a grid");
  std::string basis_text, window = "-2,2", resolution = "41";
  add_common(tube_cmd);
  tube_cmd->add_option("--basis", basis_text, "basis points 'x,y;x,y;...'")->required();
  tube_cmd->add_option("--window", window, "axis ranges 'lo,hi[;lo,hi...]'")->capture_default_str();
  tube_cmd->add_option("--resolution", resolution, "grid counts per axis")->capture_default_str();

  // dim / euclid
  EuclidFlags eflags;
  auto* dim_cmd = app.add_subcommand("dim", "detect the dimension from samples");
  auto* euclid_cmd = app.add_subcommand("euclid", "run the three Euclideanness conditions");
  for (CLI::App* cmd : {dim_cmd, euclid_cmd}) {
    add_common(cmd);
    cmd->add_option("--samples", eflags.samples, "sample count")->capture_default_str();
    cmd->add_option("--box", eflags.box, "sampling box 'lo,hi' (per-kind default)");
    cmd->add_option("--max-dim", eflags.max_dim, "detection cap")->capture_default_str();
    cmd->add_option("--pairs", eflags.pairs, "pair count for condition II")->capture_default_str();
    cmd->add_option("--grid", eflags.grid, "per-axis grid for condition III")->capture_default_str();
  }

  // geodesic
  auto* geo_cmd = app.add_subcommand("geodesic", "solve a boundary-value geodesic");
  std::string from_text, to_text;
  SolverOptions solver;
  add_common(geo_cmd);
  geo_cmd->add_option("--from", from_text, "start coordinates")->required();
  geo_cmd->add_option("--to", to_text, "end coordinates")->required();
  geo_cmd->add_option("--nodes", solver.nodes, "path segments")->capture_default_str();
  geo_cmd->add_option("--gtol", solver.gtol, "gradient tolerance")->capture_default_str();
  geo_cmd->add_option("--max-iter", solver.max_iter, "iteration cap per level")
      ->capture_default_str();

  // cone
  auto* cone_cmd = app.add_subcommand("cone", "scan the collinearity cone");
  std::string x_text, x2_text, u_text;
  int cone_resolution = 10000;
  add_common(cone_cmd);
  cone_cmd->add_option("--x", x_text, "cone vertex coordinates")->required();
  cone_cmd->add_option("--x2", x2_text, "remote point coordinates")->required();
  cone_cmd->add_option("--u", u_text, "direction at x2")->required();
  cone_cmd->add_option("--resolution", cone_resolution, "direction net size")
      ->capture_default_str();

  // identities
  auto* id_cmd = app.add_subcommand("identities", "world-function identity diagnostics");
  add_common(id_cmd);
  id_cmd->add_option("--x", x_text, "first point coordinates")->required();
  id_cmd->add_option("--x2", x2_text, "second point coordinates")->required();

  CLI11_PARSE(app, argc, argv);

  eflags.space_path = space_path;
  eflags.out = out;
  eflags.tol = tol;
  eflags.seed = seed;

  if (eval_cmd->parsed()) return run_eval(space_path, p_text, q_text, tol, out);
  if (tube_cmd->parsed()) return run_tube(space_path, basis_text, window, resolution, tol, out);
  if (dim_cmd->parsed()) return run_dim(eflags);
  if (euclid_cmd->parsed()) return run_euclid(eflags);
  if (geo_cmd->parsed()) return run_geodesic(space_path, from_text, to_text, solver, out);
  if (cone_cmd->parsed())
    return run_cone(space_path, x_text, x2_text, u_text, cone_resolution, tol, out);
  if (id_cmd->parsed()) return run_identities(space_path, x_text, x2_text, out);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DegenerateBasisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerateBasis;
  } catch (const DimensionCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDimensionCap;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const DomainMismatchError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const PointInsideHoleError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NegativeSigmaError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ChartBoundaryError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
