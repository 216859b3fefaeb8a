// Constructive Euclideanness: dimension detection, rectilinear charts,
// coordinate reconstruction and the three-condition check.

#include "sigmageo/euclidness.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <random>

#include "sigmageo/errors.hpp"
#include "sigmageo/kernel.hpp"
#include "sigmageo/objects.hpp"
#include "sigmageo/parallel.hpp"

namespace sigmageo {

namespace {

// Deterministic uniform draw in [0,1); independent of the standard library's
// distribution implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

constexpr int kCandidateBatch = 32;

}  // namespace

std::vector<Point> sample_box(const SigmaSpace& space, const Eigen::VectorXd& lo,
                              const Eigen::VectorXd& hi, int count, std::uint64_t seed) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw ConfigError("sampling box arity mismatch");
  std::mt19937_64 rng(seed);
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(count));
  int attempts = 0;
  int limit = count * 1000 + 1000;
  while (static_cast<int>(points.size()) < count && attempts < limit) {
    ++attempts;
    Eigen::VectorXd x(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      x[i] = lo[i] + (hi[i] - lo[i]) * uniform01(rng);
    if (!space.contains(x)) continue;
    points.push_back(Point::Coords(x));
  }
  if (static_cast<int>(points.size()) < count)
    throw ConfigError("sampling box rejected too many points for this domain");
  return points;
}

std::vector<Point> all_labels(const SigmaSpace& space) {
  std::vector<Point> points;
  int n = space.point_count();
  points.reserve(static_cast<std::size_t>(n > 0 ? n : 0));
  for (int i = 0; i < n; ++i) points.push_back(Point::Label(i));
  return points;
}

std::vector<std::pair<Point, Point>> sample_pairs(const std::vector<Point>& points, int count,
                                                  std::uint64_t seed) {
  std::vector<std::pair<Point, Point>> pairs;
  if (points.size() < 2) return pairs;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  pairs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    auto a = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(points.size()));
    auto b = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(points.size()));
    if (a >= points.size()) a = points.size() - 1;
    if (b >= points.size()) b = points.size() - 1;
    if (a == b) b = (b + 1) % points.size();
    pairs.emplace_back(points[a], points[b]);
  }
  return pairs;
}

DetectResult try_detect_dimension(const SigmaSpace& space, const std::vector<Point>& samples,
                                  int max_dim, double tol) {
  if (max_dim > kMaxGramOrder)
    throw DimensionCapError("max_dim exceeds the Gram order cap of " +
                            std::to_string(kMaxGramOrder));
  if (samples.empty()) throw ConfigError("dimension detection needs at least one sample");

  DetectResult result;
  result.basis = {samples[0]};
  double threshold = scaled_tol(tol, 1.0);

  for (int stage = 0;; ++stage) {
    // Residual of each sample against the current tube T(P^stage).
    detail::TubeBasisContext ctx;
    bool have_ctx = stage > 0;
    if (have_ctx) ctx = detail::make_tube_context(space, result.basis);

    double best_res = 0.0;
    std::size_t best_index = 0;
    bool any_escape = false;
    int batch_seen = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Point& p = samples[i];
      double res;
      if (have_ctx) {
        res = detail::tube_residual(space, ctx, p);
      } else {
        double s = space.sigma(result.basis[0], p);
        res = 2.0 * s / std::max(1.0, 2.0 * std::abs(s));
      }
      if (std::abs(res) > threshold) {
        any_escape = true;
        if (batch_seen < kCandidateBatch) {
          ++batch_seen;
          if (std::abs(res) > std::abs(best_res)) {
            best_res = res;
            best_index = i;
          }
        }
      }
    }
    if (!any_escape) {
      result.found = true;
      result.dim = stage;
      return result;
    }
    if (stage >= max_dim) {
      result.found = false;
      result.dim = max_dim;
      return result;
    }
    result.basis.push_back(samples[best_index]);
  }
}

std::pair<int, std::vector<Point>> detect_dimension(const SigmaSpace& space,
                                                    const std::vector<Point>& samples,
                                                    int max_dim, double tol) {
  DetectResult r = try_detect_dimension(space, samples, max_dim, tol);
  if (!r.found)
    throw DimensionCapError("points still escape the tube at dimension " +
                            std::to_string(max_dim));
  return {r.dim, r.basis};
}

Chart build_chart(const SigmaSpace& space, const std::vector<Point>& basis) {
  GramResult g = gram(space, basis);
  int n = static_cast<int>(g.gamma_matrix.rows());
  double scale = 1.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = i + 1; k < basis.size(); ++k)
      scale = std::max(scale, 2.0 * std::abs(space.sigma(basis[i], basis[k])));
  if (std::abs(g.determinant) <= kTolFloor * std::pow(scale, n))
    throw DegenerateBasisError("chart basis has vanishing F_n");

  Chart chart;
  chart.basis = basis;
  chart.g_cov = g.gamma_matrix;
  chart.g_contra = g.gamma_matrix.partialPivLu().inverse();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(chart.g_cov);
  double thr = kTolFloor * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > thr) ++chart.positive_eigenvalues;
    if (es.eigenvalues()[i] < -thr) ++chart.negative_eigenvalues;
  }
  return chart;
}

Eigen::VectorXd covariant_coordinates(const SigmaSpace& space, const Chart& chart,
                                      const Point& p) {
  int n = chart.order();
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i)
    x[i] = gamma(space, chart.basis[0], chart.basis[static_cast<std::size_t>(i) + 1], p);
  return x;
}

double reconstruct_sigma(const Chart& chart, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd d = x - y;
  return 0.5 * d.dot(chart.g_contra * d);
}

namespace {

// Inverts covariant coordinates for flat coordinate-backed spaces:
// x_i(P) = (Pi - P0)^T g (P - P0) is linear in P.
struct FlatInverter {
  bool available = false;
  Eigen::MatrixXd system;  // rows (Pi-P0)^T g
  Eigen::VectorXd origin;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;

  static FlatInverter make(const SigmaSpace& space, const Chart& chart) {
    FlatInverter inv;
    const Eigen::MatrixXd* g = space.flat_metric();
    if (!g) return inv;
    int n = chart.order();
    if (space.dimension() != n) return inv;
    if (!chart.basis[0].is_coords()) return inv;
    inv.origin = chart.basis[0].coords();
    inv.system.resize(n, n);
    for (int i = 0; i < n; ++i)
      inv.system.row(i) =
          ((chart.basis[static_cast<std::size_t>(i) + 1].coords() - inv.origin).transpose() * (*g));
    inv.lu.compute(inv.system);
    inv.available = true;
    return inv;
  }

  Eigen::VectorXd invert(const Eigen::VectorXd& coords) const {
    return origin + lu.solve(coords);
  }
};

}  // namespace

EuclidReport check_conditions(const SigmaSpace& space, const Chart& chart,
                              const std::vector<Point>& samples,
                              const std::vector<std::pair<Point, Point>>& pairs,
                              int grid_per_axis, double tol) {
  EuclidReport report;
  report.dimension_found = chart.order();
  report.witness = chart.basis;

  // Condition I: sampled points extend the witness basis with F_{n+1} = 0.
  {
    detail::TubeBasisContext ctx = detail::make_tube_context(space, chart.basis);
    std::vector<double> res(samples.size());
    parallel_for(static_cast<long long>(samples.size()), [&](long long i) {
      res[static_cast<std::size_t>(i)] =
          std::abs(detail::tube_residual(space, ctx, samples[static_cast<std::size_t>(i)]));
    });
    for (double r : res) report.cond1.max_residual = std::max(report.cond1.max_residual, r);
    report.cond1.checked = static_cast<long>(samples.size());
    report.cond1.pass = report.cond1.max_residual <= scaled_tol(tol, 1.0);
  }

  // Condition II: sigma reproduced by the rectilinear form on sampled pairs.
  {
    std::vector<double> res(pairs.size());
    parallel_for(static_cast<long long>(pairs.size()), [&](long long i) {
      const auto& pr = pairs[static_cast<std::size_t>(i)];
      double direct = space.sigma(pr.first, pr.second);
      double recon = reconstruct_sigma(chart, covariant_coordinates(space, chart, pr.first),
                                       covariant_coordinates(space, chart, pr.second));
      res[static_cast<std::size_t>(i)] =
          std::abs(direct - recon) / std::max(1.0, std::abs(direct));
    });
    for (double r : res) report.cond2.max_residual = std::max(report.cond2.max_residual, r);
    report.cond2.checked = static_cast<long>(pairs.size());
    report.cond2.pass = report.cond2.max_residual <= scaled_tol(tol, 1.0);
  }

  // Condition III: injectivity of the coordinate map on samples, and a grid
  // round-trip through the linear inverse where the space admits one.
  {
    std::vector<Eigen::VectorXd> coords(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
      coords[i] = covariant_coordinates(space, chart, samples[i]);

    bool injective = true;
    for (std::size_t i = 0; i < samples.size() && injective; ++i) {
      for (std::size_t k = i + 1; k < samples.size(); ++k) {
        if (samples[i].same_point(samples[k])) continue;
        double scale = std::max(
            {1.0, coords[i].lpNorm<Eigen::Infinity>(), coords[k].lpNorm<Eigen::Infinity>()});
        if ((coords[i] - coords[k]).lpNorm<Eigen::Infinity>() <= scaled_tol(tol, scale)) {
          injective = false;
          break;
        }
      }
    }

    FlatInverter inverter = FlatInverter::make(space, chart);
    double max_roundtrip = 0.0;
    long grid_checked = 0;
    if (inverter.available && grid_per_axis >= 2 && !coords.empty()) {
      int n = chart.order();
      Eigen::VectorXd lo = coords[0], hi = coords[0];
      for (const auto& c : coords) {
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
      }
      GridSpec grid;
      grid.lo = lo;
      grid.hi = hi;
      grid.counts.assign(static_cast<std::size_t>(n), grid_per_axis);
      long long total = grid.total();
      for (long long idx = 0; idx < total; ++idx) {
        Eigen::VectorXd target = grid.point(idx);
        Eigen::VectorXd p = inverter.invert(target);
        Eigen::VectorXd back =
            covariant_coordinates(space, chart, Point::Coords(p));
        double scale = std::max(1.0, target.lpNorm<Eigen::Infinity>());
        max_roundtrip =
            std::max(max_roundtrip, (back - target).lpNorm<Eigen::Infinity>() / scale);
        ++grid_checked;
      }
      report.cond3_surjectivity = "verified";
    } else {
      report.cond3_surjectivity = "not-assessable";
    }
    report.cond3.max_residual = max_roundtrip;
    report.cond3.checked = static_cast<long>(samples.size()) + grid_checked;
    report.cond3.pass = injective && (report.cond3_surjectivity == "not-assessable" ||
                                      max_roundtrip <= scaled_tol(tol, 1.0));
  }

  return report;
}

}  // namespace sigmageo
