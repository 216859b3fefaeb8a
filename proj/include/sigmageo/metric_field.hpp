#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sigmageo/expr.hpp"

namespace sigmageo {

// A coordinate-dependent metric tensor g_ik(x), symmetric and nondegenerate
// wherever it is evaluated. Optional domain data lets the geodesic solver
// handle excluded regions: `inside` tests membership, `project` pulls a stray
// point back to the feasible set, and `boundary_normal` returns the outward
// feasible normal for points sitting on the boundary.
struct MetricField {
  int dim = 0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> g;
  // Optional analytic derivatives result[a] = d g / d x^a; central differences
  // are used when absent.
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> dg;
  std::function<bool(const Eigen::VectorXd&)> inside;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> project;
  std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)> boundary_normal;
  std::string source;  // "constant", "sphere", "conformal", "punctured", "expr"

  bool has_domain() const { return static_cast<bool>(project); }
};

// Constant metric; geodesics are straight chords.
MetricField flat_metric(Eigen::MatrixXd g0);

// Radius-R 2-sphere in polar coordinates (theta, phi): g = R^2 diag(1, sin^2 theta).
MetricField sphere_metric(double radius);

// Conformally flat metric g = (1 + strength |x|^2) I.
MetricField conformal_metric(int dim, double strength);

// Euclidean plane with the open disk |x| < a removed. Projection pushes
// interior points radially back onto the circle.
MetricField punctured_metric(double hole_radius);

// Metric from parsed component expressions (row-major; symmetric completion
// done by the caller). Evaluation faults surface as EvalError.
MetricField expr_metric(int dim, std::vector<std::vector<Expr>> components);

}  // namespace sigmageo
