#include "sigmageo/metric_field.hpp"

#include <cmath>

#include "sigmageo/errors.hpp"

namespace sigmageo {

MetricField flat_metric(Eigen::MatrixXd g0) {
  MetricField m;
  m.dim = static_cast<int>(g0.rows());
  m.source = "constant";
  m.g = [g0 = std::move(g0)](const Eigen::VectorXd&) { return g0; };
  return m;
}

MetricField sphere_metric(double radius) {
  if (!(radius > 0.0)) throw ConfigError("sphere radius must be positive");
  MetricField m;
  m.dim = 2;
  m.source = "sphere";
  m.g = [radius](const Eigen::VectorXd& x) {
    Eigen::MatrixXd g(2, 2);
    double s = std::sin(x[0]);
    g << radius * radius, 0.0, 0.0, radius * radius * s * s;
    return g;
  };
  m.dg = [radius](const Eigen::VectorXd& x) {
    std::vector<Eigen::MatrixXd> d(2, Eigen::MatrixXd::Zero(2, 2));
    d[0](1, 1) = 2.0 * radius * radius * std::sin(x[0]) * std::cos(x[0]);
    return d;
  };
  return m;
}

MetricField conformal_metric(int dim, double strength) {
  if (dim < 1) throw ConfigError("conformal metric needs dim >= 1");
  MetricField m;
  m.dim = dim;
  m.source = "conformal";
  m.g = [dim, strength](const Eigen::VectorXd& x) {
    double factor = 1.0 + strength * x.squaredNorm();
    return Eigen::MatrixXd(factor * Eigen::MatrixXd::Identity(dim, dim));
  };
  m.dg = [dim, strength](const Eigen::VectorXd& x) {
    std::vector<Eigen::MatrixXd> d;
    d.reserve(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a)
      d.push_back(2.0 * strength * x[a] * Eigen::MatrixXd::Identity(dim, dim));
    return d;
  };
  return m;
}

MetricField punctured_metric(double hole_radius) {
  if (!(hole_radius > 0.0)) throw ConfigError("hole radius must be positive");
  MetricField m;
  m.dim = 2;
  m.source = "punctured";
  m.g = [](const Eigen::VectorXd&) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)); };
  double a = hole_radius;
  m.inside = [a](const Eigen::VectorXd& x) { return x.norm() >= a; };
  // Snap band: points hovering just outside the circle are retracted onto it,
  // which keeps the active set crisp for the solver's convergence test.
  m.project = [a](const Eigen::VectorXd& x) {
    double r = x.norm();
    if (r >= a * (1.0 + 1e-7)) return x;
    if (r == 0.0) {
      Eigen::VectorXd out(2);
      out << a, 0.0;
      return out;
    }
    return Eigen::VectorXd((a / r) * x);
  };
  m.boundary_normal = [a](const Eigen::VectorXd& x) -> std::optional<Eigen::VectorXd> {
    double r = x.norm();
    if (r > a * (1.0 + 1e-9) || r == 0.0) return std::nullopt;
    return Eigen::VectorXd(x / r);
  };
  return m;
}

MetricField expr_metric(int dim, std::vector<std::vector<Expr>> components) {
  if (static_cast<int>(components.size()) != dim)
    throw ConfigError("expression metric needs one row per dimension");
  for (int i = 0; i < dim; ++i)
    if (static_cast<int>(components[static_cast<std::size_t>(i)].size()) != dim)
      throw ConfigError("expression metric row " + std::to_string(i) + " has wrong arity");
  MetricField m;
  m.dim = dim;
  m.source = "expr";
  m.g = [dim, comps = std::move(components)](const Eigen::VectorXd& x) {
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) {
        double v = comps[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].eval(x);
        if (!std::isfinite(v))
          throw EvalError("metric component (" + std::to_string(i) + "," + std::to_string(k) +
                          ") is not finite");
        g(i, k) = v;
      }
    // enforce exact symmetry for downstream solvers
    g = 0.5 * (g + g.transpose()).eval();
    return g;
  };
  return m;
}

}  // namespace sigmageo
