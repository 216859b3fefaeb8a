// Boundary-value geodesics by discrete energy minimization.
//
// The energy of a node polyline x_0..x_m with fixed endpoints and uniform
// parameter grid is
//   E = sum_j g(mid_j)(dx_j, dx_j) / dtau,
// whose minimizer is the constant-speed geodesic. Minimization is
// quasi-Newton (L-BFGS) over the interior nodes with straight-chord
// initialization and node-doubling continuation. Domains with a projector
// (the punctured plane) are handled by projecting nodes after every step and
// measuring convergence through the projected gradient.

#include "sigmageo/geodesic.hpp"

#include <Eigen/LU>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

#include "sigmageo/errors.hpp"

namespace sigmageo {

namespace {

Eigen::MatrixXd metric_at(const MetricField& metric, const Eigen::VectorXd& x) {
  try {
    return metric.g(x);
  } catch (const EvalError& e) {
    throw ChartBoundaryError(std::string("metric undefined at iterate: ") + e.what());
  }
}

// d g / d x^alpha at x: analytic when the field provides it, central
// differences otherwise.
std::vector<Eigen::MatrixXd> metric_derivatives(const MetricField& metric,
                                                const Eigen::VectorXd& x) {
  if (metric.dg) return metric.dg(x);
  int n = metric.dim;
  double h = 1e-6 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n));
  Eigen::VectorXd xp = x, xm = x;
  for (int a = 0; a < n; ++a) {
    xp[a] = x[a] + h;
    xm[a] = x[a] - h;
    dg[static_cast<std::size_t>(a)] = (metric_at(metric, xp) - metric_at(metric, xm)) / (2.0 * h);
    xp[a] = x[a];
    xm[a] = x[a];
  }
  return dg;
}

bool metric_is_constant(const MetricField& metric) {
  return metric.source == "constant" || metric.source == "punctured";
}

// Discrete path with fixed endpoints; variables are the interior nodes
// flattened into one vector.
class EnergyModel {
 public:
  EnergyModel(const MetricField& metric, Eigen::VectorXd x0, Eigen::VectorXd x1, int segments)
      : metric_(metric),
        x0_(std::move(x0)),
        x1_(std::move(x1)),
        m_(segments),
        dim_(metric.dim),
        constant_(metric_is_constant(metric)) {}

  int variables() const { return (m_ - 1) * dim_; }

  Eigen::VectorXd node(const Eigen::VectorXd& z, int j) const {
    if (j == 0) return x0_;
    if (j == m_) return x1_;
    return z.segment((j - 1) * dim_, dim_);
  }

  Eigen::VectorXd chord_init() const {
    Eigen::VectorXd z(variables());
    for (int j = 1; j < m_; ++j) {
      double t = static_cast<double>(j) / m_;
      z.segment((j - 1) * dim_, dim_) = x0_ + t * (x1_ - x0_);
    }
    return z;
  }

  double energy(const Eigen::VectorXd& z, Eigen::VectorXd* grad) const {
    double dtau = 1.0 / m_;
    double total = 0.0;
    if (grad) grad->setZero(variables());
    for (int j = 0; j < m_; ++j) {
      Eigen::VectorXd a = node(z, j);
      Eigen::VectorXd b = node(z, j + 1);
      Eigen::VectorXd dx = b - a;
      Eigen::VectorXd mid = 0.5 * (a + b);
      Eigen::MatrixXd g = metric_at(metric_, mid);
      Eigen::VectorXd gdx = g * dx;
      total += dx.dot(gdx) / dtau;
      if (!grad) continue;
      std::vector<Eigen::MatrixXd> dg;
      if (!constant_) dg = metric_derivatives(metric_, mid);
      for (int alpha = 0; alpha < dim_; ++alpha) {
        double quad_term =
            constant_ ? 0.0 : 0.5 * dx.dot(dg[static_cast<std::size_t>(alpha)] * dx);
        if (j >= 1)
          (*grad)[(j - 1) * dim_ + alpha] += (-2.0 * gdx[alpha] + quad_term) / dtau;
        if (j + 1 <= m_ - 1)
          (*grad)[j * dim_ + alpha] += (2.0 * gdx[alpha] + quad_term) / dtau;
      }
    }
    return total;
  }

  // Polyline length (midpoint metric) and the sign of the accumulated
  // quadratic form; indefinite metrics report the magnitude.
  std::pair<double, double> length_and_sign(const Eigen::VectorXd& z) const {
    double len = 0.0;
    double qsum = 0.0;
    for (int j = 0; j < m_; ++j) {
      Eigen::VectorXd a = node(z, j);
      Eigen::VectorXd b = node(z, j + 1);
      Eigen::VectorXd dx = b - a;
      Eigen::MatrixXd g = metric_at(metric_, 0.5 * (a + b));
      double q = dx.dot(g * dx);
      qsum += q;
      len += std::sqrt(std::abs(q));
    }
    return {len, qsum >= 0.0 ? 1.0 : -1.0};
  }

  Eigen::VectorXd project(const Eigen::VectorXd& z, bool* changed) const {
    if (changed) *changed = false;
    if (!metric_.project) {
      if (metric_.inside) {
        for (int j = 1; j < m_; ++j)
          if (!metric_.inside(node(z, j)))
            throw ChartBoundaryError("iterate left the chart domain at node " + std::to_string(j));
      }
      return z;
    }
    Eigen::VectorXd out = z;
    for (int j = 1; j < m_; ++j) {
      Eigen::VectorXd p = node(z, j);
      Eigen::VectorXd q = metric_.project(p);
      if (q != p) {
        out.segment((j - 1) * dim_, dim_) = q;
        if (changed) *changed = true;
      }
    }
    return out;
  }

  // Gradient with infeasible normal components removed at active nodes.
  Eigen::VectorXd projected_gradient(const Eigen::VectorXd& z, const Eigen::VectorXd& g) const {
    if (!metric_.boundary_normal) return g;
    Eigen::VectorXd pg = g;
    for (int j = 1; j < m_; ++j) {
      Eigen::VectorXd p = node(z, j);
      std::optional<Eigen::VectorXd> normal = metric_.boundary_normal(p);
      if (!normal) continue;
      auto block = pg.segment((j - 1) * dim_, dim_);
      double radial = normal->dot(block);
      if (radial > 0.0) block -= radial * (*normal);
    }
    return pg;
  }

  // Step direction with inward normal components removed at active nodes, so
  // z + t*d stays feasible to first order.
  Eigen::VectorXd feasible_direction(const Eigen::VectorXd& z, Eigen::VectorXd d) const {
    if (!metric_.boundary_normal) return d;
    for (int j = 1; j < m_; ++j) {
      Eigen::VectorXd p = node(z, j);
      std::optional<Eigen::VectorXd> normal = metric_.boundary_normal(p);
      if (!normal) continue;
      auto block = d.segment((j - 1) * dim_, dim_);
      double radial = normal->dot(block);
      if (radial < 0.0) block -= radial * (*normal);
    }
    return d;
  }

  const MetricField& metric() const { return metric_; }
  int segments() const { return m_; }
  int dim() const { return dim_; }

 private:
  const MetricField& metric_;
  Eigen::VectorXd x0_, x1_;
  int m_;
  int dim_;
  bool constant_;
};

struct MinimizeResult {
  Eigen::VectorXd z;
  bool converged = false;
  int iterations = 0;
};

// Inverse of the 1D second-difference operator over the interior nodes,
// applied per coordinate. This is the exact Hessian of the flat unit-metric
// energy up to the 2/dtau factor, so it removes the grid-size conditioning.
class LaplacianPreconditioner {
 public:
  LaplacianPreconditioner(int segments, int dim) : m_(segments), dim_(dim) {
    int n = m_ - 1;
    upper_.resize(static_cast<std::size_t>(n));
    double diag = 2.0;
    upper_[0] = -1.0 / diag;
    for (int i = 1; i < n; ++i) upper_[static_cast<std::size_t>(i)] = -1.0 / (2.0 + upper_[static_cast<std::size_t>(i - 1)]);
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& q) const {
    int n = m_ - 1;
    Eigen::VectorXd out(q.size());
    double dtau = 1.0 / m_;
    for (int a = 0; a < dim_; ++a) {
      // Thomas sweep on the tridiagonal (-1, 2, -1) system
      std::vector<double> rhs(static_cast<std::size_t>(n));
      rhs[0] = q[a] / 2.0;
      for (int i = 1; i < n; ++i)
        rhs[static_cast<std::size_t>(i)] =
            (q[i * dim_ + a] + rhs[static_cast<std::size_t>(i - 1)]) /
            (2.0 + upper_[static_cast<std::size_t>(i - 1)]);
      out[(n - 1) * dim_ + a] = rhs[static_cast<std::size_t>(n - 1)];
      for (int i = n - 2; i >= 0; --i)
        out[i * dim_ + a] = rhs[static_cast<std::size_t>(i)] -
                            upper_[static_cast<std::size_t>(i)] * out[(i + 1) * dim_ + a];
    }
    return out * (dtau / 2.0);
  }

 private:
  int m_;
  int dim_;
  std::vector<double> upper_;
};

MinimizeResult lbfgs_minimize(const EnergyModel& model, Eigen::VectorXd z0, double gtol,
                              int max_iter) {
  constexpr int kMemory = 10;
  constexpr double kArmijo = 1e-4;

  MinimizeResult result;
  bool projected_any = false;
  Eigen::VectorXd z = model.project(z0, &projected_any);
  if (model.variables() == 0) {
    result.z = z;
    result.converged = true;
    return result;
  }

  Eigen::VectorXd grad(model.variables());
  double energy = model.energy(z, &grad);
  std::deque<Eigen::VectorXd> mem_s, mem_y;
  LaplacianPreconditioner precond(model.segments(), model.dim());

  // Stationarity below the energy's own rounding cannot be certified, so the
  // gradient test is floored at sqrt(machine epsilon) relative to the energy.
  const double grad_floor = std::sqrt(std::numeric_limits<double>::epsilon());

  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::VectorXd pg = model.projected_gradient(z, grad);
    double scale = std::max(1.0, std::abs(energy));
    double pg_tol = std::max(gtol, grad_floor) * scale;
    if (pg.lpNorm<Eigen::Infinity>() <= pg_tol) {
      result.z = z;
      result.converged = true;
      result.iterations = iter;
      return result;
    }

    // two-loop recursion on the projected gradient, preconditioned by the
    // flat-energy Hessian
    Eigen::VectorXd d = -pg;
    if (!mem_s.empty()) {
      std::vector<double> alpha(mem_s.size());
      for (int i = static_cast<int>(mem_s.size()) - 1; i >= 0; --i) {
        double rho = 1.0 / mem_y[static_cast<std::size_t>(i)].dot(mem_s[static_cast<std::size_t>(i)]);
        alpha[static_cast<std::size_t>(i)] = rho * mem_s[static_cast<std::size_t>(i)].dot(d);
        d -= alpha[static_cast<std::size_t>(i)] * mem_y[static_cast<std::size_t>(i)];
      }
      const Eigen::VectorXd& s_last = mem_s.back();
      const Eigen::VectorXd& y_last = mem_y.back();
      Eigen::VectorXd my = precond.apply(y_last);
      d = precond.apply(d) * (s_last.dot(y_last) / y_last.dot(my));
      for (std::size_t i = 0; i < mem_s.size(); ++i) {
        double rho = 1.0 / mem_y[i].dot(mem_s[i]);
        double beta = rho * mem_y[i].dot(d);
        d += (alpha[i] - beta) * mem_s[i];
      }
    } else {
      d = precond.apply(d);
    }
    d = model.feasible_direction(z, std::move(d));
    double slope = d.dot(grad);
    if (slope >= 0.0) {  // not a descent direction, fall back to steepest
      d = -pg;
      slope = d.dot(grad);
    }

    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd z_new, grad_new(model.variables());
    double energy_new = 0.0;
    for (int back = 0; back < 60; ++back) {
      bool changed = false;
      z_new = model.project(z + t * d, &changed);
      energy_new = model.energy(z_new, &grad_new);
      if (energy_new <= energy + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // line search exhausted at machine scale; report what the gradient says
      result.z = z;
      result.converged = pg.lpNorm<Eigen::Infinity>() <= 1e2 * pg_tol;
      result.iterations = iter + 1;
      return result;
    }

    {
      Eigen::VectorXd s = z_new - z;
      Eigen::VectorXd y = grad_new - grad;
      double sy = s.dot(y);
      if (sy > 1e-12 * s.norm() * y.norm()) {
        mem_s.push_back(std::move(s));
        mem_y.push_back(std::move(y));
        if (static_cast<int>(mem_s.size()) > kMemory) {
          mem_s.pop_front();
          mem_y.pop_front();
        }
      }
    }
    z = std::move(z_new);
    grad = std::move(grad_new);
    energy = energy_new;
    result.iterations = iter + 1;
  }

  result.z = z;
  result.converged = false;
  return result;
}

// Breaks the over/under tie when the initial chord collapses onto the hole
// boundary: pushes projected nodes tangentially toward a fixed side of the
// chord. Without this the symmetric configuration sits on a saddle.
void nudge_active_nodes(const EnergyModel& model, const MetricField& metric,
                        const Eigen::VectorXd& x0, const Eigen::VectorXd& x1,
                        Eigen::VectorXd& z) {
  if (!metric.boundary_normal || model.dim() != 2) return;
  Eigen::VectorXd chord = x1 - x0;
  Eigen::VectorXd side(2);
  side << -chord[1], chord[0];
  double norm = side.norm();
  if (norm == 0.0) {
    side << 0.0, 1.0;
  } else {
    side /= norm;
  }
  for (int j = 1; j < model.segments(); ++j) {
    auto block = z.segment((j - 1) * model.dim(), model.dim());
    Eigen::VectorXd p = block;
    std::optional<Eigen::VectorXd> normal = metric.boundary_normal(p);
    if (!normal) continue;
    Eigen::VectorXd tangent(2);
    tangent << -(*normal)[1], (*normal)[0];
    double along = tangent.dot(side);
    if (along == 0.0) {
      tangent = side;
    } else if (along < 0.0) {
      tangent = -tangent;
    }
    block += 0.05 * tangent;
    if (metric.project) block = metric.project(block);
  }
}

Eigen::VectorXd refine_nodes(const EnergyModel& coarse, const Eigen::VectorXd& z_coarse,
                             int fine_segments, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& x1) {
  int dim = coarse.dim();
  int mc = coarse.segments();
  Eigen::VectorXd z((fine_segments - 1) * dim);
  for (int j = 1; j < fine_segments; ++j) {
    double t = static_cast<double>(j) / fine_segments * mc;  // position on the coarse grid
    int k = static_cast<int>(t);
    if (k >= mc) k = mc - 1;
    double frac = t - k;
    Eigen::VectorXd a = coarse.node(z_coarse, k);
    Eigen::VectorXd b = coarse.node(z_coarse, k + 1);
    z.segment((j - 1) * dim, dim) = a + frac * (b - a);
  }
  (void)x0;
  (void)x1;
  return z;
}

}  // namespace

std::vector<Eigen::MatrixXd> christoffel(const MetricField& metric, const Eigen::VectorXd& x) {
  int n = metric.dim;
  Eigen::MatrixXd g = metric_at(metric, x);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible())
    throw SingularMetricError("metric is singular at the evaluation point");
  Eigen::MatrixXd ginv = lu.inverse();
  std::vector<Eigen::MatrixXd> dg = metric_derivatives(metric, x);

  std::vector<Eigen::MatrixXd> result(static_cast<std::size_t>(n),
                                      Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j)
          sum += ginv(i, j) * (dg[static_cast<std::size_t>(l)](k, j) +
                               dg[static_cast<std::size_t>(k)](l, j) -
                               dg[static_cast<std::size_t>(j)](k, l));
        result[static_cast<std::size_t>(i)](k, l) = 0.5 * sum;
      }
  return result;
}

double path_length(const MetricField& metric, const std::vector<Eigen::VectorXd>& nodes) {
  double len = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    Eigen::VectorXd dx = nodes[j + 1] - nodes[j];
    Eigen::MatrixXd g = metric_at(metric, 0.5 * (nodes[j] + nodes[j + 1]));
    len += std::sqrt(std::abs(dx.dot(g * dx)));
  }
  return len;
}

GeodesicPath geodesic_between(const MetricField& metric, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& x2, const SolverOptions& opts) {
  if (x.size() != metric.dim || x2.size() != metric.dim)
    throw DomainMismatchError("endpoint arity does not match the metric dimension");
  if (metric.inside && (!metric.inside(x) || !metric.inside(x2)))
    throw ChartBoundaryError("geodesic endpoint lies outside the chart domain");
  if (opts.nodes < 1) throw ConfigError("solver needs at least one segment");

  GeodesicPath path;
  int target = opts.nodes;
  if (x == x2) {
    path.nodes.assign(static_cast<std::size_t>(target) + 1, x);
    path.params = Eigen::VectorXd::LinSpaced(target + 1, 0.0, 1.0);
    path.converged = true;
    return path;
  }

  // continuation ladder: 8, 16, ... up to the requested node count
  std::vector<int> levels;
  for (int m = target >= 8 ? 8 : target; m < target; m *= 2) levels.push_back(m);
  levels.push_back(target);

  Eigen::VectorXd z;
  double prev_length = 0.0;
  int prev_segments = 0;
  bool have_prev_level = false;
  double length = 0.0, sign = 1.0;
  bool converged = true;
  int iterations = 0;

  for (std::size_t li = 0; li < levels.size(); ++li) {
    int m = levels[li];
    EnergyModel model(metric, x, x2, m);
    if (li == 0) {
      z = model.chord_init();
      bool changed = false;
      z = model.project(z, &changed);
      if (changed) nudge_active_nodes(model, metric, x, x2, z);
    } else {
      EnergyModel coarse(metric, x, x2, levels[li - 1]);
      z = refine_nodes(coarse, z, m, x, x2);
      bool changed = false;
      z = model.project(z, &changed);
    }
    MinimizeResult res = lbfgs_minimize(model, z, opts.gtol, opts.max_iter);
    z = res.z;
    iterations += res.iterations;
    converged = converged && res.converged;
    if (li + 1 == levels.size()) {
      auto [len, sg] = model.length_and_sign(z);
      length = len;
      sign = sg;
    } else if (li + 2 == levels.size()) {
      auto [len, sg] = model.length_and_sign(z);
      prev_length = len;
      prev_segments = m;
      have_prev_level = true;
      (void)sg;
    }
  }

  EnergyModel final_model(metric, x, x2, target);
  path.nodes.reserve(static_cast<std::size_t>(target) + 1);
  for (int j = 0; j <= target; ++j) path.nodes.push_back(final_model.node(z, j));
  path.params = Eigen::VectorXd::LinSpaced(target + 1, 0.0, 1.0);
  path.length = length;
  path.converged = converged;
  path.iterations = iterations;

  // Richardson step: the polyline length error is O(1/m^2) with a smooth
  // coefficient, so two levels give an O(1/m^4) estimate.
  if (opts.refine_length && have_prev_level && prev_segments != target) {
    double r = static_cast<double>(target) / prev_segments;
    path.refined_length = length + (length - prev_length) / (r * r - 1.0);
  } else {
    path.refined_length = length;
  }
  (void)sign;
  return path;
}

double sigma_riemannian(const MetricField& metric, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x2, const SolverOptions& opts) {
  if (x == x2) return 0.0;
  GeodesicPath path = geodesic_between(metric, x, x2, opts);
  if (!path.converged)
    throw NonConvergenceError("geodesic solver did not converge between the given points");
  double len = path.refined_length;

  // keep the sign convention of indefinite flat metrics
  EnergyModel model(metric, x, x2, 1);
  Eigen::VectorXd dx = x2 - x;
  double q = dx.dot(metric_at(metric, 0.5 * (x + x2)) * dx);
  double sign = 1.0;
  if (metric_is_constant(metric) && q < 0.0) sign = -1.0;
  (void)model;
  return 0.5 * sign * len * len;
}

}  // namespace sigmageo
