#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigmageo/metric_field.hpp"

namespace sigmageo {

struct SolverOptions {
  int nodes = 64;       // segments of the discrete path
  // Projected-gradient sup-norm tolerance relative to the energy scale. The
  // length error of a converged path is second order in this, so 1e-6 keeps
  // the length at quadrature accuracy; values near 1e-8 sit at the energy's
  // rounding floor.
  double gtol = 1e-6;
  int max_iter = 2000;  // per continuation level
  bool refine_length = true;  // Richardson-extrapolate the length over the last two levels
};

// Discrete geodesic: m+1 nodes over a uniform parameter grid on [0,1].
// `length` is the plain polyline length functional of the nodes;
// `refined_length` carries the extrapolated estimate when enabled.
struct GeodesicPath {
  std::vector<Eigen::VectorXd> nodes;
  Eigen::VectorXd params;
  double length = 0.0;
  double refined_length = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Christoffel symbols gamma^i_kl = 1/2 g^{ij} (g_kj,l + g_lj,k - g_kl,j) with
// metric derivatives by central differences. result[i](k,l) = gamma^i_kl.
std::vector<Eigen::MatrixXd> christoffel(const MetricField& metric, const Eigen::VectorXd& x);

// Boundary-value geodesic by discrete energy minimization with fixed
// endpoints: quasi-Newton on the interior nodes, straight-chord
// initialization, node-doubling continuation. Domains with a projector are
// handled by projection; leaving a domain without one raises
// ChartBoundaryError. Non-convergence is reported through the flag.
GeodesicPath geodesic_between(const MetricField& metric, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& x2, const SolverOptions& opts = {});

// Half the squared geodesic length. Throws NonConvergenceError when the solver
// fails to converge.
double sigma_riemannian(const MetricField& metric, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x2, const SolverOptions& opts = {});

// Length functional of a node polyline under the metric (midpoint rule).
double path_length(const MetricField& metric, const std::vector<Eigen::VectorXd>& nodes);

}  // namespace sigmageo
