#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigmageo/metric_field.hpp"
#include "sigmageo/space.hpp"

namespace sigmageo {

// Central-difference step sizes for first, mixed second and third sigma
// derivatives, scaled by the coordinate magnitude.
struct FdSteps {
  double h1 = 1e-5;
  double h2 = 1e-4;
  double h3 = 1e-3;

  static FdSteps defaults_for(const Eigen::VectorXd& x, const Eigen::VectorXd& x2);
};

// Two-point derivative data of the world function at (x, x'). Primed indices
// refer to x', unprimed to x. `mixed` holds sigma_{ik'}; `mixed_inv` holds
// sigma^{ik'} with sigma^{ik'} sigma_{lk'} = delta^i_l. The tangent-space
// metric G_ik, its inverse, Delta = G - g(x) and the parallel-transport
// operator -sigma_{il'} g^{l's'} are filled by tangent_metric.
struct TangentData {
  Eigen::VectorXd x;
  Eigen::VectorXd x2;
  double sigma_value = 0.0;
  Eigen::VectorXd grad_x;    // sigma_i
  Eigen::VectorXd grad_x2;   // sigma_{i'}
  Eigen::MatrixXd mixed;     // sigma_{ik'}
  Eigen::MatrixXd mixed_inv; // sigma^{ik'}
  double mixed_det = 0.0;
  bool mixed_invertible = false;
  Eigen::MatrixXd G;
  Eigen::MatrixXd G_inv;
  Eigen::MatrixXd Delta;
  Eigen::MatrixXd transport;
  bool full = false;
  FdSteps steps;
};

// Gradients and the mixed second derivative by central differences. The
// invertibility of sigma_{ik'} is recorded, not enforced.
TangentData sigma_derivatives(const SigmaSpace& space, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& x2, const FdSteps* steps = nullptr);

// Full tangent data: G_ik = sigma_{i,k} - sigma_{iks'} sigma^{ls'} sigma_l and
// Delta_ik = G_ik - g_ik(x). Throws SingularMixedError when sigma_{ik'} is not
// invertible.
TangentData tangent_metric(const SigmaSpace& space, const MetricField& metric,
                           const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                           const FdSteps* steps = nullptr);

struct ConeSolution {
  Eigen::VectorXd direction;  // unit vector at x
  double residual = 0.0;      // normalized collinearity residual
};

// Directions dx at x collinear to the direction u at x':
// (sigma_{il'} sigma_{ks'} - g_ik g_{l's'}) dx^i dx^k u^{l'} u^{s'} = 0.
struct ConeResult {
  Eigen::VectorXd x;
  Eigen::VectorXd x2;
  Eigen::VectorXd u_at_x2;     // given direction, normalized
  Eigen::VectorXd u_at_x;      // parallel-transported direction at x, normalized
  std::vector<ConeSolution> solutions;
  bool degenerate = false;     // every solution parallel to u_at_x
};

// Scans unit directions at x over a deterministic net of the given resolution,
// refines sign changes and tangential minima, and decides degeneracy by
// angular clustering (radius 1e-2) around the transported direction.
ConeResult collinearity_cone(const SigmaSpace& space, const MetricField& metric,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                             const Eigen::VectorXd& u, int resolution, double tol);

// Residuals of the world-function identities, all normalized dimensionless:
//   sq_norm:         sigma_l sigma^{lj'} sigma_{j'} = 2 sigma
//   along_geodesic:  (G_ik - g_ik) sigma^k = 0
//   metric_recovery: g_{l's'} = sigma_{il'} G^{ik} sigma_{ks'}
struct IdentityReport {
  double sigma_value = 0.0;
  double sq_norm = 0.0;
  double along_geodesic = 0.0;
  double metric_recovery = 0.0;
  double mixed_det = 0.0;
};

IdentityReport check_worldfunction_identities(const SigmaSpace& space, const MetricField& metric,
                                              const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                                              const FdSteps* steps = nullptr);

}  // namespace sigmageo
