#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigmageo/kernel.hpp"
#include "sigmageo/space.hpp"

namespace sigmageo {

struct MembershipResult {
  bool member = false;
  double residual = 0.0;  // value of the defining expression
  double tol_used = 0.0;  // effective threshold; member <=> |residual| <= tol_used
};

// Axis-aligned sampling grid, inclusive endpoints, row-major with axis 0
// slowest.
struct GridSpec {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  std::vector<int> counts;

  long long total() const;
  Eigen::VectorXd point(long long flat_index) const;
};

struct TubeSample {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> residuals;  // normalized tube residuals, |r| <= tol
  GridSpec grid;                  // empty counts for non-grid samples
};

// Sphere S(O;P): sigma(O,R) = sigma(O,P).
MembershipResult sphere_contains(const SigmaSpace& space, const Point& center,
                                 const Point& through, const Point& r, double tol);

// Circle cylinder C(P1,P2;P): equal triangle areas S_2 over the common axis,
// S_2 = 1/2 sqrt(F_2). Throws ImaginaryAreaError when F_2 < 0.
MembershipResult cylinder_contains(const SigmaSpace& space, const Point& p1, const Point& p2,
                                   const Point& through, const Point& r, double tol);

// Ellipsoid E(P1,P2;P): equal focal distance sums.
MembershipResult ellipsoid_contains(const SigmaSpace& space, const Point& f1, const Point& f2,
                                    const Point& through, const Point& r, double tol);

// Segment T_[P1P2]: rho(P1,R) + rho(P2,R) = rho(P1,P2).
MembershipResult segment_contains(const SigmaSpace& space, const Point& p1, const Point& p2,
                                  const Point& r, double tol);

// n-th order tube T(P^n): F_{n+1}(P^n, R) = 0, residual normalized to be
// dimensionless.
MembershipResult tube_contains(const SigmaSpace& space, const std::vector<Point>& basis,
                               const Point& r, double tol);

// Tube through Q0 collinear to P0P1: the collinearity residual of P0P1 and
// Q0R vanishes. Throws ZeroVectorError when r coincides with q0.
MembershipResult tube_through_point_contains(const SigmaSpace& space, const Point& p0,
                                             const Point& p1, const Point& q0, const Point& r,
                                             double tol);

// All grid points whose tube residual is within tol, in grid index order.
TubeSample sample_tube(const SigmaSpace& space, const std::vector<Point>& basis,
                       const GridSpec& grid, double tol);

// Union of segment samples over consecutive vertex pairs. Candidates are
// parametric chord points for coordinate spaces and all labels for finite
// spaces; only candidates passing segment_contains are kept.
TubeSample broken_tube(const SigmaSpace& space, const std::vector<Point>& vertices,
                       int per_segment_resolution, double tol);

namespace detail {

// Precomputed basis data shared by repeated tube residual evaluations.
struct TubeBasisContext {
  std::vector<Point> basis;
  double fn_abs = 0.0;     // |F_n(basis)|
  double basis_scale = 1.0;  // max(1, 2|sigma| over basis pairs)
  int order = 0;           // n
};

TubeBasisContext make_tube_context(const SigmaSpace& space, const std::vector<Point>& basis);
double tube_residual(const SigmaSpace& space, const TubeBasisContext& ctx, const Point& r);

}  // namespace detail

}  // namespace sigmageo
