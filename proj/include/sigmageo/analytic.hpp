#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "sigmageo/kernel.hpp"
#include "sigmageo/space.hpp"

namespace sigmageo {

enum class SpaceKind {
  Euclidean,
  ConstantMetric,
  PseudoEuclidean,
  Sphere,
  PuncturedPlane,
  Finite,
  RiemannianExpr,
};

std::string to_string(SpaceKind kind);

// In-memory form of a space configuration. Only the fields relevant to `kind`
// are read.
struct SpaceSpec {
  SpaceKind kind = SpaceKind::Euclidean;
  int dim = 0;
  Eigen::MatrixXd metric;        // constant_metric: symmetric, det != 0
  double sphere_radius = 1.0;    // sphere: R > 0
  double hole_radius = 1.0;      // punctured_plane: a > 0
  Eigen::MatrixXd sigma_table;   // finite
  std::vector<std::vector<std::string>> g_exprs;  // riemannian_expr, row-major
};

enum class IntervalKind { Timelike, Spacelike, Null };

std::string to_string(IntervalKind kind);

// Builds the closed-form evaluator for the requested kind. riemannian_expr
// spaces delegate to the geodesic solver with default options.
std::shared_ptr<SigmaSpace> make_space(const SpaceSpec& spec);

// Sign classification of sigma: Timelike if sigma > tol*scale, Spacelike if
// sigma < -tol*scale, Null otherwise.
IntervalKind classify_interval(const SigmaSpace& space, const Point& p, const Point& q,
                               double tol);

// World function of the Euclidean plane with the open disk |x| < a removed:
// straight-line sigma when the segment avoids the hole, otherwise half the
// squared tangent-arc-tangent length around the disk.
double punctured_plane_sigma(double a, const Eigen::VectorXd& x, const Eigen::VectorXd& x2);

// Great-circle world function of the radius-R 2-sphere in polar coordinates
// (theta, phi). `antipodal`, when given, is set when the pair is antipodal
// within tolerance (the geodesic is then non-unique but the length is not).
double sphere_sigma(double radius, const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                    bool* antipodal = nullptr);

// Flat space with constant metric matrix g: sigma = 1/2 (x-y)^T g (x-y).
class FlatSpace : public SigmaSpace {
 public:
  FlatSpace(SpaceKind kind, Eigen::MatrixXd g);

  double sigma(const Point& p, const Point& q) const override;
  int dimension() const override { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd* flat_metric() const override { return &g_; }
  SpaceKind kind() const { return kind_; }
  // true when the metric has both positive and negative eigenvalues
  bool indefinite() const { return indefinite_; }

 private:
  SpaceKind kind_;
  Eigen::MatrixXd g_;
  bool indefinite_;
};

class SphereSpace : public SigmaSpace {
 public:
  explicit SphereSpace(double radius);

  double sigma(const Point& p, const Point& q) const override;
  int dimension() const override { return 2; }
  double radius() const { return radius_; }
  bool is_antipodal(const Point& p, const Point& q, double tol) const;

 private:
  double radius_;
};

class PuncturedPlaneSpace : public SigmaSpace {
 public:
  explicit PuncturedPlaneSpace(double hole_radius);

  double sigma(const Point& p, const Point& q) const override;
  int dimension() const override { return 2; }
  bool contains(const Eigen::VectorXd& x) const override;
  double hole_radius() const { return hole_radius_; }

 private:
  double hole_radius_;
};

}  // namespace sigmageo
