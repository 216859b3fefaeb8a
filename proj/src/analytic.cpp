// Closed-form world functions: flat spaces of arbitrary constant metric, the
// 2-sphere, and the punctured plane.

#include "sigmageo/analytic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>

#include "sigmageo/errors.hpp"
#include "sigmageo/geodesic.hpp"
#include "sigmageo/metric_field.hpp"

namespace sigmageo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp_unit(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

// Distance from the origin to the segment [a, b].
double origin_segment_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd d = b - a;
  double dd = d.squaredNorm();
  if (dd == 0.0) return a.norm();
  double t = -a.dot(d) / dd;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return (a + t * d).norm();
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Euclidean: return "euclidean";
    case SpaceKind::ConstantMetric: return "constant_metric";
    case SpaceKind::PseudoEuclidean: return "pseudo_euclidean";
    case SpaceKind::Sphere: return "sphere";
    case SpaceKind::PuncturedPlane: return "punctured_plane";
    case SpaceKind::Finite: return "finite";
    case SpaceKind::RiemannianExpr: return "riemannian_expr";
  }
  return "unknown";
}

std::string to_string(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::Timelike: return "timelike";
    case IntervalKind::Spacelike: return "spacelike";
    case IntervalKind::Null: return "null";
  }
  return "unknown";
}

FlatSpace::FlatSpace(SpaceKind kind, Eigen::MatrixXd g) : kind_(kind), g_(std::move(g)) {
  if (g_.rows() == 0 || g_.rows() != g_.cols())
    throw ConfigError("flat metric must be a nonempty square matrix");
  for (Eigen::Index i = 0; i < g_.rows(); ++i)
    for (Eigen::Index k = i + 1; k < g_.cols(); ++k) {
      double scale = std::max(1.0, std::abs(g_(i, k)));
      if (std::abs(g_(i, k) - g_(k, i)) > kTolFloor * scale)
        throw ConfigError("flat metric must be symmetric");
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g_);
  if (!lu.isInvertible()) throw ConfigError("flat metric must have nonzero determinant");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g_);
  double thr = kTolFloor * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int pos = 0, neg = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > thr) ++pos;
    if (es.eigenvalues()[i] < -thr) ++neg;
  }
  indefinite_ = pos > 0 && neg > 0;
}

double FlatSpace::sigma(const Point& p, const Point& q) const {
  check_coords(p);
  check_coords(q);
  Eigen::VectorXd d = p.coords() - q.coords();
  return 0.5 * d.dot(g_ * d);
}

SphereSpace::SphereSpace(double radius) : radius_(radius) {
  if (!(radius > 0.0)) throw ConfigError("sphere radius must be positive");
}

double sphere_sigma(double radius, const Eigen::VectorXd& x, const Eigen::VectorXd& x2,
                    bool* antipodal) {
  double theta = x[0], phi = x[1];
  double theta2 = x2[0], phi2 = x2[1];
  double c = std::cos(theta) * std::cos(theta2) +
             std::sin(theta) * std::sin(theta2) * std::cos(phi - phi2);
  double d = std::acos(clamp_unit(c));
  if (antipodal) *antipodal = kPi - d <= 1e-9;
  double len = radius * d;
  return 0.5 * len * len;
}

double SphereSpace::sigma(const Point& p, const Point& q) const {
  check_coords(p);
  check_coords(q);
  return sphere_sigma(radius_, p.coords(), q.coords());
}

bool SphereSpace::is_antipodal(const Point& p, const Point& q, double tol) const {
  check_coords(p);
  check_coords(q);
  double full = 0.5 * (kPi * radius_) * (kPi * radius_);
  return std::abs(sphere_sigma(radius_, p.coords(), q.coords()) - full) <=
         scaled_tol(tol, full);
}

PuncturedPlaneSpace::PuncturedPlaneSpace(double hole_radius) : hole_radius_(hole_radius) {
  if (!(hole_radius > 0.0)) throw ConfigError("hole radius must be positive");
}

bool PuncturedPlaneSpace::contains(const Eigen::VectorXd& x) const {
  return x.size() == 2 && x.norm() >= hole_radius_;
}

double punctured_plane_sigma(double a, const Eigen::VectorXd& x, const Eigen::VectorXd& x2) {
  double rx = x.norm();
  double ry = x2.norm();
  if (rx < a || ry < a)
    throw PointInsideHoleError("point lies inside the hole of radius " + std::to_string(a));
  Eigen::VectorXd d = x2 - x;
  if (origin_segment_distance(x, x2) >= a) return 0.5 * d.squaredNorm();
  // Shadowed pair: tangent from x to the circle, arc, tangent to x2. The two
  // ways around have arc angles theta12 -+ (alpha + alpha2); theta12 <= pi
  // picks the shorter one, ties share the same length.
  double t1 = std::sqrt(rx * rx - a * a);
  double t2 = std::sqrt(ry * ry - a * a);
  double theta12 = std::acos(clamp_unit(x.dot(x2) / (rx * ry)));
  double alpha1 = std::acos(clamp_unit(a / rx));
  double alpha2 = std::acos(clamp_unit(a / ry));
  double arc = theta12 - alpha1 - alpha2;
  if (arc < 0.0) arc = 0.0;  // grazing segment, tangent lengths already add up
  double len = t1 + t2 + a * arc;
  return 0.5 * len * len;
}

double PuncturedPlaneSpace::sigma(const Point& p, const Point& q) const {
  check_coords(p);
  check_coords(q);
  return punctured_plane_sigma(hole_radius_, p.coords(), q.coords());
}

namespace {

// World function backed by the geodesic solver; used for riemannian_expr.
class SolverSigmaSpace : public SigmaSpace {
 public:
  SolverSigmaSpace(MetricField metric, SolverOptions opts)
      : metric_(std::move(metric)), opts_(opts) {}

  double sigma(const Point& p, const Point& q) const override {
    check_coords(p);
    check_coords(q);
    if (p.coords() == q.coords()) return 0.0;
    return sigma_riemannian(metric_, p.coords(), q.coords(), opts_);
  }

  int dimension() const override { return metric_.dim; }

  bool contains(const Eigen::VectorXd& x) const override {
    return metric_.inside ? metric_.inside(x) : true;
  }

 private:
  MetricField metric_;
  SolverOptions opts_;
};

}  // namespace

std::shared_ptr<SigmaSpace> make_space(const SpaceSpec& spec) {
  switch (spec.kind) {
    case SpaceKind::Euclidean: {
      if (spec.dim < 1) throw ConfigError("euclidean space needs dim >= 1");
      return std::make_shared<FlatSpace>(spec.kind,
                                         Eigen::MatrixXd::Identity(spec.dim, spec.dim));
    }
    case SpaceKind::ConstantMetric:
      return std::make_shared<FlatSpace>(spec.kind, spec.metric);
    case SpaceKind::PseudoEuclidean: {
      if (spec.dim < 2) throw ConfigError("pseudo_euclidean space needs dim >= 2");
      Eigen::MatrixXd g = -Eigen::MatrixXd::Identity(spec.dim, spec.dim);
      g(0, 0) = 1.0;
      return std::make_shared<FlatSpace>(spec.kind, g);
    }
    case SpaceKind::Sphere:
      return std::make_shared<SphereSpace>(spec.sphere_radius);
    case SpaceKind::PuncturedPlane:
      return std::make_shared<PuncturedPlaneSpace>(spec.hole_radius);
    case SpaceKind::Finite:
      return std::make_shared<FiniteSigmaSpace>(spec.sigma_table);
    case SpaceKind::RiemannianExpr: {
      if (spec.dim < 1) throw ConfigError("riemannian_expr space needs dim >= 1");
      std::vector<std::vector<Expr>> parsed;
      parsed.reserve(spec.g_exprs.size());
      for (const auto& row : spec.g_exprs) {
        std::vector<Expr> prow;
        prow.reserve(row.size());
        for (const auto& src : row) prow.push_back(Expr::parse(src, spec.dim));
        parsed.push_back(std::move(prow));
      }
      return std::make_shared<SolverSigmaSpace>(expr_metric(spec.dim, std::move(parsed)),
                                                SolverOptions{});
    }
  }
  throw ConfigError("unknown space kind");
}

IntervalKind classify_interval(const SigmaSpace& space, const Point& p, const Point& q,
                               double tol) {
  double s = space.sigma(p, q);
  double threshold = scaled_tol(tol, std::max(1.0, std::abs(s)));
  if (s > threshold) return IntervalKind::Timelike;
  if (s < -threshold) return IntervalKind::Spacelike;
  return IntervalKind::Null;
}

}  // namespace sigmageo
