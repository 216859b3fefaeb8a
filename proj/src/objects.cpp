// Membership predicates for the elementary geometric objects and tubes, plus
// the grid samplers.

#include "sigmageo/objects.hpp"

#include <cmath>

#include "sigmageo/errors.hpp"
#include "sigmageo/parallel.hpp"

namespace sigmageo {

namespace detail {

TubeBasisContext make_tube_context(const SigmaSpace& space, const std::vector<Point>& basis) {
  if (basis.size() < 2)
    throw DegenerateBasisError("tube basis needs at least two points");
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = i + 1; k < basis.size(); ++k)
      if (basis[i].same_point(basis[k]))
        throw DegenerateBasisError("tube basis contains a repeated point");
  TubeBasisContext ctx;
  ctx.basis = basis;
  ctx.order = static_cast<int>(basis.size()) - 1;
  ctx.basis_scale = 1.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = i + 1; k < basis.size(); ++k)
      ctx.basis_scale = std::max(ctx.basis_scale, 2.0 * std::abs(space.sigma(basis[i], basis[k])));
  ctx.fn_abs = std::abs(gram(space, basis).determinant);
  return ctx;
}

// Dimensionless residual: F_{n+1}(basis, r) over the basis Gram scale. The
// denominator is floored by a power of the pair scale so null-separated bases
// (F_n = 0 with distinct points) still define a usable tube.
double tube_residual(const SigmaSpace& space, const TubeBasisContext& ctx, const Point& r) {
  double scale = ctx.basis_scale;
  for (const Point& b : ctx.basis)
    scale = std::max(scale, 2.0 * std::abs(space.sigma(b, r)));
  std::vector<Point> extended = ctx.basis;
  extended.push_back(r);
  double f_next = gram(space, extended).determinant;
  double denom = std::max(ctx.fn_abs * scale, std::pow(scale, ctx.order + 1));
  return f_next / denom;
}

}  // namespace detail

long long GridSpec::total() const {
  long long t = 1;
  for (int c : counts) t *= c;
  return t;
}

Eigen::VectorXd GridSpec::point(long long flat_index) const {
  int dims = static_cast<int>(counts.size());
  Eigen::VectorXd x(dims);
  long long rest = flat_index;
  for (int axis = dims - 1; axis >= 0; --axis) {
    long long j = rest % counts[axis];
    rest /= counts[axis];
    double step = (hi[axis] - lo[axis]) / (counts[axis] - 1);
    x[axis] = lo[axis] + step * static_cast<double>(j);
  }
  return x;
}

namespace {

MembershipResult make_result(double residual, double tol, double scale) {
  MembershipResult m;
  m.residual = residual;
  m.tol_used = scaled_tol(tol, scale);
  m.member = std::abs(residual) <= m.tol_used;
  return m;
}

// F_2 of a triple, with the shared tolerance treatment for the cylinder.
double triple_f2(const SigmaSpace& space, const Point& p1, const Point& p2, const Point& r) {
  return gram(space, {p1, p2, r}).determinant;
}

}  // namespace

MembershipResult sphere_contains(const SigmaSpace& space, const Point& center,
                                 const Point& through, const Point& r, double tol) {
  double s_through = space.sigma(center, through);
  double s_r = space.sigma(center, r);
  double scale = std::max({1.0, std::abs(s_through), std::abs(s_r)});
  return make_result(s_r - s_through, tol, scale);
}

MembershipResult cylinder_contains(const SigmaSpace& space, const Point& p1, const Point& p2,
                                   const Point& through, const Point& r, double tol) {
  double f1 = 2.0 * space.sigma(p1, p2);
  if (std::abs(f1) <= kTolFloor)
    throw DegenerateBasisError("cylinder axis has vanishing squared length");
  double f2_r = triple_f2(space, p1, p2, r);
  double f2_p = triple_f2(space, p1, p2, through);
  double area_scale = std::max(1.0, std::abs(f1));
  area_scale = area_scale * area_scale;
  if (f2_r < -kTolFloor * area_scale || f2_p < -kTolFloor * area_scale)
    throw ImaginaryAreaError("F_2 < 0: triangle area is imaginary for this triple");
  double s2_r = 0.5 * std::sqrt(std::max(f2_r, 0.0));
  double s2_p = 0.5 * std::sqrt(std::max(f2_p, 0.0));
  double scale = std::max(1.0, s2_p);
  return make_result(s2_r - s2_p, tol, scale);
}

MembershipResult ellipsoid_contains(const SigmaSpace& space, const Point& f1, const Point& f2,
                                    const Point& through, const Point& r, double tol) {
  double sum_r = metric(space, f1, r) + metric(space, f2, r);
  double sum_p = metric(space, f1, through) + metric(space, f2, through);
  double scale = std::max(1.0, sum_p);
  return make_result(sum_r - sum_p, tol, scale);
}

MembershipResult segment_contains(const SigmaSpace& space, const Point& p1, const Point& p2,
                                  const Point& r, double tol) {
  double base = metric(space, p1, p2);
  double residual = metric(space, p1, r) + metric(space, p2, r) - base;
  double scale = std::max(1.0, base);
  return make_result(residual, tol, scale);
}

MembershipResult tube_contains(const SigmaSpace& space, const std::vector<Point>& basis,
                               const Point& r, double tol) {
  detail::TubeBasisContext ctx = detail::make_tube_context(space, basis);
  double residual = detail::tube_residual(space, ctx, r);
  return make_result(residual, tol, 1.0);
}

MembershipResult tube_through_point_contains(const SigmaSpace& space, const Point& p0,
                                             const Point& p1, const Point& q0, const Point& r,
                                             double tol) {
  if (r.same_point(q0) ||
      (r.is_coords() && q0.is_coords() && r.dim() == q0.dim() &&
       (r.coords() - q0.coords()).lpNorm<Eigen::Infinity>() <= std::max(tol, kTolFloor)))
    throw ZeroVectorError("the vector Q0R vanishes: r coincides with q0");
  double a2 = scalar_product(space, p0, p1, p0, p1);
  if (std::abs(a2) <= kTolFloor)
    throw ZeroVectorError("P0P1 has vanishing squared length");
  double b2 = scalar_product(space, q0, r, q0, r);
  double sp = scalar_product(space, p0, p1, q0, r);
  double residual = sp * sp - a2 * b2;
  double scale = std::max({1.0, std::abs(a2 * b2), sp * sp});
  return make_result(residual, tol, scale);
}

TubeSample sample_tube(const SigmaSpace& space, const std::vector<Point>& basis,
                       const GridSpec& grid, double tol) {
  if (grid.counts.empty() || grid.lo.size() != grid.hi.size() ||
      static_cast<int>(grid.counts.size()) != grid.lo.size())
    throw ConfigError("grid spec arity mismatch");
  for (int c : grid.counts)
    if (c < 2) throw ConfigError("grid resolution must be at least 2 per axis");
  detail::TubeBasisContext ctx = detail::make_tube_context(space, basis);

  long long total = grid.total();
  std::vector<double> residuals(static_cast<std::size_t>(total));
  parallel_for(total, [&](long long i) {
    residuals[static_cast<std::size_t>(i)] =
        detail::tube_residual(space, ctx, Point::Coords(grid.point(i)));
  });

  TubeSample sample;
  sample.grid = grid;
  double threshold = scaled_tol(tol, 1.0);
  for (long long i = 0; i < total; ++i) {
    double res = residuals[static_cast<std::size_t>(i)];
    if (std::abs(res) <= threshold) {
      sample.points.push_back(grid.point(i));
      sample.residuals.push_back(res);
    }
  }
  return sample;
}

TubeSample broken_tube(const SigmaSpace& space, const std::vector<Point>& vertices,
                       int per_segment_resolution, double tol) {
  if (vertices.size() < 2) throw ConfigError("broken line needs at least two vertices");
  if (per_segment_resolution < 2) throw ConfigError("per-segment resolution must be at least 2");

  TubeSample sample;
  auto push = [&sample](const Eigen::VectorXd& x, double res) {
    if (!sample.points.empty() && sample.points.back() == x) return;
    sample.points.push_back(x);
    sample.residuals.push_back(res);
  };

  for (std::size_t v = 0; v + 1 < vertices.size(); ++v) {
    const Point& a = vertices[v];
    const Point& b = vertices[v + 1];
    metric(space, a, b);  // NegativeSigma on a timelike-invalid pair

    if (space.is_finite()) {
      for (int i = 0; i < space.point_count(); ++i) {
        MembershipResult m = segment_contains(space, a, b, Point::Label(i), tol);
        if (m.member) {
          Eigen::VectorXd x(1);
          x[0] = static_cast<double>(i);
          push(x, m.residual);
        }
      }
      continue;
    }

    const Eigen::VectorXd& xa = a.coords();
    const Eigen::VectorXd& xb = b.coords();
    if (xa == xb) {
      // degenerate link: contributes only the vertex itself
      push(xa, 0.0);
      continue;
    }
    for (int j = 0; j < per_segment_resolution; ++j) {
      double t = static_cast<double>(j) / (per_segment_resolution - 1);
      Eigen::VectorXd x = xa + t * (xb - xa);
      MembershipResult m = segment_contains(space, a, b, Point::Coords(x), tol);
      if (m.member) push(x, m.residual);
    }
  }
  return sample;
}

}  // namespace sigmageo
