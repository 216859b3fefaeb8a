// World-function kernel: derived metric, scalar products, Gram determinants,
// Hero areas and the collinearity test.

#include "sigmageo/kernel.hpp"

#include <Eigen/LU>
#include <cmath>

#include "sigmageo/errors.hpp"

namespace sigmageo {

double metric(const SigmaSpace& space, const Point& p, const Point& q) {
  double s = space.sigma(p, q);
  if (s < -kTolFloor)
    throw NegativeSigmaError("sigma = " + std::to_string(s) +
                             " < 0: metric is imaginary, use sigma directly");
  return std::sqrt(2.0 * (s > 0.0 ? s : 0.0));
}

double gamma(const SigmaSpace& space, const Point& p0, const Point& p1, const Point& p2) {
  return space.sigma(p0, p1) + space.sigma(p0, p2) - space.sigma(p1, p2);
}

double scalar_product(const SigmaSpace& space, const Point& p0, const Point& p1,
                      const Point& q0, const Point& q1) {
  return space.sigma(p0, q1) + space.sigma(q0, p1) - space.sigma(p0, q0) -
         space.sigma(p1, q1);
}

double gram_determinant(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error("gram determinant needs a square matrix");
  if (m.rows() > kMaxGramOrder)
    throw DimensionCapError("Gram order " + std::to_string(m.rows()) + " exceeds the cap of " +
                            std::to_string(kMaxGramOrder));
  if (m.rows() == 0) throw DegenerateBasisError("empty Gram matrix");
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m.partialPivLu().determinant();
}

GramResult gram(const SigmaSpace& space, const std::vector<Point>& basis) {
  if (basis.size() < 2)
    throw DegenerateBasisError("Gram basis needs at least two points");
  int n = static_cast<int>(basis.size()) - 1;
  if (n > kMaxGramOrder)
    throw DimensionCapError("Gram order " + std::to_string(n) + " exceeds the cap of " +
                            std::to_string(kMaxGramOrder));
  GramResult result;
  result.basis = basis;
  result.gamma_matrix.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k) {
      double g = gamma(space, basis[0], basis[static_cast<std::size_t>(i) + 1],
                       basis[static_cast<std::size_t>(k) + 1]);
      result.gamma_matrix(i, k) = g;
      result.gamma_matrix(k, i) = g;
    }
  }
  result.determinant = gram_determinant(result.gamma_matrix);
  return result;
}

double hero_area(double a, double b, double c) {
  if (a < 0.0 || b < 0.0 || c < 0.0)
    throw TriangleInequalityError("triangle sides must be nonnegative");
  double p = 0.5 * (a + b + c);
  double eps = kTolFloor * std::max(1.0, p);
  double factors[3] = {p - a, p - b, p - c};
  double product = p;
  for (double f : factors) {
    if (f < -eps)
      throw TriangleInequalityError("triangle inequality violated: slack " + std::to_string(f));
    product *= f > 0.0 ? f : 0.0;
  }
  return std::sqrt(product);
}

bool is_collinear(const SigmaSpace& space, const Point& p0, const Point& p1,
                  const Point& q0, const Point& q1, double tol) {
  double a2 = scalar_product(space, p0, p1, p0, p1);
  double b2 = scalar_product(space, q0, q1, q0, q1);
  double floor = std::max(tol, kTolFloor);
  if (std::abs(a2) <= floor || std::abs(b2) <= floor)
    throw ZeroVectorError("collinearity is undefined for a vector of vanishing squared length");
  double sp = scalar_product(space, p0, p1, q0, q1);
  double residual = sp * sp - a2 * b2;
  double scale = std::max(1.0, std::abs(a2 * b2));
  return std::abs(residual) <= scaled_tol(tol, scale);
}

}  // namespace sigmageo
