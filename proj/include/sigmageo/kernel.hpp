#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigmageo/space.hpp"

namespace sigmageo {

// Gram matrices stay at desk scale; larger orders are rejected outright.
inline constexpr int kMaxGramOrder = 16;

// Absolute floor under every relative tolerance.
inline constexpr double kTolFloor = 1e-12;

inline double scaled_tol(double tol, double scale) {
  double s = tol * scale;
  return s > kTolFloor ? s : kTolFloor;
}

// Derived metric rho = sqrt(2 sigma). Throws NegativeSigmaError when sigma < 0
// (the metric would be imaginary); callers should use sigma directly there.
double metric(const SigmaSpace& space, const Point& p, const Point& q);

// Scalar product (P0P1 . P0P2) expressed through the world function:
// Gamma(P0,P1,P2) = sigma(P0,P1) + sigma(P0,P2) - sigma(P1,P2).
double gamma(const SigmaSpace& space, const Point& p0, const Point& p1, const Point& p2);

// Scalar product of two vectors with independent tails:
// (P0P1 . Q0Q1) = sigma(P0,Q1) + sigma(Q0,P1) - sigma(P0,Q0) - sigma(P1,Q1).
// Reduces to gamma when q0 = p0.
double scalar_product(const SigmaSpace& space, const Point& p0, const Point& p1,
                      const Point& q0, const Point& q1);

// Gram matrix of a basis P^n = {P0,...,Pn} and its determinant F_n.
// F_n equals (n! * simplex volume)^2 in proper Euclidean spaces.
struct GramResult {
  Eigen::MatrixXd gamma_matrix;  // g_ik = Gamma(P0, Pi, Pk), length^2
  double determinant = 0.0;      // F_n, length^(2n)
  std::vector<Point> basis;

  double squared_length() const { return determinant; }
};

GramResult gram(const SigmaSpace& space, const std::vector<Point>& basis);

// Determinant by LU elimination with partial pivoting; order capped at
// kMaxGramOrder.
double gram_determinant(const Eigen::MatrixXd& m);

// Triangle area from its side lengths. Throws TriangleInequalityError when a
// factor under the root is negative beyond tolerance.
double hero_area(double a, double b, double c);

// Collinearity of vectors P0P1 and Q0Q1: (P0P1.Q0Q1)^2 = |P0P1|^2 |Q0Q1|^2.
// Throws ZeroVectorError when either squared length vanishes within tol.
bool is_collinear(const SigmaSpace& space, const Point& p0, const Point& p1,
                  const Point& q0, const Point& q1, double tol);

}  // namespace sigmageo
