#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sigmageo/space.hpp"

namespace sigmageo {

// Rectilinear chart built on a basis P^n with F_n != 0: covariant metric
// g_ik = Gamma(P0,Pi,Pk), its inverse, and the eigenvalue signature.
struct Chart {
  std::vector<Point> basis;
  Eigen::MatrixXd g_cov;
  Eigen::MatrixXd g_contra;
  int positive_eigenvalues = 0;
  int negative_eigenvalues = 0;

  int order() const { return static_cast<int>(g_cov.rows()); }
};

struct ConditionStats {
  bool pass = false;
  double max_residual = 0.0;
  long checked = 0;
};

struct EuclidReport {
  int dimension_found = 0;
  bool dimension_capped = false;
  ConditionStats cond1;  // every sampled extension stays on the tube
  ConditionStats cond2;  // sigma reproduced by the rectilinear form
  ConditionStats cond3;  // coordinates injective; grid round-trip where solvable
  std::string cond3_surjectivity;  // "verified" or "not-assessable"
  std::vector<Point> witness;
};

struct DetectResult {
  bool found = false;
  int dim = 0;
  std::vector<Point> basis;
};

// Deterministic coordinate sampler: `count` points uniform over the box, with
// rejection through space.contains(). Same seed, same points.
std::vector<Point> sample_box(const SigmaSpace& space, const Eigen::VectorXd& lo,
                              const Eigen::VectorXd& hi, int count, std::uint64_t seed);

// All labels of a finite space.
std::vector<Point> all_labels(const SigmaSpace& space);

// Deterministic sample pairs (distinct indices) drawn from a point set.
std::vector<std::pair<Point, Point>> sample_pairs(const std::vector<Point>& points, int count,
                                                  std::uint64_t seed);

// Dimension detection: grow a basis greedily until no sampled point leaves the
// tube T(P^n). The escaping point with the largest normalized residual among a
// batch of 32 candidates is appended at each stage.
DetectResult try_detect_dimension(const SigmaSpace& space, const std::vector<Point>& samples,
                                  int max_dim, double tol);

// Same, but throws DimensionCapError when points still escape at max_dim.
std::pair<int, std::vector<Point>> detect_dimension(const SigmaSpace& space,
                                                    const std::vector<Point>& samples,
                                                    int max_dim, double tol);

Chart build_chart(const SigmaSpace& space, const std::vector<Point>& basis);

// Covariant coordinates x_i(P) = Gamma(P0, Pi, P).
Eigen::VectorXd covariant_coordinates(const SigmaSpace& space, const Chart& chart,
                                      const Point& p);

// Rectilinear world function 1/2 g^{ik} (x_i - y_i)(x_k - y_k).
double reconstruct_sigma(const Chart& chart, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Runs the three Euclideanness conditions over the given samples and pairs.
// Failures are report entries, not errors. grid_per_axis controls the
// coordinate grid used for the round-trip check of condition III.
EuclidReport check_conditions(const SigmaSpace& space, const Chart& chart,
                              const std::vector<Point>& samples,
                              const std::vector<std::pair<Point, Point>>& pairs,
                              int grid_per_axis, double tol);

}  // namespace sigmageo
