#pragma once

#include <Eigen/Dense>
#include <memory>

#include "sigmageo/point.hpp"

namespace sigmageo {

// A sigma-space: a point set carrying a world function sigma (half the squared
// distance). sigma is symmetric and vanishes on the diagonal; no positivity or
// triangle axioms are assumed. Evaluators are immutable and safe to share
// across threads.
class SigmaSpace {
 public:
  virtual ~SigmaSpace() = default;

  // World function, units of length^2. Throws DomainMismatchError when a point
  // does not belong to the space.
  virtual double sigma(const Point& p, const Point& q) const = 0;

  // Coordinate arity for coordinate-backed spaces, 0 for finite spaces.
  virtual int dimension() const = 0;

  virtual bool is_finite() const { return false; }
  virtual int point_count() const { return -1; }

  // Constant ambient metric matrix for flat spaces, nullptr otherwise.
  virtual const Eigen::MatrixXd* flat_metric() const { return nullptr; }

  // Domain membership test for coordinate vectors (used by samplers).
  virtual bool contains(const Eigen::VectorXd&) const { return true; }

 protected:
  void check_coords(const Point& p) const;
};

// The n-th order sigma-subspace: n+1 labeled points and their symmetric sigma
// table. Rejects asymmetric tables and nonzero diagonals at construction.
class FiniteSigmaSpace : public SigmaSpace {
 public:
  explicit FiniteSigmaSpace(Eigen::MatrixXd sigma_table);

  double sigma(const Point& p, const Point& q) const override;
  int dimension() const override { return 0; }
  bool is_finite() const override { return true; }
  int point_count() const override { return static_cast<int>(table_.rows()); }
  const Eigen::MatrixXd& table() const { return table_; }

 private:
  Eigen::MatrixXd table_;
};

}  // namespace sigmageo
