#include "sigmageo/space.hpp"

#include <cmath>

#include "sigmageo/errors.hpp"
#include "sigmageo/kernel.hpp"

namespace sigmageo {

void SigmaSpace::check_coords(const Point& p) const {
  if (!p.is_coords())
    throw DomainMismatchError("coordinate space cannot evaluate a labeled point");
  if (p.dim() != dimension())
    throw DomainMismatchError("point arity " + std::to_string(p.dim()) +
                              " does not match space dimension " + std::to_string(dimension()));
}

FiniteSigmaSpace::FiniteSigmaSpace(Eigen::MatrixXd sigma_table) : table_(std::move(sigma_table)) {
  if (table_.rows() == 0 || table_.rows() != table_.cols())
    throw ConfigError("sigma table must be a nonempty square matrix");
  for (Eigen::Index i = 0; i < table_.rows(); ++i) {
    for (Eigen::Index k = 0; k < table_.cols(); ++k) {
      if (!std::isfinite(table_(i, k))) throw ConfigError("sigma table contains a non-finite entry");
    }
    if (std::abs(table_(i, i)) > kTolFloor)
      throw ConfigError("sigma table diagonal must be zero (row " + std::to_string(i) + ")");
  }
  for (Eigen::Index i = 0; i < table_.rows(); ++i) {
    for (Eigen::Index k = i + 1; k < table_.cols(); ++k) {
      double scale = std::max(1.0, std::abs(table_(i, k)));
      if (std::abs(table_(i, k) - table_(k, i)) > kTolFloor * scale)
        throw ConfigError("sigma table is asymmetric at (" + std::to_string(i) + "," +
                          std::to_string(k) + ")");
    }
  }
}

double FiniteSigmaSpace::sigma(const Point& p, const Point& q) const {
  if (!p.is_label() || !q.is_label())
    throw DomainMismatchError("finite space expects labeled points");
  int i = p.label();
  int k = q.label();
  if (i < 0 || i >= point_count() || k < 0 || k >= point_count())
    throw DomainMismatchError("label out of range for finite space of " +
                              std::to_string(point_count()) + " points");
  return table_(i, k);
}

}  // namespace sigmageo
