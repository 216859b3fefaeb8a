#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <variant>

#include "sigmageo/errors.hpp"

namespace sigmageo {

// A point of a space: either an ambient coordinate vector or a label into a
// finite space's point list.
class Point {
 public:
  static Point Coords(Eigen::VectorXd c) { return Point(std::move(c)); }

  static Point Coords(std::initializer_list<double> values) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) c[i++] = v;
    return Point(std::move(c));
  }

  static Point Label(int index) { return Point(index); }

  bool is_coords() const { return rep_.index() == 0; }
  bool is_label() const { return rep_.index() == 1; }

  const Eigen::VectorXd& coords() const {
    if (!is_coords()) throw DomainMismatchError("point is a label, not a coordinate vector");
    return std::get<Eigen::VectorXd>(rep_);
  }

  int label() const {
    if (!is_label()) throw DomainMismatchError("point is a coordinate vector, not a label");
    return std::get<int>(rep_);
  }

  int dim() const { return is_coords() ? static_cast<int>(coords().size()) : -1; }

  bool same_point(const Point& other) const {
    if (rep_.index() != other.rep_.index()) return false;
    if (is_label()) return label() == other.label();
    return coords().size() == other.coords().size() && coords() == other.coords();
  }

 private:
  explicit Point(Eigen::VectorXd c) : rep_(std::move(c)) {}
  explicit Point(int index) : rep_(index) {}

  std::variant<Eigen::VectorXd, int> rep_;
};

inline Point pt(std::initializer_list<double> values) { return Point::Coords(values); }

}  // namespace sigmageo
