#pragma once

#include <stdexcept>
#include <string>

namespace sigmageo {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A point does not belong to the space it is evaluated in (wrong coordinate
// arity, out-of-range label, or a label used against a coordinate space).
class DomainMismatchError : public Error {
 public:
  using Error::Error;
};

// sigma < 0: the derived metric would be imaginary.
class NegativeSigmaError : public Error {
 public:
  using Error::Error;
};

class TriangleInequalityError : public Error {
 public:
  using Error::Error;
};

class ZeroVectorError : public Error {
 public:
  using Error::Error;
};

// F_2 < 0: the Hero area of a triple is undefined.
class ImaginaryAreaError : public Error {
 public:
  using Error::Error;
};

class DegenerateBasisError : public Error {
 public:
  using Error::Error;
};

class DimensionCapError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class ChartBoundaryError : public Error {
 public:
  using Error::Error;
};

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

class SingularMixedError : public Error {
 public:
  using Error::Error;
};

class PointInsideHoleError : public Error {
 public:
  using Error::Error;
};

// Expression parsing and evaluation.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownFunctionError : public Error {
 public:
  using Error::Error;
};

class VariableOutOfRangeError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sigmageo
