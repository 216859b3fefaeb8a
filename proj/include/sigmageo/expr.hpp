#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "sigmageo/errors.hpp"

namespace sigmageo {

// Arithmetic expression over variables x1..xn with + - * / ^, unary minus and
// the functions sin, cos, exp, sqrt, abs. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?        -- '^' is right-associative
//   unary  := '-'? atom
//   atom   := number | ident '(' expr ')' | var | '(' expr ')'
//   var    := 'x' digit+
// Radians only; no implicit multiplication.
class Expr {
 public:
  // Parses `src` against dimension `dim`. Throws SyntaxError,
  // UnknownFunctionError or VariableOutOfRangeError.
  static Expr parse(const std::string& src, int dim);

  // Evaluates at the given coordinates. Domain faults (division by zero,
  // sqrt of a negative, fractional power of a negative) throw EvalError.
  double eval(const Eigen::VectorXd& x) const;

  // Canonical fully parenthesized form; re-parsing it yields an equal AST.
  std::string print() const;

  bool equals(const Expr& other) const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace sigmageo
