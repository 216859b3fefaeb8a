// Recursive-descent parser and evaluator for metric component expressions.

#include "sigmageo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace sigmageo {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

enum class Fn { Sin, Cos, Exp, Sqrt, Abs };

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Exp: return "exp";
    case Fn::Sqrt: return "sqrt";
    case Fn::Abs: return "abs";
  }
  return "?";
}

}  // namespace

struct Expr::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
  double value = 0.0;       // Number
  int var_index = 0;        // Var, 1-based
  Fn fn = Fn::Sin;          // Call
  std::shared_ptr<const Node> a, b;

  static std::shared_ptr<const Node> number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->value = v;
    return n;
  }
  static std::shared_ptr<const Node> var(int index) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->var_index = index;
    return n;
  }
  static std::shared_ptr<const Node> unary(Kind k, std::shared_ptr<const Node> a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    return n;
  }
  static std::shared_ptr<const Node> binary(Kind k, std::shared_ptr<const Node> a,
                                            std::shared_ptr<const Node> b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  static std::shared_ptr<const Node> call(Fn f, std::shared_ptr<const Node> a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->fn = f;
    n->a = std::move(a);
    return n;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

class Parser {
 public:
  Parser(const std::string& src, int dim) : src_(src), dim_(dim) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size())
      throw SyntaxError("unexpected trailing input", pos_);
    return e;
  }

 private:
  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      skip_ws();
      if (accept('+')) left = Expr::Node::binary(Kind::Add, left, term());
      else if (accept('-')) left = Expr::Node::binary(Kind::Sub, left, term());
      else return left;
    }
  }

  NodePtr term() {
    NodePtr left = factor();
    for (;;) {
      skip_ws();
      if (accept('*')) left = Expr::Node::binary(Kind::Mul, left, factor());
      else if (accept('/')) left = Expr::Node::binary(Kind::Div, left, factor());
      else return left;
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    skip_ws();
    if (accept('^')) return Expr::Node::binary(Kind::Pow, base, factor());
    return base;
  }

  NodePtr unary() {
    skip_ws();
    if (accept('-')) return Expr::Node::unary(Kind::Neg, atom());
    return atom();
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return ident();
    if (accept('(')) {
      NodePtr inner = expr();
      skip_ws();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // the 'e' belongs to something else
      }
    }
    std::string text = src_.substr(start, pos_ - start);
    if (text.empty() || text == ".") throw SyntaxError("malformed number", start);
    return Expr::Node::number(std::stod(text));
  }

  NodePtr ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])))) ++pos_;
    std::string name = src_.substr(start, pos_ - start);

    // variable: 'x' followed by digits only
    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      int index = std::stoi(name.substr(1));
      if (index < 1 || index > dim_)
        throw VariableOutOfRangeError("variable " + name + " exceeds dimension " +
                                      std::to_string(dim_));
      return Expr::Node::var(index);
    }

    skip_ws();
    if (!accept('(')) throw SyntaxError("expected '(' after identifier '" + name + "'", pos_);
    NodePtr arg = expr();
    skip_ws();
    if (!accept(')')) throw SyntaxError("expected ')'", pos_);

    if (name == "sin") return Expr::Node::call(Fn::Sin, arg);
    if (name == "cos") return Expr::Node::call(Fn::Cos, arg);
    if (name == "exp") return Expr::Node::call(Fn::Exp, arg);
    if (name == "sqrt") return Expr::Node::call(Fn::Sqrt, arg);
    if (name == "abs") return Expr::Node::call(Fn::Abs, arg);
    throw UnknownFunctionError("unknown function '" + name + "'");
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& src_;
  int dim_;
  std::size_t pos_ = 0;
};

double eval_node(const Expr::Node& n, const Eigen::VectorXd& x) {
  switch (n.kind) {
    case Kind::Number:
      return n.value;
    case Kind::Var:
      if (n.var_index > x.size())
        throw EvalError("variable x" + std::to_string(n.var_index) + " exceeds the argument arity");
      return x[n.var_index - 1];
    case Kind::Neg:
      return -eval_node(*n.a, x);
    case Kind::Add:
      return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Kind::Sub:
      return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Kind::Mul:
      return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Kind::Div: {
      double num = eval_node(*n.a, x);
      double den = eval_node(*n.b, x);
      if (den == 0.0)
        throw EvalError("division by zero: " + format_number(num) + " / 0");
      return num / den;
    }
    case Kind::Pow: {
      double base = eval_node(*n.a, x);
      double exponent = eval_node(*n.b, x);
      if (base == 0.0 && exponent < 0.0)
        throw EvalError("zero raised to the negative power " + format_number(exponent));
      if (base < 0.0 && exponent != std::floor(exponent))
        throw EvalError("negative base " + format_number(base) + " raised to fractional power " +
                        format_number(exponent));
      return std::pow(base, exponent);
    }
    case Kind::Call: {
      double arg = eval_node(*n.a, x);
      switch (n.fn) {
        case Fn::Sin: return std::sin(arg);
        case Fn::Cos: return std::cos(arg);
        case Fn::Exp: return std::exp(arg);
        case Fn::Sqrt:
          if (arg < 0.0) throw EvalError("sqrt of negative value " + format_number(arg));
          return std::sqrt(arg);
        case Fn::Abs: return std::abs(arg);
      }
      throw EvalError("unknown function in AST");
    }
  }
  throw EvalError("malformed AST");
}

void print_node(const Expr::Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number:
      out += format_number(n.value);
      return;
    case Kind::Var:
      out += "x" + std::to_string(n.var_index);
      return;
    case Kind::Neg:
      out += "(-";
      print_node(*n.a, out);
      out += ")";
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow: {
      const char* op = n.kind == Kind::Add ? " + "
                       : n.kind == Kind::Sub ? " - "
                       : n.kind == Kind::Mul ? " * "
                       : n.kind == Kind::Div ? " / "
                                             : " ^ ";
      out += "(";
      print_node(*n.a, out);
      out += op;
      print_node(*n.b, out);
      out += ")";
      return;
    }
    case Kind::Call:
      out += fn_name(n.fn);
      out += "(";
      print_node(*n.a, out);
      out += ")";
      return;
  }
}

bool nodes_equal(const Expr::Node& a, const Expr::Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Number: return a.value == b.value;
    case Kind::Var: return a.var_index == b.var_index;
    case Kind::Neg: return nodes_equal(*a.a, *b.a);
    case Kind::Call: return a.fn == b.fn && nodes_equal(*a.a, *b.a);
    default: return nodes_equal(*a.a, *b.a) && nodes_equal(*a.b, *b.b);
  }
}

}  // namespace

Expr Expr::parse(const std::string& src, int dim) {
  Parser parser(src, dim);
  return Expr(parser.run());
}

double Expr::eval(const Eigen::VectorXd& x) const { return eval_node(*root_, x); }

std::string Expr::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expr::equals(const Expr& other) const { return nodes_equal(*root_, *other.root_); }

}  // namespace sigmageo
