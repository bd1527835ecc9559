#pragma once

#include <memory>
#include <string>
#include <vector>

#include "aagf/jet.hpp"

namespace aagf {

enum class NodeKind {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,   // integer exponent
  Sin,
  Cos,
  Exp,
  Sqrt,  // positive constant argument only
};

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  double value = 0.0;       // Constant
  long long exponent = 0;   // Pow
  NodePtr left, right;      // children (unary ops use left)
};

/// Immutable expression over a single real variable. The DSL covers the
/// elementary smooth functions the workbench needs; jets through any order
/// are exact (no symbolic differentiation, no finite differences).
class Expression {
 public:
  Expression() = default;
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  bool empty() const { return root_ == nullptr; }
  const NodePtr& root() const { return root_; }

  double operator()(double x) const;
  Jet jet(double x, int order) const;

  std::string str() const;

  Expression operator+(const Expression& o) const;
  Expression operator-(const Expression& o) const;
  Expression operator*(const Expression& o) const;

  static Expression constant(double c);
  static Expression variable();

 private:
  NodePtr root_;
};

Expression parse(const std::string& text);

/// x |-> expr(x + omega), built by structural substitution with constant
/// folding so repeated shifts collapse.
Expression translate(const Expression& expr, double omega);

/// Substitute `arg` for the variable (function composition at AST level).
Expression substitute(const Expression& outer, const Expression& arg);

bool structurally_equal(const Expression& a, const Expression& b);

/// Uniform random expression for property tests; deterministic in seed.
Expression random_expression(unsigned long long seed, int max_depth = 4);

}  // namespace aagf
