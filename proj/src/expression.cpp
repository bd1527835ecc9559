#include "aagf/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "aagf/errors.hpp"

namespace aagf {

namespace {

NodePtr make(NodeKind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Constant;
  n->value = v;
  return n;
}

NodePtr make_pow(NodePtr base, long long e) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Pow;
  n->left = std::move(base);
  n->exponent = e;
  return n;
}

bool contains_variable(const NodePtr& n) {
  if (!n) return false;
  if (n->kind == NodeKind::Variable) return true;
  return contains_variable(n->left) || contains_variable(n->right);
}

double eval_const(const NodePtr& n);

std::vector<double> eval_series(const NodePtr& n, double x, int order) {
  switch (n->kind) {
    case NodeKind::Constant:
      return series::constant(n->value, order);
    case NodeKind::Variable:
      return series::variable(x, order);
    case NodeKind::Add:
      return series::add(eval_series(n->left, x, order),
                         eval_series(n->right, x, order));
    case NodeKind::Sub:
      return series::sub(eval_series(n->left, x, order),
                         eval_series(n->right, x, order));
    case NodeKind::Mul:
      return series::mul(eval_series(n->left, x, order),
                         eval_series(n->right, x, order));
    case NodeKind::Div:
      return series::div(eval_series(n->left, x, order),
                         eval_series(n->right, x, order));
    case NodeKind::Neg:
      return series::negate(eval_series(n->left, x, order));
    case NodeKind::Pow:
      return series::ipow(eval_series(n->left, x, order), n->exponent);
    case NodeKind::Sin:
      return series::sin(eval_series(n->left, x, order));
    case NodeKind::Cos:
      return series::cos(eval_series(n->left, x, order));
    case NodeKind::Exp:
      return series::exp(eval_series(n->left, x, order));
    case NodeKind::Sqrt: {
      const double c = eval_const(n->left);
      if (!(c > 0.0))
        throw EvaluationError("sqrt argument must be a positive constant");
      return series::constant(std::sqrt(c), order);
    }
  }
  throw Error("unreachable expression node");
}

double eval_const(const NodePtr& n) {
  return series::to_derivs(eval_series(n, 0.0, 0))[0];
}

void print_node(const NodePtr& n, std::ostream& os) {
  switch (n->kind) {
    case NodeKind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n->value);
      os << buf;
      return;
    }
    case NodeKind::Variable:
      os << 'x';
      return;
    case NodeKind::Add:
      os << '(';
      print_node(n->left, os);
      os << " + ";
      print_node(n->right, os);
      os << ')';
      return;
    case NodeKind::Sub:
      os << '(';
      print_node(n->left, os);
      os << " - ";
      print_node(n->right, os);
      os << ')';
      return;
    case NodeKind::Mul:
      os << '(';
      print_node(n->left, os);
      os << " * ";
      print_node(n->right, os);
      os << ')';
      return;
    case NodeKind::Div:
      os << '(';
      print_node(n->left, os);
      os << " / ";
      print_node(n->right, os);
      os << ')';
      return;
    case NodeKind::Neg:
      os << "(-";
      print_node(n->left, os);
      os << ')';
      return;
    case NodeKind::Pow:
      // The base gets its own parentheses so negative constants bind to
      // the power on re-parse.
      os << "((";
      print_node(n->left, os);
      os << ")^" << n->exponent << ')';
      return;
    case NodeKind::Sin:
      os << "sin(";
      print_node(n->left, os);
      os << ')';
      return;
    case NodeKind::Cos:
      os << "cos(";
      print_node(n->left, os);
      os << ')';
      return;
    case NodeKind::Exp:
      os << "exp(";
      print_node(n->left, os);
      os << ')';
      return;
    case NodeKind::Sqrt:
      os << "sqrt(";
      print_node(n->left, os);
      os << ')';
      return;
  }
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' ('-')? integer)?
//   atom   := number | 'x' | 'pi' | name '(' expr ')' | '(' expr ')'
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string detail = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) detail += " or ";
      detail += expected[i];
    }
    throw SyntaxError(pos_, std::move(expected), detail);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (eat('+'))
        e = make(NodeKind::Add, e, term());
      else if (eat('-'))
        e = make(NodeKind::Sub, e, term());
      else
        return e;
    }
  }

  NodePtr term() {
    NodePtr e = factor();
    for (;;) {
      if (eat('*'))
        e = make(NodeKind::Mul, e, factor());
      else if (eat('/'))
        e = make(NodeKind::Div, e, factor());
      else
        return e;
    }
  }

  NodePtr factor() {
    if (eat('-')) {
      NodePtr f = factor();
      // Fold so printed negative constants round-trip structurally.
      if (f->kind == NodeKind::Constant) return make_const(-f->value);
      return make(NodeKind::Neg, f);
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!eat('^')) return base;
    skip_ws();
    bool neg = eat('-');
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail({"integer exponent"});
    long long e = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      e = e * 10 + (s_[pos_++] - '0');
    return make_pow(base, neg ? -e : e);
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail({"number", "'x'", "function", "'('"});
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail({"')'"});
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             std::isalnum(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return make(NodeKind::Variable);
      if (name == "pi") return make_const(M_PI);
      NodeKind k;
      if (name == "sin")
        k = NodeKind::Sin;
      else if (name == "cos")
        k = NodeKind::Cos;
      else if (name == "exp")
        k = NodeKind::Exp;
      else if (name == "sqrt")
        k = NodeKind::Sqrt;
      else {
        pos_ = start;
        fail({"'x'", "'pi'", "'sin'", "'cos'", "'exp'", "'sqrt'"});
      }
      if (!eat('(')) fail({"'('"});
      std::size_t arg_pos = pos_;
      NodePtr arg = expr();
      if (!eat(')')) fail({"')'"});
      if (k == NodeKind::Sqrt) {
        if (contains_variable(arg)) {
          pos_ = arg_pos;
          fail({"constant expression (sqrt of x is not in the DSL)"});
        }
        double v;
        try {
          v = eval_const(arg);
        } catch (const EvaluationError&) {
          pos_ = arg_pos;
          fail({"evaluable constant"});
        }
        if (!(v > 0.0)) {
          pos_ = arg_pos;
          fail({"positive constant under sqrt"});
        }
      }
      return make(k, arg);
    }
    fail({"number", "'x'", "function", "'('"});
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        while (pos_ < s_.size() &&
               std::isdigit(static_cast<unsigned char>(s_[pos_])))
          ++pos_;
      else
        pos_ = save;
    }
    try {
      return make_const(std::stod(s_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      pos_ = start;
      fail({"number"});
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

// Substitution of `arg` for the variable, folding nested constant shifts
// (x + a) + b -> x + (a + b) and dropping zero shifts.
NodePtr subst(const NodePtr& n, const NodePtr& arg) {
  if (!n) return nullptr;
  if (n->kind == NodeKind::Variable) return arg;
  if (n->kind == NodeKind::Constant || n->kind == NodeKind::Sqrt) return n;
  auto out = std::make_shared<ExprNode>(*n);
  out->left = subst(n->left, arg);
  out->right = subst(n->right, arg);
  // fold (x + c1) + c2
  if (out->kind == NodeKind::Add && out->left &&
      out->left->kind == NodeKind::Add && out->right &&
      out->right->kind == NodeKind::Constant &&
      out->left->right->kind == NodeKind::Constant &&
      out->left->left->kind == NodeKind::Variable) {
    return make(NodeKind::Add, out->left->left,
                make_const(out->left->right->value + out->right->value));
  }
  return out;
}

}  // namespace

double Expression::operator()(double x) const { return jet(x, 0).value(); }

Jet Expression::jet(double x, int order) const {
  if (!root_) throw Error("empty expression");
  return Jet(x, series::to_derivs(eval_series(root_, x, order)));
}

std::string Expression::str() const {
  if (!root_) return "";
  std::ostringstream os;
  print_node(root_, os);
  return os.str();
}

Expression Expression::operator+(const Expression& o) const {
  return Expression(make(NodeKind::Add, root_, o.root_));
}
Expression Expression::operator-(const Expression& o) const {
  return Expression(make(NodeKind::Sub, root_, o.root_));
}
Expression Expression::operator*(const Expression& o) const {
  return Expression(make(NodeKind::Mul, root_, o.root_));
}

Expression Expression::constant(double c) { return Expression(make_const(c)); }
Expression Expression::variable() {
  return Expression(make(NodeKind::Variable));
}

Expression parse(const std::string& text) {
  return Expression(Parser(text).run());
}

Expression translate(const Expression& expr, double omega) {
  if (omega == 0.0) return expr;
  NodePtr shifted = make(NodeKind::Add, make(NodeKind::Variable),
                         make_const(omega));
  return Expression(subst(expr.root(), shifted));
}

Expression substitute(const Expression& outer, const Expression& arg) {
  return Expression(subst(outer.root(), arg.root()));
}

bool structurally_equal(const Expression& a, const Expression& b) {
  struct Cmp {
    static bool eq(const NodePtr& x, const NodePtr& y) {
      if (!x || !y) return x == y;
      if (x->kind != y->kind) return false;
      if (x->kind == NodeKind::Constant && x->value != y->value) return false;
      if (x->kind == NodeKind::Pow && x->exponent != y->exponent) return false;
      return eq(x->left, y->left) && eq(x->right, y->right);
    }
  };
  return Cmp::eq(a.root(), b.root());
}

Expression random_expression(unsigned long long seed, int max_depth) {
  std::mt19937_64 rng(seed);
  struct Gen {
    std::mt19937_64& rng;
    NodePtr node(int depth) {
      std::uniform_int_distribution<int> leaf(0, 2);
      std::uniform_real_distribution<double> cval(-2.0, 2.0);
      if (depth <= 0) {
        switch (leaf(rng)) {
          case 0:
            return make_const(cval(rng));
          default:
            return make(NodeKind::Variable);
        }
      }
      std::uniform_int_distribution<int> pick(0, 7);
      switch (pick(rng)) {
        case 0:
          return make(NodeKind::Add, node(depth - 1), node(depth - 1));
        case 1:
          return make(NodeKind::Sub, node(depth - 1), node(depth - 1));
        case 2:
          return make(NodeKind::Mul, node(depth - 1), node(depth - 1));
        case 3: {
          // keep denominators away from zero: 2 + cos(.)
          NodePtr den = make(NodeKind::Add, make_const(2.0),
                             make(NodeKind::Cos, node(depth - 1)));
          return make(NodeKind::Div, node(depth - 1), den);
        }
        case 4:
          return make(NodeKind::Sin, node(depth - 1));
        case 5:
          return make(NodeKind::Cos, node(depth - 1));
        case 6: {
          // bounded exponent argument: exp(sin(.))
          return make(NodeKind::Exp, make(NodeKind::Sin, node(depth - 1)));
        }
        default: {
          std::uniform_int_distribution<long long> ed(1, 3);
          return make_pow(node(depth - 1), ed(rng));
        }
      }
    }
  } gen{rng};
  return Expression(gen.node(max_depth));
}

}  // namespace aagf
