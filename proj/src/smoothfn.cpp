#include "aagf/smoothfn.hpp"

#include <utility>

namespace aagf {

namespace {

class ExprFn final : public SmoothFn {
 public:
  explicit ExprFn(Expression e) : e_(std::move(e)) {}
  Jet jet_at(double x, int order) const override { return e_.jet(x, order); }

 private:
  Expression e_;
};

class SumFn final : public SmoothFn {
 public:
  SumFn(SmoothFnPtr a, SmoothFnPtr b, double sign)
      : a_(std::move(a)), b_(std::move(b)), sign_(sign) {}
  Jet jet_at(double x, int order) const override {
    Jet ja = a_->jet_at(x, order);
    Jet jb = b_->jet_at(x, order);
    std::vector<double> d(ja.derivs());
    for (int j = 0; j <= order; ++j) d[static_cast<std::size_t>(j)] += sign_ * jb.deriv(j);
    return Jet(x, std::move(d));
  }

 private:
  SmoothFnPtr a_, b_;
  double sign_;
};

class ProductFn final : public SmoothFn {
 public:
  ProductFn(SmoothFnPtr a, SmoothFnPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  Jet jet_at(double x, int order) const override {
    auto ca = series::from_derivs(a_->jet_at(x, order).derivs());
    auto cb = series::from_derivs(b_->jet_at(x, order).derivs());
    return Jet(x, series::to_derivs(series::mul(ca, cb)));
  }

 private:
  SmoothFnPtr a_, b_;
};

class ScaleFn final : public SmoothFn {
 public:
  ScaleFn(SmoothFnPtr a, double s) : a_(std::move(a)), s_(s) {}
  Jet jet_at(double x, int order) const override {
    return jet_scale(a_->jet_at(x, order), s_);
  }

 private:
  SmoothFnPtr a_;
  double s_;
};

class TranslateFn final : public SmoothFn {
 public:
  TranslateFn(SmoothFnPtr a, double omega) : a_(std::move(a)), omega_(omega) {}
  Jet jet_at(double x, int order) const override {
    Jet j = a_->jet_at(x + omega_, order);
    return Jet(x, j.derivs());
  }

 private:
  SmoothFnPtr a_;
  double omega_;
};

class DerivativeFn final : public SmoothFn {
 public:
  DerivativeFn(SmoothFnPtr a, int n) : a_(std::move(a)), n_(n) {}
  Jet jet_at(double x, int order) const override {
    Jet j = a_->jet_at(x, order + n_);
    std::vector<double> d(static_cast<std::size_t>(order) + 1);
    for (int i = 0; i <= order; ++i) d[static_cast<std::size_t>(i)] = j.deriv(i + n_);
    return Jet(x, std::move(d));
  }

 private:
  SmoothFnPtr a_;
  int n_;
};

class LinCombFn final : public SmoothFn {
 public:
  LinCombFn(std::vector<double> w, std::vector<SmoothFnPtr> t)
      : w_(std::move(w)), t_(std::move(t)) {}
  Jet jet_at(double x, int order) const override {
    std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      Jet j = t_[i]->jet_at(x, order);
      for (int k = 0; k <= order; ++k) d[static_cast<std::size_t>(k)] += w_[i] * j.deriv(k);
    }
    return Jet(x, std::move(d));
  }

 private:
  std::vector<double> w_;
  std::vector<SmoothFnPtr> t_;
};

class CallableFn final : public SmoothFn {
 public:
  explicit CallableFn(std::function<Jet(double, int)> f) : f_(std::move(f)) {}
  Jet jet_at(double x, int order) const override { return f_(x, order); }

 private:
  std::function<Jet(double, int)> f_;
};

}  // namespace

SmoothFnPtr wrap(Expression expr) {
  return std::make_shared<ExprFn>(std::move(expr));
}

SmoothFnPtr fn_constant(double c) { return wrap(Expression::constant(c)); }

SmoothFnPtr fn_sum(SmoothFnPtr a, SmoothFnPtr b) {
  return std::make_shared<SumFn>(std::move(a), std::move(b), 1.0);
}

SmoothFnPtr fn_diff(SmoothFnPtr a, SmoothFnPtr b) {
  return std::make_shared<SumFn>(std::move(a), std::move(b), -1.0);
}

SmoothFnPtr fn_product(SmoothFnPtr a, SmoothFnPtr b) {
  return std::make_shared<ProductFn>(std::move(a), std::move(b));
}

SmoothFnPtr fn_scale(SmoothFnPtr a, double s) {
  return std::make_shared<ScaleFn>(std::move(a), s);
}

SmoothFnPtr fn_translate(SmoothFnPtr a, double omega) {
  return std::make_shared<TranslateFn>(std::move(a), omega);
}

SmoothFnPtr fn_derivative(SmoothFnPtr a, int n) {
  return std::make_shared<DerivativeFn>(std::move(a), n);
}

SmoothFnPtr fn_linear_combination(std::vector<double> weights,
                                  std::vector<SmoothFnPtr> terms) {
  return std::make_shared<LinCombFn>(std::move(weights), std::move(terms));
}

SmoothFnPtr fn_from_callable(std::function<Jet(double, int)> f) {
  return std::make_shared<CallableFn>(std::move(f));
}

}  // namespace aagf
