#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "aagf/expression.hpp"
#include "aagf/jet.hpp"

namespace aagf {

/// A smooth function known through its jets. Everything the workbench
/// evaluates (expressions, convolutions, extensions, Green integrals)
/// implements this interface; evaluation is pure and thread-safe.
class SmoothFn {
 public:
  virtual ~SmoothFn() = default;
  virtual Jet jet_at(double x, int order) const = 0;
  double operator()(double x) const { return jet_at(x, 0).value(); }
};

using SmoothFnPtr = std::shared_ptr<const SmoothFn>;

SmoothFnPtr wrap(Expression expr);
SmoothFnPtr fn_constant(double c);

SmoothFnPtr fn_sum(SmoothFnPtr a, SmoothFnPtr b);
SmoothFnPtr fn_diff(SmoothFnPtr a, SmoothFnPtr b);
SmoothFnPtr fn_product(SmoothFnPtr a, SmoothFnPtr b);  // Leibniz on jets
SmoothFnPtr fn_scale(SmoothFnPtr a, double s);
SmoothFnPtr fn_translate(SmoothFnPtr a, double omega);  // x -> a(x + omega)
SmoothFnPtr fn_derivative(SmoothFnPtr a, int n = 1);

SmoothFnPtr fn_linear_combination(std::vector<double> weights,
                                  std::vector<SmoothFnPtr> terms);

/// Adapter for ad-hoc jet rules.
SmoothFnPtr fn_from_callable(std::function<Jet(double, int)> f);

}  // namespace aagf
