#pragma once

#include <vector>

#include "aagf/expression.hpp"
#include "aagf/mollifier.hpp"
#include "aagf/nets.hpp"
#include "aagf/smoothfn.hpp"

namespace aagf {

/// T = sum_i f_i^{(i)} with each f_i a bounded continuous expression.
/// Distributions enter the workbench only through this representative
/// form; delta-like inputs are excluded by construction.
struct DistributionRep {
  struct Term {
    int order = 0;  // derivative order i, 0 <= i <= 4
    double weight = 1.0;
    Expression f;
  };
  std::vector<Term> terms;

  static DistributionRep of(Expression f);
  static DistributionRep derivative_of(Expression f, int order);

  void validate() const;  // ConfigError outside the desk-scale bounds
};

/// x |-> sum_i (w_i / eps^i) int f_i(x - eps y) rho^{(i)}(y) dy, the
/// regularization T * rho_eps. Jets differentiate under the integral
/// onto rho, so every derivative is one more quadrature, never a
/// finite difference.
SmoothFnPtr regularize(const DistributionRep& T, const Mollifier& rho,
                       double eps);

/// The residual net eps |-> f * rho_eps - f. For smooth f its verdict
/// must come out Negligible with order-0 slope at least K; this is the
/// diagram-consistency check at net level.
Net consistency_residual(Expression f, const Mollifier& rho);

}  // namespace aagf
