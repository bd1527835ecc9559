#pragma once

#include <complex>
#include <string>
#include <vector>

#include "aagf/aaa.hpp"
#include "aagf/expression.hpp"
#include "aagf/nets.hpp"
#include "aagf/smoothfn.hpp"

namespace aagf {

/// L_w u = sum_{terms} A (tau_w u)^{(i)} + K * u. Coefficient entries and
/// kernel entries are DSL expressions; the kernel is truncated to
/// [-kernel_radius, kernel_radius] with the tail mass documented by the
/// chosen kernel (mollifier-type kernels are far below 1e-8 outside).
struct NDDSystem {
  int n = 1;
  struct Term {
    int i = 0;        // derivative order applied to the translated state
    double omega = 0.0;  // delay: the term reads u(x + omega)
    std::vector<std::vector<Expression>> A;  // n x n
  };
  std::vector<Term> terms;
  std::vector<std::vector<Expression>> kernel;  // empty: no convolution
  double kernel_radius = 12.0;

  void validate() const;
  static NDDSystem from_json(const std::string& text);
};

/// Componentwise application; jets of the convolution term differentiate
/// onto the state under the integral sign.
std::vector<SmoothFnPtr> apply_operator(const NDDSystem& sys,
                                        const std::vector<SmoothFnPtr>& u);
std::vector<Net> apply_operator(const NDDSystem& sys,
                                const std::vector<Net>& u);

struct SolutionReport {
  std::vector<Classification> per_component;  // residual L_w u - f on J
  bool solution = false;
  std::string to_json() const;
};

/// Residual-net classification per component; verdict "solution" iff
/// every component residual classifies Negligible.
SolutionReport verify_solution(const NDDSystem& sys,
                               const std::vector<Net>& u,
                               const std::vector<Net>& f,
                               const EpsSchedule& schedule,
                               const Grid& j_grid = {0.0, 100.0, 401},
                               int k_max = 1,
                               const ClassifyOptions& opts = {});

struct LSEOptions {
  double horizon_factor = 40.0;  // integrate to s = factor / |Re lambda|
  double panel_width = 0.25;
  Grid v_check = {-10.0, 10.0, 201};  // substitution grid for v on R
  Grid w_check = {0.02, 20.0, 201};   // substitution grid for w on J
  double fd_step = 1e-3;  // five-point stencil for the independent check
  int vanishing_j_max = 1;
  VanishingOptions vanishing;  // w is pure quadrature: sampling is costly
};

struct LSESolution {
  std::vector<SmoothFnPtr> v;  // bounded principal solution on R
  std::vector<SmoothFnPtr> w;  // decaying corrective solution on J
  std::vector<SmoothFnPtr> u;  // v + w
  std::vector<std::complex<double>> eigenvalues;
  double residual_v = 0.0;  // sup |v' + A v - f_aa| by finite differences
  double residual_w = 0.0;  // sup |w' + A w - f_cor| by finite differences
  bool w_vanishing = false;
};

/// u' + A u = f for constant hyperbolic A (n <= 2): v is the bounded
/// Green-function solution against the principal forcing, w the decaying
/// solution against the corrective forcing (stable part started at 0,
/// unstable part projected onto decay). Substitution residuals are
/// measured with finite differences of quadrature values, never with the
/// solver's own jet recurrence. Throws NonHyperbolic near the imaginary
/// axis.
LSESolution solve_constant_lse(const std::vector<std::vector<double>>& A,
                               const std::vector<AAASpec>& f,
                               const LSEOptions& opts = {});
LSESolution solve_constant_lse(double a, const AAASpec& f,
                               const LSEOptions& opts = {});

struct SplitSolveResult {
  LSESolution sol;
  SolutionReport report;  // verify_solution on the reassembled u
};

SplitSolveResult split_solve(const std::vector<std::vector<double>>& A,
                             const std::vector<AAASpec>& f,
                             const EpsSchedule& schedule,
                             const Grid& j_grid = {0.0, 100.0, 401},
                             int k_max = 1, const LSEOptions& opts = {});

/// U(x) = int_{x0}^x u; jets shift down onto u, the value is quadrature.
SmoothFnPtr primitive(SmoothFnPtr u, double x0);
Net primitive_net(const Net& u, double x0);

}  // namespace aagf
