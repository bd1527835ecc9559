#pragma once

#include <string>
#include <vector>

#include "aagf/expression.hpp"
#include "aagf/smoothfn.hpp"

namespace aagf {

/// Even mollifier with unit mass and K vanishing moments, built as a
/// Gaussian times an even polynomial:
///   rho(x) = (1/sqrt(2*pi)) * e^{-x^2/2} * sum_j c_j x^{2j},  2j <= K.
/// The polynomial coefficients solve the moment conditions exactly, so
/// mu_0 = 1 and mu_1..mu_K = 0 up to quadrature noise; mu_{K+2} != 0.
/// On the spectral side rho_hat(xi) = e^{-xi^2/2} * T_{K/2}(xi^2/2) with
/// T the truncated exponential series, flat to order K at xi = 0.
struct Mollifier {
  int K = 8;
  double radius = 12.0;  // |rho| < 1e-30 outside [-radius, radius]
  std::vector<double> coeffs;  // c_j of x^{2j}
  std::vector<double> moments;  // measured mu_0..mu_K (quadrature)

  Expression rho_expr;  // closed form in the DSL
  SmoothFnPtr fn;       // same function as a jet source

  double operator()(double x) const { return deriv(x, 0); }

  /// rho^{(n)}(x) from precomputed Gaussian-polynomial recurrences;
  /// cheap enough for inner quadrature loops.
  double deriv(double x, int n) const;

  double rho_hat(double xi) const;  // closed spectral form

  /// rho_eps = rho(./eps)/eps as a jet source.
  SmoothFnPtr scaled(double eps) const;

  std::string table_csv(double spacing = 0.01) const;
  std::string header_json() const;

  // deriv_polys[n] holds Q_n with rho^{(n)} = Q_n(x) e^{-x^2/2}/sqrt(2 pi),
  // Q_{n+1} = Q_n' - x Q_n; filled by build_mollifier.
  std::vector<std::vector<double>> deriv_polys;
};

/// Builds the mollifier and measures mu_0..mu_K by adaptive quadrature.
/// Throws MomentFailure if |mu_0 - 1| >= 1e-8 or |mu_k| >= 1e-6.
Mollifier build_mollifier(int K = 8, double radius = 12.0);

/// Rebuild from header_json() output (coefficients are authoritative;
/// moments are re-measured).
Mollifier mollifier_from_json(const std::string& header);

}  // namespace aagf
