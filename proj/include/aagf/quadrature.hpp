#pragma once

#include <functional>

namespace aagf {

/// Composite Gauss-Legendre quadrature with fixed 8-node panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double panel_width = 0.5);

/// Same rule with refinement doubling until the change between rounds
/// drops below rel_tol * scale + abs_tol; throws QuadratureError if it
/// never settles. abs_tol > 0 lets integrals that vanish converge.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-10,
                          double abs_tol = 0.0);

}  // namespace aagf
