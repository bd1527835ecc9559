#include "aagf/quadrature.hpp"

#include <cmath>
#include <cstdlib>

#include "aagf/errors.hpp"

namespace aagf {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kNodes[8] = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975362};
constexpr double kWeights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

double panels(const std::function<double(double)>& f, double a, double b,
              int n_panels) {
  const double h = (b - a) / n_panels;
  double total = 0.0;
  for (int p = 0; p < n_panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) acc += kWeights[i] * f(mid + 0.5 * h * kNodes[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double panel_width) {
  if (b <= a) {
    if (b == a) return 0.0;
    return -integrate(f, b, a, panel_width);
  }
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / panel_width)));
  return panels(f, a, b, n);
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol) {
  if (b == a) return 0.0;
  if (b < a) return -integrate_adaptive(f, b, a, rel_tol, abs_tol);
  int n = 8;
  double prev = panels(f, a, b, n);
  for (int round = 0; round < 12; ++round) {
    n *= 2;
    const double cur = panels(f, a, b, n);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-30});
    if (std::abs(cur - prev) <= rel_tol * scale + abs_tol) return cur;
    prev = cur;
  }
  throw QuadratureError("quadrature refinement did not converge");
}

}  // namespace aagf
