#include "aagf/jet.hpp"

#include <cmath>
#include <cstdlib>

namespace aagf {
namespace series {

namespace {
constexpr double kDivFloor = 0.0;  // exact-zero pivot only
}

std::vector<double> constant(double c, int order) {
  std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
  out[0] = c;
  return out;
}

std::vector<double> variable(double x, int order) {
  std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
  out[0] = x;
  if (order >= 1) out[1] = 1.0;
  return out;
}

std::vector<double> add(const std::vector<double>& a,
                        const std::vector<double>& b) {
  std::vector<double> out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

std::vector<double> sub(const std::vector<double>& a,
                        const std::vector<double>& b) {
  std::vector<double> out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

std::vector<double> negate(const std::vector<double>& a) {
  std::vector<double> out(a);
  for (double& v : out) v = -v;
  return out;
}

std::vector<double> scale(const std::vector<double>& a, double s) {
  std::vector<double> out(a);
  for (double& v : out) v *= s;
  return out;
}

std::vector<double> mul(const std::vector<double>& a,
                        const std::vector<double>& b) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> div(const std::vector<double>& a,
                        const std::vector<double>& b) {
  if (std::abs(b[0]) <= kDivFloor || !std::isfinite(b[0]))
    throw EvaluationError("division by zero in jet evaluation");
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    double acc = a[n];
    for (std::size_t i = 0; i < n; ++i) acc -= out[i] * b[n - i];
    out[n] = acc / b[0];
  }
  return out;
}

std::vector<double> ipow(const std::vector<double>& a, long long n) {
  const int order = static_cast<int>(a.size()) - 1;
  if (n < 0) return div(constant(1.0, order), ipow(a, -n));
  std::vector<double> result = constant(1.0, order);
  std::vector<double> base = a;
  long long e = n;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::vector<double> compose(const std::vector<double>& outer,
                            const std::vector<double>& inner) {
  // Horner on the zero-constant part of the inner series.
  const int order = static_cast<int>(inner.size()) - 1;
  std::vector<double> w = inner;
  w[0] = 0.0;
  std::vector<double> result = constant(outer.back(), order);
  for (int i = static_cast<int>(outer.size()) - 2; i >= 0; --i) {
    result = mul(result, w);
    result[0] += outer[static_cast<std::size_t>(i)];
  }
  return result;
}

namespace {

// Taylor coefficients of sin/cos/exp at u0, length k+1.
std::vector<double> sin_coeffs(double u0, int k) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1);
  const double s = std::sin(u0), co = std::cos(u0);
  const double cycle[4] = {s, co, -s, -co};
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    c[static_cast<std::size_t>(j)] = cycle[j % 4] / fact;
  }
  return c;
}

std::vector<double> exp_coeffs(double u0, int k) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1);
  const double e = std::exp(u0);
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    c[static_cast<std::size_t>(j)] = e / fact;
  }
  return c;
}

}  // namespace

std::vector<double> sin(const std::vector<double>& a) {
  return compose(sin_coeffs(a[0], static_cast<int>(a.size()) - 1), a);
}

std::vector<double> cos(const std::vector<double>& a) {
  // cos u = sin(u + pi/2) coefficientwise via the same cycle.
  const int k = static_cast<int>(a.size()) - 1;
  std::vector<double> c(static_cast<std::size_t>(k) + 1);
  const double s = std::sin(a[0]), co = std::cos(a[0]);
  const double cycle[4] = {co, -s, -co, s};
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    c[static_cast<std::size_t>(j)] = cycle[j % 4] / fact;
  }
  return compose(c, a);
}

std::vector<double> exp(const std::vector<double>& a) {
  return compose(exp_coeffs(a[0], static_cast<int>(a.size()) - 1), a);
}

std::vector<double> from_derivs(const std::vector<double>& d) {
  std::vector<double> c(d);
  double fact = 1.0;
  for (std::size_t j = 1; j < c.size(); ++j) {
    fact *= static_cast<double>(j);
    c[j] /= fact;
  }
  return c;
}

std::vector<double> to_derivs(const std::vector<double>& c) {
  std::vector<double> d(c);
  double fact = 1.0;
  for (std::size_t j = 1; j < d.size(); ++j) {
    fact *= static_cast<double>(j);
    d[j] *= fact;
  }
  return d;
}

}  // namespace series

Jet jet_add(const Jet& a, const Jet& b) {
  std::vector<double> d(a.derivs());
  for (std::size_t i = 0; i < d.size() && i < b.derivs().size(); ++i)
    d[i] += b.derivs()[i];
  return Jet(a.base_point(), std::move(d));
}

Jet jet_mul(const Jet& a, const Jet& b) {
  auto ca = series::from_derivs(a.derivs());
  auto cb = series::from_derivs(b.derivs());
  return Jet(a.base_point(), series::to_derivs(series::mul(ca, cb)));
}

Jet jet_scale(const Jet& a, double s) {
  std::vector<double> d(a.derivs());
  for (double& v : d) v *= s;
  return Jet(a.base_point(), std::move(d));
}

}  // namespace aagf
