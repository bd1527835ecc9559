#pragma once

#include <vector>

#include "aagf/errors.hpp"

namespace aagf {

/// Truncated Taylor data of a smooth function at a point: d[j] = f^(j)(x)
/// for j = 0..order. Immutable after construction.
class Jet {
 public:
  Jet(double base_point, std::vector<double> derivatives)
      : x_(base_point), d_(std::move(derivatives)) {
    if (d_.empty()) throw Error("jet needs at least the value");
  }

  double base_point() const { return x_; }
  int order() const { return static_cast<int>(d_.size()) - 1; }
  double value() const { return d_[0]; }
  double deriv(int j) const { return d_.at(static_cast<std::size_t>(j)); }
  const std::vector<double>& derivs() const { return d_; }

 private:
  double x_;
  std::vector<double> d_;
};

/// Taylor-coefficient arithmetic on series truncated at a fixed order.
/// Series are stored as c[j] = f^(j)(x)/j!; all routines keep length k+1.
namespace series {

std::vector<double> constant(double c, int order);
std::vector<double> variable(double x, int order);
std::vector<double> add(const std::vector<double>& a,
                        const std::vector<double>& b);
std::vector<double> sub(const std::vector<double>& a,
                        const std::vector<double>& b);
std::vector<double> negate(const std::vector<double>& a);
std::vector<double> scale(const std::vector<double>& a, double s);
std::vector<double> mul(const std::vector<double>& a,
                        const std::vector<double>& b);
std::vector<double> div(const std::vector<double>& a,
                        const std::vector<double>& b);
std::vector<double> ipow(const std::vector<double>& a, long long n);

// Composition g(u) where `outer` holds the Taylor coefficients of g at u[0].
std::vector<double> compose(const std::vector<double>& outer,
                            const std::vector<double>& inner);

std::vector<double> sin(const std::vector<double>& a);
std::vector<double> cos(const std::vector<double>& a);
std::vector<double> exp(const std::vector<double>& a);

// Conversions between derivative arrays (d[j] = f^(j)) and coefficients.
std::vector<double> from_derivs(const std::vector<double>& d);
std::vector<double> to_derivs(const std::vector<double>& c);

}  // namespace series

// Jet-level helpers built on the series routines.
Jet jet_add(const Jet& a, const Jet& b);
Jet jet_mul(const Jet& a, const Jet& b);
Jet jet_scale(const Jet& a, double s);

}  // namespace aagf
