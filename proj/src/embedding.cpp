#include "aagf/embedding.hpp"

#include <cmath>

#include "aagf/errors.hpp"
#include "aagf/quadrature.hpp"

namespace aagf {

DistributionRep DistributionRep::of(Expression f) {
  return {{{0, 1.0, std::move(f)}}};
}

DistributionRep DistributionRep::derivative_of(Expression f, int order) {
  return {{{order, 1.0, std::move(f)}}};
}

void DistributionRep::validate() const {
  if (terms.empty()) throw ConfigError("distribution representative is empty");
  for (const Term& t : terms) {
    if (t.order < 0 || t.order > 4)
      throw ConfigError("representative derivative order must be in 0..4");
    if (t.f.empty()) throw ConfigError("representative term has no expression");
  }
}

SmoothFnPtr regularize(const DistributionRep& T, const Mollifier& rho,
                       double eps) {
  T.validate();
  if (!(eps > 0.0 && eps <= 1.0))
    throw DomainError("regularization scale must lie in (0, 1]");
  const double R = rho.radius;
  return fn_from_callable([T, rho, eps, R](double x, int order) {
    std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
    for (const DistributionRep::Term& t : T.terms) {
      double inv = std::pow(eps, -static_cast<double>(t.order));
      for (int n = 0; n <= order; ++n, inv /= eps) {
        const int k = t.order + n;
        const double v = integrate_adaptive(
            [&](double y) { return t.f(x - eps * y) * rho.deriv(y, k); }, -R,
            R, 1e-10, 1e-13);
        d[static_cast<std::size_t>(n)] += t.weight * inv * v;
      }
    }
    return Jet(x, std::move(d));
  });
}

Net consistency_residual(Expression f, const Mollifier& rho) {
  const DistributionRep rep = DistributionRep::of(f);
  SmoothFnPtr base = wrap(std::move(f));
  Net net;
  net.domain = Domain::RealLine;
  net.generator = [rep, rho, base](double eps) {
    return fn_diff(regularize(rep, rho, eps), base);
  };
  return net;
}

}  // namespace aagf
