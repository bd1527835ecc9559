#include "aagf/seeley.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "aagf/aaa.hpp"
#include "aagf/errors.hpp"
#include "nlohmann/json.hpp"

namespace aagf {

namespace {

using Rational = boost::multiprecision::cpp_rational;
// Residuals are recomputed well above storage precision so they measure
// the rounding of the weights, not of the check itself.
using CheckFloat =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>>;

}  // namespace

SeeleySequence build_sequence(int L) {
  if (L < 1 || L > 16) throw ConfigError("Seeley truncation needs 1 <= L <= 16");
  SeeleySequence seq;
  seq.L = L;

  std::vector<Rational> nodes;
  for (int l = 0; l < L; ++l) {
    nodes.emplace_back(-(boost::multiprecision::cpp_int(1) << l));
    seq.b.push_back(-std::ldexp(1.0, l));
  }

  // sum_l a_l q(b_l) = q(1) for every polynomial of degree < L forces
  // a_l = ell_l(1), the Lagrange basis at the nodes evaluated at 1.
  for (int l = 0; l < L; ++l) {
    Rational w = 1;
    for (int m = 0; m < L; ++m) {
      if (m == l) continue;
      w *= (Rational(1) - nodes[static_cast<std::size_t>(m)]) /
           (nodes[static_cast<std::size_t>(l)] -
            nodes[static_cast<std::size_t>(m)]);
    }
    seq.a_hi.push_back(static_cast<SeeleyFloat>(w));
    seq.a.push_back(static_cast<double>(seq.a_hi.back()));
  }

  for (int n = 0; n < L; ++n) {
    CheckFloat sum = 0;
    for (int l = 0; l < L; ++l) {
      CheckFloat bn = pow(CheckFloat(seq.b[static_cast<std::size_t>(l)]), n);
      sum += static_cast<CheckFloat>(seq.a_hi[static_cast<std::size_t>(l)]) * bn;
    }
    const double r = static_cast<double>(abs(sum - 1));
    seq.residuals.push_back(r);
    if (r >= 1e-8)
      throw ConditioningFailure("moment residual " + std::to_string(r) +
                                " at n = " + std::to_string(n) +
                                ": L too large for storage precision");
  }

  CheckFloat c = 0;
  for (int n = 0; n <= kSeeleyGrowthOrders; ++n) {
    CheckFloat s = 0;
    for (int l = 0; l < L; ++l)
      s += abs(static_cast<CheckFloat>(seq.a_hi[static_cast<std::size_t>(l)])) *
           pow(CheckFloat(-seq.b[static_cast<std::size_t>(l)]), n);
    c += s > 1 ? s : CheckFloat(1);
    seq.growth.push_back(static_cast<double>(c));
  }
  return seq;
}

SmoothFnPtr extend(SmoothFnPtr u, const SeeleySequence& seq, double u_hi) {
  if (!u || seq.L < 1) throw Error("extension needs a function and a sequence");
  const double reach = -seq.b.back();  // |b_{L-1}|
  return fn_from_callable([u, seq, u_hi, reach](double x, int order) {
    if (x >= 0.0) return u->jet_at(x, order);
    if (reach * (-x) > u_hi)
      throw DomainError("extension at x = " + std::to_string(x) +
                        " needs u beyond its valid range [0, " +
                        std::to_string(u_hi) + "]");
    std::vector<SeeleyFloat> acc(static_cast<std::size_t>(order) + 1, 0);
    for (int l = 0; l < seq.L; ++l) {
      const double bl = seq.b[static_cast<std::size_t>(l)];
      const Jet jl = u->jet_at(bl * x, order);
      SeeleyFloat factor = seq.a_hi[static_cast<std::size_t>(l)];
      for (int n = 0; n <= order; ++n, factor *= bl)
        acc[static_cast<std::size_t>(n)] += factor * jl.deriv(n);
    }
    std::vector<double> d(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
      d[i] = static_cast<double>(acc[i]);
    return Jet(x, std::move(d));
  });
}

std::vector<double> smoothness_gap(const SmoothFn& u,
                                   const SeeleySequence& seq, int n_max) {
  if (n_max > seq.L - 1)
    throw Error("smoothness_gap probes at most order L-1");
  const Jet j0 = u.jet_at(0.0, n_max);
  std::vector<double> gaps;
  for (int n = 0; n <= n_max; ++n)
    gaps.push_back(seq.residuals[static_cast<std::size_t>(n)] *
                   std::abs(j0.deriv(n)));
  return gaps;
}

BoundCheck extension_bound_check(SmoothFnPtr u, const SeeleySequence& seq,
                                 int k, const Grid& j_grid) {
  BoundCheck out;
  out.C_k = seq.growth.at(static_cast<std::size_t>(k));
  SmoothFnPtr eu = extend(u, seq, j_grid.hi);
  const double reach = -seq.b.back();
  Grid two_sided{-j_grid.hi / reach, j_grid.hi, j_grid.points};
  out.lhs = seminorm(*eu, k, two_sided);
  out.rhs = out.C_k * seminorm(*u, k, j_grid);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-12;
  return out;
}

ExtendedNet extend_net(const Net& in, const SeeleySequence& seq, double u_hi,
                       const std::vector<double>& probe_eps, int j_max) {
  ExtendedNet out;
  out.net.domain = Domain::RealLine;
  out.net.generator = [in, seq, u_hi](double eps) {
    return extend(in.generator(eps), seq, u_hi);
  };
  out.plus_zero = !probe_eps.empty();
  for (double eps : probe_eps)
    out.plus_zero = out.plus_zero && check_vanishing(*in.generator(eps), j_max);
  return out;
}

std::string SeeleySequence::to_json() const {
  nlohmann::json j;
  j["L"] = L;
  j["b"] = b;
  nlohmann::json weights = nlohmann::json::array();
  for (const SeeleyFloat& w : a_hi)
    weights.push_back(w.str(82, std::ios_base::scientific));
  j["a"] = weights;
  j["residuals"] = residuals;
  j["C"] = growth;
  return j.dump(2);
}

}  // namespace aagf
