#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <string>
#include <vector>

#include "aagf/nets.hpp"
#include "aagf/smoothfn.hpp"

namespace aagf {

// 80 decimal digits (~266 bits): double-rounded weights lose the moment
// identities catastrophically at L = 12, extended storage does not.
using SeeleyFloat =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<80>>;

/// Truncated Seeley data: nodes b_l = -2^l and weights a_l solving
/// sum_l a_l b_l^n = 1 for n = 0..L-1, solved exactly over the rationals
/// and stored in extended precision. residuals[n] is the moment defect
/// after rounding to storage precision; growth[k] = sum_{n<=k}
/// max(1, sum_l |a_l||b_l|^n) is the extension-bound constant C_k.
struct SeeleySequence {
  int L = 0;
  std::vector<double> b;       // nodes, double view
  std::vector<double> a;       // weights, double view (display only)
  std::vector<SeeleyFloat> a_hi;  // weights used in every evaluation
  std::vector<double> residuals;  // r_n, n = 0..L-1
  std::vector<double> growth;     // C_k, k = 0..max_growth_order

  std::string to_json() const;  // weights as full decimal strings
};

inline constexpr int kSeeleyGrowthOrders = 12;

/// Exact rational Vandermonde solve; ConditioningFailure if any
/// post-rounding residual reaches 1e-8. 1 <= L <= 16.
SeeleySequence build_sequence(int L);

/// Eu(x) = u(x) on J, sum_l a_l u(b_l x) for x < 0; jets use
/// (Eu)^{(n)}(x) = sum_l a_l b_l^n u^{(n)}(b_l x) accumulated in
/// extended precision. DomainError when b_{L-1} x would leave [0, u_hi].
SmoothFnPtr extend(SmoothFnPtr u, const SeeleySequence& seq,
                   double u_hi = 100.0);

/// g_n = |sum_l a_l b_l^n - 1| * |u^{(n)}(0)| = r_n |u^{(n)}(0)|: the
/// derivative jump of Eu at 0 is exactly the truncation defect.
std::vector<double> smoothness_gap(const SmoothFn& u,
                                   const SeeleySequence& seq, int n_max);

struct BoundCheck {
  double lhs = 0.0;  // |Eu|_{k,inf} over the two-sided grid
  double rhs = 0.0;  // C_k * |u|_{k,inf,J}
  double C_k = 0.0;
  bool holds = false;
};

/// |Eu|_{k,inf,R} <= C_k |u|_{k,inf,J}: evaluates both sides on a
/// two-sided grid whose negative window keeps b_l x inside [0, j_grid.hi].
BoundCheck extension_bound_check(SmoothFnPtr u, const SeeleySequence& seq,
                                 int k, const Grid& j_grid = Grid::half_line());

struct ExtendedNet {
  Net net;  // on R
  bool plus_zero = false;  // input tails vanish, so the extension is too
};

/// Epsilon-wise extension; plus_zero records whether the input passed the
/// vanishing check at the probe epsilons (G_{+,0} membership evidence).
ExtendedNet extend_net(const Net& in, const SeeleySequence& seq,
                       double u_hi = 100.0,
                       const std::vector<double>& probe_eps = {0.5, 0.1},
                       int j_max = 2);

}  // namespace aagf
