#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aagf/expression.hpp"
#include "aagf/jet.hpp"
#include "aagf/nets.hpp"
#include "aagf/smoothfn.hpp"

namespace aagf {

/// Structure-carrying decomposition f = g + h on J: g almost automorphic
/// on the whole line, h vanishing at +infinity together with its
/// derivatives. Decomposition always operates on this declared structure;
/// bochner_probe and check_vanishing are the verification layer on top.
struct AAASpec {
  Expression principal;   // g, defined on R
  Expression corrective;  // h, defined on J

  Expression sum_expr() const { return principal + corrective; }
  SmoothFnPtr principal_fn() const { return wrap(principal); }
  SmoothFnPtr corrective_fn() const { return wrap(corrective); }
  SmoothFnPtr sum_fn() const { return wrap(sum_expr()); }
};

struct VanishingOptions {
  // Successive tail windows; the sup must fall below tol on the last one.
  std::vector<std::pair<double, double>> windows = {
      {20.0, 40.0}, {40.0, 80.0}, {80.0, 160.0}, {160.0, 200.0}};
  double tol = 1e-4;
  int points_per_window = 801;
};

/// True iff sup_{window}|h^(j)| decreases across the windows and ends
/// below tol, for every j <= j_max.
bool check_vanishing(const SmoothFn& h, int j_max,
                     const VanishingOptions& opts = {});

struct BochnerOptions {
  double delta0 = 1.0;        // starting cluster radius (relative)
  double delta_target = 0.004;  // stop halving here
  int min_size = 4;           // smallest admissible cluster
  int tail = 16;              // translates averaged into the limit
};

struct BochnerProbe {
  std::vector<std::size_t> selected;  // subsequence indices into s
  double delta_final = 0.0;
  double amplitude = 0.0;    // normalization sup over translates
  double residual = 0.0;     // relative return-limit residual
  std::vector<double> limit;  // g~ on the probe grid
};

/// Greedy Cauchy clustering of the translates g(. + s_m) on the probe
/// grid with delta halving; the limit estimate is the average of the
/// cluster tail and the residual measures the return translates
/// g~(x - s_k) against g(x). Distances and residuals are relative to the
/// overall translate amplitude. Throws NoConvergentSubsequence when a
/// cluster of min_size cannot be kept down to delta_target (the sequence
/// is too short, not a disproof of almost automorphy).
BochnerProbe bochner_probe(const SmoothFn& g, const std::vector<double>& s,
                           const std::vector<double>& probe_x,
                           const BochnerOptions& opts = {});

std::string probe_report_json(const BochnerProbe& p);

struct UniquenessReport {
  double sum_gap = 0.0;        // sup |f1 - f2| on J (precondition check)
  double principal_gap = 0.0;  // sup |g1 - g2| on the R grid
  double corrective_gap = 0.0;  // sup |h1 - h2| on the J grid
  double probe_residual1 = 0.0;
  double probe_residual2 = 0.0;
};

struct UniquenessOptions {
  Grid r_grid = {-50.0, 50.0, 2001};
  Grid j_grid = {0.0, 100.0, 2001};
  double part_tol = 1e-6;
  double probe_tol = 0.05;  // relative return-limit residual ceiling
  int sequence_length = 10000;
  VanishingOptions vanishing;
  BochnerOptions probe;
};

/// Numerical content of decomposition uniqueness: both specs must
/// synthesize the same sum (precondition, 1e-12), both principals must
/// survive the Bochner return-limit probe and both correctives the
/// vanishing check, and then the parts must agree within part_tol.
/// Throws UniquenessViolation when a probe or the part comparison fails.
UniquenessReport decompose_uniqueness_test(const AAASpec& spec1,
                                           const AAASpec& spec2,
                                           const UniquenessOptions& opts = {});

/// Net whose generator exposes its decomposition structure.
struct AAANet {
  std::function<AAASpec(double)> spec_at;
};

struct DecomposeDiagnostics {
  double eps = 0.0;
  bool corrective_vanishing = false;
  double sum_gap = 0.0;       // sup |g + h - f| on the J grid
  double probe_residual = -1.0;  // -1 when probes were not run
};

struct DecomposeNetResult {
  Net principal;   // on R
  Net corrective;  // on J
  Net full;        // on J
  std::vector<DecomposeDiagnostics> per_eps;
};

struct DecomposeNetOptions {
  Grid j_grid = {0.0, 100.0, 2001};
  bool run_probes = false;
  int sequence_length = 10000;
  BochnerOptions probe{.delta_target = 0.25};
  VanishingOptions vanishing;
};

DecomposeNetResult decompose_net(const AAANet& net, const EpsSchedule& schedule,
                                 const DecomposeNetOptions& opts = {});

/// (F o u)^{(j)}(x) by the explicit partition sum: Fjet holds the
/// derivatives of F at u(x), ujet those of u at x. Independent of the
/// Taylor-composition route in jetcalc; the two must agree.
double faa_di_bruno(const Jet& Fjet, const Jet& ujet, int j);

/// Outer function with measured polynomial-growth certificates on a
/// window; composition demands the window to cover the inner range.
struct TemperedSpec {
  Expression F;
  double window_radius = 100.0;
  std::vector<int> growth_exponents;  // N_j per derivative order
  bool certified = false;             // all N_j found with N_j <= N_max
};

TemperedSpec make_tempered(Expression F, int k_max, double window_radius = 100.0,
                           int N_max = 8);

struct CompositionResult {
  SmoothFnPtr composed;    // F o (g + h) on J
  SmoothFnPtr principal;   // F o g on R
  SmoothFnPtr corrective;  // F o (g + h) - F o g on J
};

/// F o u with the principal/corrective split. The identity
/// principal + corrective = composed holds exactly by construction;
/// range coverage by the certificate window is enforced on the J grid.
CompositionResult compose(const TemperedSpec& F, const AAASpec& u,
                          const Grid& j_grid = {0.0, 100.0, 2001});

/// F evaluated through u as a jet source (Taylor composition of jets).
SmoothFnPtr fn_compose_expr(Expression outer, SmoothFnPtr inner);

}  // namespace aagf
