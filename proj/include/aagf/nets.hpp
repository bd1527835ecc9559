#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aagf/smoothfn.hpp"

namespace aagf {

enum class Domain { RealLine, HalfLine };

/// Uniform evaluation grid. Sup norms are grid sups; refinement only ever
/// increases a seminorm.
struct Grid {
  double lo = -50.0;
  double hi = 50.0;
  int points = 4001;

  std::vector<double> values() const;

  static Grid real_line() { return {-50.0, 50.0, 4001}; }
  static Grid half_line() { return {0.0, 100.0, 4001}; }
};

/// Geometric epsilon schedule eps_i = eps0 * r^i, i = 0..count-1.
struct EpsSchedule {
  double eps0 = 0.5;
  double ratio = 0.7;
  int count = 12;

  std::vector<double> values() const;
  void validate() const;
};

/// A net of smooth functions indexed by epsilon in (0, 1].
struct Net {
  std::function<SmoothFnPtr(double)> generator;
  Domain domain = Domain::RealLine;
};

struct OrderFit {
  int k = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

enum class Verdict { Moderate, Negligible, Neither };

std::string to_string(Verdict v);

struct ClassifyOptions {
  int k_max = 2;
  double m_cap = 12.0;      // moderate: slope >= -m_cap
  double r2_min = 0.9;      // power-law evidence for decaying-seminorm fits
  int cert_ceiling = 6;     // largest negligibility level ever certified
  double abs_floor = 1e-11; // below this at every (k, eps): identically small

  double slope_tol(double m) const { return 0.05 * std::abs(m) + 0.1; }
};

/// Verdict plus the evidence that produced it. `negligible_level` is the
/// largest m <= cert_ceiling with every fitted slope >= m (tolerance
/// adjusted); any finite run certifies only a (k_max, level) rectangle.
struct Classification {
  Verdict verdict = Verdict::Neither;
  int negligible_level = 0;
  bool identically_small = false;
  std::vector<OrderFit> fits;
  ClassifyOptions thresholds;
  EpsSchedule schedule;

  std::string to_json() const;
};

/// |f|_{k,inf,grid} = sum_{j<=k} sup_grid |f^(j)|.
double seminorm(const SmoothFn& f, int k, const Grid& grid);

/// Least-squares slope of log seminorm against log eps over the schedule.
OrderFit fit_order(const Net& net, int k, const EpsSchedule& schedule,
                   const Grid& grid);

Classification classify(const Net& net, int k_max, const EpsSchedule& schedule,
                        const Grid& grid, const ClassifyOptions& opts = {});

/// Landau-Kolmogorov sanity oracle:
/// ||f^(p)|| <= 2*pi * ||f||^(1-p/n) * ||f^(n)||^(p/n), 0 < p < n.
bool lk_check(const SmoothFn& f, int p, int n, const Grid& grid);

struct NullCharacterizationReport {
  int level = 3;  // certification level probed
  bool moderate = false;
  bool order0_negligible = false;
  std::vector<bool> per_k_negligible;
  bool consistent = false;
  std::vector<OrderFit> fits;
};

/// Numerical form of the order-zero null characterization: order-0
/// negligible and moderate must imply negligibility at every probed k.
/// Throws InconsistentEvidence when the implication fails (grid or
/// schedule too coarse).
NullCharacterizationReport null_characterization(
    const Net& net, int k_max, const EpsSchedule& schedule, const Grid& grid,
    int level = 3, const ClassifyOptions& opts = {});

/// Seminorm table (rows = eps, columns = k) in CSV form.
std::string seminorm_table_csv(const Net& net, int k_max,
                               const EpsSchedule& schedule, const Grid& grid);

}  // namespace aagf
