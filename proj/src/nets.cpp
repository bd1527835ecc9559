#include "aagf/nets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aagf/errors.hpp"
#include "nlohmann/json.hpp"

namespace aagf {

std::vector<double> Grid::values() const {
  if (points < 2 || !(hi > lo)) throw Error("grid must have hi > lo, points >= 2");
  std::vector<double> xs(static_cast<std::size_t>(points));
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = lo + i * h;
  return xs;
}

std::vector<double> EpsSchedule::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(count));
  double e = eps0;
  for (int i = 0; i < count; ++i, e *= ratio) out[static_cast<std::size_t>(i)] = e;
  return out;
}

void EpsSchedule::validate() const {
  if (!(eps0 > 0.0 && eps0 <= 1.0)) throw Error("schedule needs 0 < eps0 <= 1");
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error("schedule needs 0 < r < 1");
  if (count < 6) throw Error("schedule needs at least 6 points for a slope fit");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Moderate: return "Moderate";
    case Verdict::Negligible: return "Negligible";
    case Verdict::Neither: return "Neither";
  }
  return "?";
}

double seminorm(const SmoothFn& f, int k, const Grid& grid) {
  std::vector<double> sup(static_cast<std::size_t>(k) + 1, 0.0);
  for (double x : grid.values()) {
    Jet j = f.jet_at(x, k);
    for (int d = 0; d <= k; ++d)
      sup[static_cast<std::size_t>(d)] =
          std::max(sup[static_cast<std::size_t>(d)], std::abs(j.deriv(d)));
  }
  double total = 0.0;
  for (double s : sup) total += s;
  return total;
}

namespace {

constexpr double kLogFloor = 1e-300;

struct LineFit {
  double slope, intercept, r2;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fit = slope * x[i] + intercept;
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  const double r2 = ss_tot < 1e-20 ? 1.0 : 1.0 - ss_res / ss_tot;
  return {slope, intercept, r2};
}

std::vector<double> seminorms_over_schedule(const Net& net, int k,
                                            const EpsSchedule& schedule,
                                            const Grid& grid) {
  std::vector<double> out;
  for (double eps : schedule.values()) {
    SmoothFnPtr f = net.generator(eps);
    out.push_back(seminorm(*f, k, grid));
  }
  return out;
}

}  // namespace

OrderFit fit_order(const Net& net, int k, const EpsSchedule& schedule,
                   const Grid& grid) {
  const std::vector<double> eps = schedule.values();
  const std::vector<double> s = seminorms_over_schedule(net, k, schedule, grid);
  bool all_floor = true;
  for (double v : s) all_floor = all_floor && v <= kLogFloor;
  if (all_floor)
    throw DegenerateFit("all seminorms below absolute floor: identically negligible");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    lx.push_back(std::log(eps[i]));
    ly.push_back(std::log(std::max(s[i], kLogFloor)));
  }
  const LineFit lf = least_squares(lx, ly);
  return {k, lf.slope, lf.intercept, lf.r2};
}

Classification classify(const Net& net, int k_max, const EpsSchedule& schedule,
                        const Grid& grid, const ClassifyOptions& opts) {
  Classification out;
  out.thresholds = opts;
  out.thresholds.k_max = k_max;
  out.schedule = schedule;

  bool identically_small = true;
  bool exact_zero = true;
  for (int k = 0; k <= k_max; ++k) {
    const std::vector<double> s = seminorms_over_schedule(net, k, schedule, grid);
    for (double v : s) {
      identically_small = identically_small && v <= opts.abs_floor;
      exact_zero = exact_zero && v <= kLogFloor;
    }
  }
  if (identically_small) {
    // Below the noise floor at every probed (k, eps): certified at ceiling.
    out.identically_small = true;
    out.verdict = Verdict::Negligible;
    out.negligible_level = opts.cert_ceiling;
    if (!exact_zero) {
      for (int k = 0; k <= k_max; ++k)
        out.fits.push_back(fit_order(net, k, schedule, grid));
    }
    return out;
  }

  bool moderate = true;
  for (int k = 0; k <= k_max; ++k) {
    OrderFit f = fit_order(net, k, schedule, grid);
    // Decaying seminorms are moderate regardless of fit quality; a genuine
    // power-law certificate (R^2) is demanded only for growth. Slopes within
    // the zero tolerance count as flat (near-constant seminorms fit noise).
    const bool ok = f.slope >= -opts.slope_tol(0.0) ||
                    (f.slope >= -opts.m_cap && f.r2 >= opts.r2_min);
    moderate = moderate && ok;
    out.fits.push_back(f);
  }
  if (!moderate) {
    out.verdict = Verdict::Neither;
    return out;
  }

  int level = 0;
  for (int m = 1; m <= opts.cert_ceiling; ++m) {
    bool all = true;
    for (const OrderFit& f : out.fits)
      all = all && f.slope >= static_cast<double>(m) - opts.slope_tol(m);
    if (all)
      level = m;
    else
      break;
  }
  out.negligible_level = level;
  out.verdict = level >= 1 ? Verdict::Negligible : Verdict::Moderate;
  return out;
}

bool lk_check(const SmoothFn& f, int p, int n, const Grid& grid) {
  if (!(0 < p && p < n)) throw Error("lk_check needs 0 < p < n");
  double sup0 = 0, supp = 0, supn = 0;
  for (double x : grid.values()) {
    Jet j = f.jet_at(x, n);
    sup0 = std::max(sup0, std::abs(j.deriv(0)));
    supp = std::max(supp, std::abs(j.deriv(p)));
    supn = std::max(supn, std::abs(j.deriv(n)));
  }
  const double ratio = static_cast<double>(p) / n;
  const double bound =
      2.0 * std::numbers::pi * std::pow(sup0, 1.0 - ratio) * std::pow(supn, ratio);
  return supp <= bound * (1.0 + 1e-12);
}

NullCharacterizationReport null_characterization(const Net& net, int k_max,
                                                 const EpsSchedule& schedule,
                                                 const Grid& grid, int level,
                                                 const ClassifyOptions& opts) {
  NullCharacterizationReport rep;
  rep.level = level;
  Classification cls = classify(net, k_max, schedule, grid, opts);
  rep.moderate = cls.verdict != Verdict::Neither;
  rep.fits = cls.fits;
  if (cls.identically_small) {
    rep.order0_negligible = true;
    rep.per_k_negligible.assign(static_cast<std::size_t>(k_max) + 1, true);
    rep.consistent = true;
    return rep;
  }
  const double tol = opts.slope_tol(level);
  for (const OrderFit& f : cls.fits)
    rep.per_k_negligible.push_back(f.slope >= static_cast<double>(level) - tol);
  rep.order0_negligible = rep.per_k_negligible.at(0);
  bool all = true;
  for (bool b : rep.per_k_negligible) all = all && b;
  rep.consistent = !(rep.order0_negligible && rep.moderate) || all;
  if (!rep.consistent)
    throw InconsistentEvidence(
        "order-0 negligibility did not propagate to higher orders; grid or "
        "schedule too coarse");
  return rep;
}

std::string Classification::to_json() const {
  nlohmann::json j;
  j["verdict"] = to_string(verdict);
  j["negligible_level"] = negligible_level;
  j["identically_small"] = identically_small;
  j["per_k"] = nlohmann::json::array();
  for (const OrderFit& f : fits)
    j["per_k"].push_back({{"k", f.k}, {"slope", f.slope}, {"r2", f.r2}});
  j["thresholds"] = {{"k_max", thresholds.k_max},
                     {"m_cap", thresholds.m_cap},
                     {"r2_min", thresholds.r2_min},
                     {"cert_ceiling", thresholds.cert_ceiling},
                     {"abs_floor", thresholds.abs_floor}};
  j["schedule"] = {{"eps0", schedule.eps0},
                   {"ratio", schedule.ratio},
                   {"count", schedule.count}};
  return j.dump(2);
}

std::string seminorm_table_csv(const Net& net, int k_max,
                               const EpsSchedule& schedule, const Grid& grid) {
  std::ostringstream os;
  os << "eps";
  for (int k = 0; k <= k_max; ++k) os << ",k" << k;
  os << "\n";
  for (double eps : schedule.values()) {
    SmoothFnPtr f = net.generator(eps);
    os << eps;
    for (int k = 0; k <= k_max; ++k) os << "," << seminorm(*f, k, grid);
    os << "\n";
  }
  return os.str();
}

}  // namespace aagf
