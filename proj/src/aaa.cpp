#include "aagf/aaa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aagf/errors.hpp"
#include "nlohmann/json.hpp"

namespace aagf {

namespace {

std::vector<double> window_points(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + i * h;
  return xs;
}

double grid_sup_diff(const SmoothFn& a, const SmoothFn& b, const Grid& g) {
  double sup = 0.0;
  for (double x : g.values()) sup = std::max(sup, std::abs(a(x) - b(x)));
  return sup;
}

}  // namespace

bool check_vanishing(const SmoothFn& h, int j_max,
                     const VanishingOptions& opts) {
  if (opts.windows.empty()) throw ConfigError("vanishing check needs windows");
  for (int j = 0; j <= j_max; ++j) {
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (const auto& [lo, hi] : opts.windows) {
      double sup = 0.0;
      for (double x : window_points(lo, hi, opts.points_per_window))
        sup = std::max(sup, std::abs(h.jet_at(x, j).deriv(j)));
      if (sup > prev + opts.tol) return false;  // tail grows back
      prev = sup;
      last = sup;
    }
    if (!(last < opts.tol)) return false;
  }
  return true;
}

BochnerProbe bochner_probe(const SmoothFn& g, const std::vector<double>& s,
                           const std::vector<double>& probe_x,
                           const BochnerOptions& opts) {
  if (s.size() < static_cast<std::size_t>(opts.min_size) || probe_x.empty())
    throw ConfigError("bochner probe needs a sequence and a probe grid");

  // Tabulate the translate rows once.
  const std::size_t M = s.size(), P = probe_x.size();
  std::vector<double> rows(M * P);
  double amp = 0.0;
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t i = 0; i < P; ++i) {
      const double v = g(probe_x[i] + s[m]);
      rows[m * P + i] = v;
      amp = std::max(amp, std::abs(v));
    }
  amp = std::max(amp, 1e-30);

  auto dist = [&](std::size_t a, std::size_t b) {
    double d = 0.0;
    for (std::size_t i = 0; i < P; ++i)
      d = std::max(d, std::abs(rows[a * P + i] - rows[b * P + i]));
    return d / amp;
  };

  BochnerProbe out;
  out.amplitude = amp;
  std::vector<std::size_t> sel(M);
  for (std::size_t m = 0; m < M; ++m) sel[m] = m;
  double delta = opts.delta0;
  while (delta > opts.delta_target) {
    delta *= 0.5;
    // Reference the tail translate: the limit lives at +infinity, so
    // clusters must form among late terms, not around the first one.
    const std::size_t ref = sel.back();
    std::vector<std::size_t> next;
    for (std::size_t m : sel)
      if (dist(ref, m) <= delta) next.push_back(m);
    if (next.size() < static_cast<std::size_t>(opts.min_size))
      throw NoConvergentSubsequence(
          "no cluster of the requested size at delta " + std::to_string(delta) +
          "; sequence too short for this probe");
    sel = std::move(next);
  }
  out.delta_final = delta;

  // Limit estimate: average of the cluster tail.
  const std::size_t tail =
      std::min<std::size_t>(sel.size(), static_cast<std::size_t>(opts.tail));
  const std::size_t tail_begin = sel.size() - tail;
  out.limit.assign(P, 0.0);
  for (std::size_t t = tail_begin; t < sel.size(); ++t)
    for (std::size_t i = 0; i < P; ++i) out.limit[i] += rows[sel[t] * P + i];
  for (double& v : out.limit) v /= static_cast<double>(tail);

  // Return limit: g~(x - s_k) = avg_j g(x - s_k + s_j) against g(x).
  double residual = 0.0;
  for (std::size_t t = tail_begin; t < sel.size(); ++t) {
    const double sk = s[sel[t]];
    for (std::size_t i = 0; i < P; ++i) {
      double back = 0.0;
      for (std::size_t r = tail_begin; r < sel.size(); ++r)
        back += g(probe_x[i] - sk + s[sel[r]]);
      back /= static_cast<double>(tail);
      const double gap = std::abs(back - g(probe_x[i]));
      if (!std::isfinite(gap)) {
        residual = std::numeric_limits<double>::infinity();
        break;
      }
      residual = std::max(residual, gap);
    }
  }
  out.residual = residual / amp;
  out.selected = std::move(sel);
  return out;
}

std::string probe_report_json(const BochnerProbe& p) {
  nlohmann::json j;
  j["selected_count"] = p.selected.size();
  j["selected"] = p.selected;
  j["delta_final"] = p.delta_final;
  j["amplitude"] = p.amplitude;
  j["residual"] = p.residual;
  j["limit"] = p.limit;
  return j.dump(2);
}

UniquenessReport decompose_uniqueness_test(const AAASpec& spec1,
                                           const AAASpec& spec2,
                                           const UniquenessOptions& opts) {
  UniquenessReport rep;
  SmoothFnPtr f1 = spec1.sum_fn(), f2 = spec2.sum_fn();
  rep.sum_gap = grid_sup_diff(*f1, *f2, opts.j_grid);
  if (rep.sum_gap > 1e-12)
    throw Error("uniqueness test requires identical synthesized sums");

  std::vector<double> seq(static_cast<std::size_t>(opts.sequence_length));
  for (std::size_t m = 0; m < seq.size(); ++m)
    seq[m] = static_cast<double>(m + 1);
  const std::vector<double> probe_x = window_points(0.0, 20.0, 41);

  auto validate = [&](const AAASpec& spec, const char* which) {
    if (!check_vanishing(*spec.corrective_fn(), 2, opts.vanishing))
      throw UniquenessViolation(std::string(which) +
                                " corrective part fails the vanishing check");
    double residual;
    try {
      residual =
          bochner_probe(*spec.principal_fn(), seq, probe_x, opts.probe).residual;
    } catch (const NoConvergentSubsequence&) {
      throw UniquenessViolation(std::string(which) +
                                " principal part yields no convergent "
                                "translate subsequence");
    }
    if (!(residual < opts.probe_tol))
      throw UniquenessViolation(
          std::string(which) +
          " principal part fails the Bochner return limit (residual " +
          std::to_string(residual) + ")");
    return residual;
  };
  rep.probe_residual1 = validate(spec1, "first");
  rep.probe_residual2 = validate(spec2, "second");

  rep.principal_gap =
      grid_sup_diff(*spec1.principal_fn(), *spec2.principal_fn(), opts.r_grid);
  rep.corrective_gap =
      grid_sup_diff(*spec1.corrective_fn(), *spec2.corrective_fn(), opts.j_grid);
  if (rep.principal_gap > opts.part_tol || rep.corrective_gap > opts.part_tol)
    throw UniquenessViolation("equal sums produced different parts: |dg| = " +
                              std::to_string(rep.principal_gap) + ", |dh| = " +
                              std::to_string(rep.corrective_gap));
  return rep;
}

DecomposeNetResult decompose_net(const AAANet& net, const EpsSchedule& schedule,
                                 const DecomposeNetOptions& opts) {
  DecomposeNetResult out;
  out.principal = {[net](double eps) { return net.spec_at(eps).principal_fn(); },
                   Domain::RealLine};
  out.corrective = {
      [net](double eps) { return net.spec_at(eps).corrective_fn(); },
      Domain::HalfLine};
  out.full = {[net](double eps) { return net.spec_at(eps).sum_fn(); },
              Domain::HalfLine};

  std::vector<double> seq;
  std::vector<double> probe_x;
  if (opts.run_probes) {
    seq.resize(static_cast<std::size_t>(opts.sequence_length));
    for (std::size_t m = 0; m < seq.size(); ++m)
      seq[m] = static_cast<double>(m + 1);
    probe_x = window_points(0.0, 20.0, 41);
  }

  for (double eps : schedule.values()) {
    const AAASpec spec = net.spec_at(eps);
    DecomposeDiagnostics d;
    d.eps = eps;
    d.corrective_vanishing =
        check_vanishing(*spec.corrective_fn(), 2, opts.vanishing);
    SmoothFnPtr parts = fn_sum(spec.principal_fn(), spec.corrective_fn());
    d.sum_gap = grid_sup_diff(*parts, *spec.sum_fn(), opts.j_grid);
    if (opts.run_probes)
      d.probe_residual =
          bochner_probe(*spec.principal_fn(), seq, probe_x, opts.probe).residual;
    out.per_eps.push_back(d);
  }
  return out;
}

double faa_di_bruno(const Jet& Fjet, const Jet& ujet, int j) {
  if (j > 8) throw OrderTooHigh("partition enumeration capped at order 8");
  if (j < 0) throw Error("derivative order must be nonnegative");
  if (Fjet.order() < j || ujet.order() < j)
    throw Error("jets too short for the requested order");
  if (j == 0) return Fjet.value();

  double factorial[9];
  factorial[0] = 1.0;
  for (int i = 1; i <= 8; ++i) factorial[i] = factorial[i - 1] * i;

  // Enumerate multi-indices (l_1..l_j) with sum i*l_i = j.
  double total = 0.0;
  std::vector<int> l(static_cast<std::size_t>(j) + 1, 0);
  auto recurse = [&](auto&& self, int i, int remaining) -> void {
    if (i > j) {
      if (remaining != 0) return;
      int r = 0;
      double denom = 1.0, prod = 1.0;
      for (int t = 1; t <= j; ++t) {
        const int lt = l[static_cast<std::size_t>(t)];
        r += lt;
        denom *= factorial[lt];
        for (int c = 0; c < lt; ++c)
          prod *= ujet.deriv(t) / factorial[t];
      }
      total += Fjet.deriv(r) / denom * prod;
      return;
    }
    for (int li = 0; li * i <= remaining; ++li) {
      l[static_cast<std::size_t>(i)] = li;
      self(self, i + 1, remaining - li * i);
    }
    l[static_cast<std::size_t>(i)] = 0;
  };
  recurse(recurse, 1, j);
  return total * factorial[j];
}

TemperedSpec make_tempered(Expression F, int k_max, double window_radius,
                           int N_max) {
  TemperedSpec spec;
  spec.F = std::move(F);
  spec.window_radius = window_radius;
  spec.certified = true;
  const std::vector<double> xs = window_points(-window_radius, window_radius, 1601);
  for (int j = 0; j <= k_max; ++j) {
    std::vector<double> mag;
    for (double x : xs) mag.push_back(std::abs(spec.F.jet(x, j).deriv(j)));
    // Smallest N for which (1+|x|)^{-N}|F^(j)| is nonincreasing in |x|
    // over the outer half of the window: polynomial domination evidence.
    int found = -1;
    for (int N = 0; N <= N_max && found < 0; ++N) {
      bool ok = true;
      double prev_pos = std::numeric_limits<double>::infinity();
      double prev_neg = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        if (std::abs(x) < 0.5 * window_radius) continue;
        const double v = mag[i] / std::pow(1.0 + std::abs(x), N);
        double& prev = x > 0 ? prev_pos : prev_neg;
        // Walk outward on the positive side, inward on the negative side.
        if (x > 0) {
          if (v > prev * (1.0 + 1e-9) + 1e-12) ok = false;
          prev = v;
        } else {
          if (prev != std::numeric_limits<double>::infinity() &&
              prev > v * (1.0 + 1e-9) + 1e-12)
            ok = false;
          prev = v;
        }
      }
      if (ok) found = N;
    }
    if (found < 0) {
      spec.certified = false;
      found = N_max + 1;
    }
    spec.growth_exponents.push_back(found);
  }
  return spec;
}

SmoothFnPtr fn_compose_expr(Expression outer, SmoothFnPtr inner) {
  if (outer.empty() || !inner) throw Error("composition needs both functions");
  return fn_from_callable([outer, inner](double x, int order) {
    const Jet u = inner->jet_at(x, order);
    const Jet F = outer.jet(u.value(), order);
    const std::vector<double> c = series::compose(
        series::from_derivs(F.derivs()), series::from_derivs(u.derivs()));
    return Jet(x, series::to_derivs(c));
  });
}

CompositionResult compose(const TemperedSpec& F, const AAASpec& u,
                          const Grid& j_grid) {
  if (!F.certified)
    throw ConfigError(
        "outer function lacks growth certificates on its window");
  SmoothFnPtr g = u.principal_fn();
  SmoothFnPtr sum = u.sum_fn();
  for (double x : j_grid.values()) {
    const double inner = (*sum)(x);
    const double principal_inner = (*g)(x);
    if (std::abs(inner) > F.window_radius ||
        std::abs(principal_inner) > F.window_radius)
      throw DomainError("inner range leaves the certificate window");
  }
  CompositionResult out;
  out.composed = fn_compose_expr(F.F, sum);
  out.principal = fn_compose_expr(F.F, g);
  out.corrective = fn_diff(out.composed, out.principal);
  return out;
}

}  // namespace aagf
