#include "aagf/ndds.hpp"

#include <cmath>

#include "aagf/errors.hpp"
#include "aagf/quadrature.hpp"
#include "nlohmann/json.hpp"

namespace aagf {

namespace {

using Cplx = std::complex<double>;

constexpr double kGLNodes[8] = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975362};
constexpr double kGLWeights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

struct Mode {
  Cplx lambda;
  std::vector<std::vector<Cplx>> P;  // spectral projector
};

std::vector<Mode> spectral_split(const std::vector<std::vector<double>>& A) {
  const std::size_t n = A.size();
  for (const auto& row : A)
    if (row.size() != n) throw ConfigError("system matrix must be square");
  std::vector<Mode> modes;
  if (n == 1) {
    modes.push_back({Cplx(A[0][0], 0.0), {{Cplx(1.0, 0.0)}}});
  } else if (n == 2) {
    const double tr = A[0][0] + A[1][1];
    const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    const Cplx disc = std::sqrt(Cplx(tr * tr - 4.0 * det, 0.0));
    const Cplx l1 = 0.5 * (Cplx(tr, 0.0) + disc);
    const Cplx l2 = 0.5 * (Cplx(tr, 0.0) - disc);
    if (std::abs(l1 - l2) < 1e-10) {
      const bool scalar_multiple = std::abs(A[0][1]) < 1e-14 &&
                                   std::abs(A[1][0]) < 1e-14 &&
                                   std::abs(A[0][0] - A[1][1]) < 1e-14;
      if (!scalar_multiple)
        throw ConfigError("defective system matrix not supported");
      modes.push_back({l1,
                       {{Cplx(1.0, 0.0), Cplx(0.0, 0.0)},
                        {Cplx(0.0, 0.0), Cplx(1.0, 0.0)}}});
    } else {
      // P1 = (A - l2 I) / (l1 - l2), P2 = I - P1.
      std::vector<std::vector<Cplx>> p1(2, std::vector<Cplx>(2));
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          p1[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
              (Cplx(A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                    0.0) -
               (r == c ? l2 : Cplx(0.0, 0.0))) /
              (l1 - l2);
      std::vector<std::vector<Cplx>> p2(2, std::vector<Cplx>(2));
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          p2[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
              (r == c ? Cplx(1.0, 0.0) : Cplx(0.0, 0.0)) -
              p1[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      modes.push_back({l1, p1});
      modes.push_back({l2, p2});
    }
  } else {
    throw ConfigError("LSE solver handles n <= 2");
  }
  for (const Mode& m : modes)
    if (std::abs(m.lambda.real()) < 1e-8)
      throw NonHyperbolic("eigenvalue " + std::to_string(m.lambda.real()) +
                          " + " + std::to_string(m.lambda.imag()) +
                          "i too close to the imaginary axis");
  return modes;
}

/// Bounded solution of v' + A v = g on R: past integral over the stable
/// spectrum, future integral over the unstable spectrum. All derivative
/// orders accumulate in one pass over the quadrature nodes.
class GreenLineFn : public SmoothFn {
 public:
  GreenLineFn(std::vector<Mode> modes, std::vector<SmoothFnPtr> g,
              std::size_t component, double horizon_factor, double panel_width)
      : modes_(std::move(modes)),
        g_(std::move(g)),
        c_(component),
        horizon_(horizon_factor),
        panel_(panel_width) {}

  Jet jet_at(double x, int order) const override {
    std::vector<Cplx> acc(static_cast<std::size_t>(order) + 1, Cplx(0.0, 0.0));
    const std::size_t n = g_.size();
    for (const Mode& mode : modes_) {
      const bool stable = mode.lambda.real() > 0.0;
      const double rate = std::abs(mode.lambda.real());
      const double T = horizon_ / rate;

      // One GL8 pass over [a, b] in the integration variable s.
      auto gl8 = [&](double a, double b) {
        std::vector<Cplx> out(static_cast<std::size_t>(order) + 1,
                              Cplx(0.0, 0.0));
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 8; ++q) {
          const double s = mid + half * kGLNodes[q];
          const double y = stable ? x - s : x + s;
          const Cplx ker = stable ? std::exp(-mode.lambda * s)
                                  : -std::exp(mode.lambda * s);
          const Cplx coef = half * kGLWeights[q] * ker;
          for (std::size_t d = 0; d < n; ++d) {
            const Cplx pcd = mode.P[c_][d];
            if (pcd == Cplx(0.0, 0.0)) continue;
            const Jet jd = g_[d]->jet_at(y, order);
            for (int m = 0; m <= order; ++m)
              out[static_cast<std::size_t>(m)] += coef * pcd * jd.deriv(m);
          }
        }
        return out;
      };

      // Bisect panels until the whole-panel estimate agrees with the two
      // halves: the forcing may oscillate violently on short stretches
      // (almost periodic denominators can nearly vanish), and only those
      // stretches deserve the extra nodes.
      auto adapt = [&](auto&& self, double a, double b,
                       const std::vector<Cplx>& whole, int depth) -> void {
        const double mid = 0.5 * (a + b);
        const std::vector<Cplx> left = gl8(a, mid);
        const std::vector<Cplx> right = gl8(mid, b);
        bool converged = true;
        for (int m = 0; m <= order; ++m) {
          const Cplx sum = left[static_cast<std::size_t>(m)] +
                           right[static_cast<std::size_t>(m)];
          const double diff = std::abs(whole[static_cast<std::size_t>(m)] - sum);
          if (diff > 1e-13 + 1e-12 * std::abs(sum)) converged = false;
        }
        if (converged || depth >= 24) {
          for (int m = 0; m <= order; ++m)
            acc[static_cast<std::size_t>(m)] +=
                left[static_cast<std::size_t>(m)] +
                right[static_cast<std::size_t>(m)];
          return;
        }
        self(self, a, mid, left, depth + 1);
        self(self, mid, b, right, depth + 1);
      };

      const int panels = std::max(1, static_cast<int>(std::ceil(T / panel_)));
      const double h = T / panels;
      for (int p = 0; p < panels; ++p)
        adapt(adapt, p * h, (p + 1) * h, gl8(p * h, (p + 1) * h), 0);
    }
    std::vector<double> d(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) d[i] = acc[i].real();
    return Jet(x, std::move(d));
  }

 private:
  std::vector<Mode> modes_;
  std::vector<SmoothFnPtr> g_;
  std::size_t c_;
  double horizon_, panel_;
};

/// Decaying solution of w' + A w = h on J: stable part started at zero,
/// unstable part integrated from the future. The value is quadrature;
/// higher jets use the recurrence w^{(m+1)} = h^{(m)} - A w^{(m)}.
class GreenHalfFn : public SmoothFn {
 public:
  GreenHalfFn(std::vector<Mode> modes, std::vector<std::vector<double>> A,
              std::vector<SmoothFnPtr> h, std::size_t component,
              double horizon_factor, double panel_width)
      : modes_(std::move(modes)),
        A_(std::move(A)),
        h_(std::move(h)),
        c_(component),
        horizon_(horizon_factor),
        panel_(panel_width) {}

  Jet jet_at(double x, int order) const override {
    const std::size_t n = h_.size();
    // w(x) for every component (the recurrence couples them).
    std::vector<double> w0(n);
    for (std::size_t d = 0; d < n; ++d) w0[d] = value_component(x, d);
    // jets[m][d] = w_d^{(m)}(x).
    std::vector<std::vector<double>> jets(static_cast<std::size_t>(order) + 1);
    jets[0] = w0;
    std::vector<Jet> hj;
    for (std::size_t d = 0; d < n; ++d)
      hj.push_back(h_[d]->jet_at(x, std::max(0, order - 1)));
    for (int m = 0; m < order; ++m) {
      std::vector<double> next(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        double av = 0.0;
        for (std::size_t d = 0; d < n; ++d)
          av += A_[r][d] * jets[static_cast<std::size_t>(m)][d];
        next[r] = hj[r].deriv(m) - av;
      }
      jets[static_cast<std::size_t>(m) + 1] = std::move(next);
    }
    std::vector<double> out(static_cast<std::size_t>(order) + 1);
    for (int m = 0; m <= order; ++m)
      out[static_cast<std::size_t>(m)] = jets[static_cast<std::size_t>(m)][c_];
    return Jet(x, std::move(out));
  }

 private:
  double value_component(double x, std::size_t comp) const {
    Cplx acc(0.0, 0.0);
    const std::size_t n = h_.size();
    for (const Mode& mode : modes_) {
      const bool stable = mode.lambda.real() > 0.0;
      double lo, hi;
      if (stable) {
        lo = 0.0;
        hi = x;  // signed: x may sit slightly left of 0 on check grids
      } else {
        lo = x;
        hi = x + horizon_ / std::abs(mode.lambda.real());
      }
      const double len = std::abs(hi - lo);
      if (len < 1e-300) continue;
      const int panels = std::max(1, static_cast<int>(std::ceil(len / panel_)));
      const double h = (hi - lo) / panels;
      for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h;
        for (int q = 0; q < 8; ++q) {
          const double t = mid + 0.5 * h * kGLNodes[q];
          const Cplx ker = std::exp(-mode.lambda * (x - t));
          const Cplx coef = 0.5 * h * kGLWeights[q] * ker *
                            (stable ? 1.0 : -1.0);
          for (std::size_t d = 0; d < n; ++d) {
            const Cplx pcd = mode.P[comp][d];
            if (pcd == Cplx(0.0, 0.0)) continue;
            acc += coef * pcd * (*h_[d])(t);
          }
        }
      }
    }
    return acc.real();
  }

  std::vector<Mode> modes_;
  std::vector<std::vector<double>> A_;
  std::vector<SmoothFnPtr> h_;
  std::size_t c_;
  double horizon_, panel_;
};

double fd_derivative(const SmoothFn& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
         (12 * h);
}

std::vector<std::vector<Expression>> parse_matrix(const nlohmann::json& m,
                                                  int n) {
  std::vector<std::vector<Expression>> out;
  if (!m.is_array() || static_cast<int>(m.size()) != n)
    throw ConfigError("matrix must be an n x n array of expressions");
  for (const auto& row : m) {
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ConfigError("matrix must be an n x n array of expressions");
    std::vector<Expression> r;
    for (const auto& cell : row) r.push_back(parse(cell.get<std::string>()));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

void NDDSystem::validate() const {
  if (n < 1 || n > 2) throw ConfigError("system dimension must be 1 or 2");
  for (const Term& t : terms) {
    if (t.i < 0 || t.i > 4)
      throw ConfigError("derivative order of a term must be in 0..4");
    if (t.omega < 0.0) throw ConfigError("delays must be nonnegative");
    if (static_cast<int>(t.A.size()) != n)
      throw ConfigError("coefficient matrix dimension mismatch");
    for (const auto& row : t.A)
      if (static_cast<int>(row.size()) != n)
        throw ConfigError("coefficient matrix dimension mismatch");
  }
  if (!kernel.empty()) {
    if (static_cast<int>(kernel.size()) != n)
      throw ConfigError("kernel matrix dimension mismatch");
    for (const auto& row : kernel)
      if (static_cast<int>(row.size()) != n)
        throw ConfigError("kernel matrix dimension mismatch");
    if (!(kernel_radius > 0.0))
      throw ConfigError("kernel radius must be positive");
  }
}

NDDSystem NDDSystem::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("system config is not valid JSON");
  NDDSystem sys;
  sys.n = j.value("n", 1);
  for (const auto& t : j.value("terms", nlohmann::json::array())) {
    Term term;
    term.i = t.value("i", 0);
    term.omega = t.value("omega", 0.0);
    term.A = parse_matrix(t.at("A"), sys.n);
    sys.terms.push_back(std::move(term));
  }
  if (j.contains("kernel")) {
    sys.kernel_radius = j["kernel"].value("radius", 12.0);
    sys.kernel = parse_matrix(j["kernel"].at("entries"), sys.n);
  }
  sys.validate();
  return sys;
}

std::vector<SmoothFnPtr> apply_operator(const NDDSystem& sys,
                                        const std::vector<SmoothFnPtr>& u) {
  sys.validate();
  if (static_cast<int>(u.size()) != sys.n)
    throw ConfigError("state dimension does not match the system");
  std::vector<SmoothFnPtr> out;
  for (int c = 0; c < sys.n; ++c) {
    std::vector<SmoothFnPtr> pieces;
    for (const NDDSystem::Term& t : sys.terms)
      for (int d = 0; d < sys.n; ++d)
        pieces.push_back(fn_product(
            wrap(t.A[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)]),
            fn_derivative(
                fn_translate(u[static_cast<std::size_t>(d)], t.omega), t.i)));
    if (!sys.kernel.empty()) {
      std::vector<Expression> row = sys.kernel[static_cast<std::size_t>(c)];
      std::vector<SmoothFnPtr> state = u;
      const double R = sys.kernel_radius;
      pieces.push_back(fn_from_callable([row, state, R](double x, int order) {
        std::vector<double> der(static_cast<std::size_t>(order) + 1, 0.0);
        for (std::size_t d = 0; d < state.size(); ++d) {
          if (row[d].empty()) continue;
          for (int m = 0; m <= order; ++m)
            der[static_cast<std::size_t>(m)] += integrate_adaptive(
                [&](double t) {
                  return row[d](t) * state[d]->jet_at(x - t, m).deriv(m);
                },
                -R, R, 1e-10, 1e-13);
        }
        return Jet(x, std::move(der));
      }));
    }
    std::vector<double> ones(pieces.size(), 1.0);
    out.push_back(fn_linear_combination(std::move(ones), std::move(pieces)));
  }
  return out;
}

std::vector<Net> apply_operator(const NDDSystem& sys,
                                const std::vector<Net>& u) {
  std::vector<Net> out(static_cast<std::size_t>(sys.n));
  for (int c = 0; c < sys.n; ++c) {
    out[static_cast<std::size_t>(c)].domain = Domain::HalfLine;
    out[static_cast<std::size_t>(c)].generator = [sys, u, c](double eps) {
      std::vector<SmoothFnPtr> state;
      for (const Net& net : u) state.push_back(net.generator(eps));
      return apply_operator(sys, state)[static_cast<std::size_t>(c)];
    };
  }
  return out;
}

SolutionReport verify_solution(const NDDSystem& sys,
                               const std::vector<Net>& u,
                               const std::vector<Net>& f,
                               const EpsSchedule& schedule, const Grid& j_grid,
                               int k_max, const ClassifyOptions& opts) {
  if (u.size() != f.size() || static_cast<int>(u.size()) != sys.n)
    throw ConfigError("state and forcing dimensions must match the system");
  const std::vector<Net> lu = apply_operator(sys, u);
  SolutionReport rep;
  rep.solution = true;
  for (int c = 0; c < sys.n; ++c) {
    Net residual;
    residual.domain = Domain::HalfLine;
    const Net& lc = lu[static_cast<std::size_t>(c)];
    const Net& fc = f[static_cast<std::size_t>(c)];
    residual.generator = [lc, fc](double eps) {
      return fn_diff(lc.generator(eps), fc.generator(eps));
    };
    Classification cls = classify(residual, k_max, schedule, j_grid, opts);
    rep.solution = rep.solution && cls.verdict == Verdict::Negligible;
    rep.per_component.push_back(std::move(cls));
  }
  return rep;
}

std::string SolutionReport::to_json() const {
  nlohmann::json j;
  j["verdict"] = solution ? "solution" : "not-solution";
  j["components"] = nlohmann::json::array();
  for (const Classification& c : per_component)
    j["components"].push_back(nlohmann::json::parse(c.to_json()));
  return j.dump(2);
}

LSESolution solve_constant_lse(const std::vector<std::vector<double>>& A,
                               const std::vector<AAASpec>& f,
                               const LSEOptions& opts) {
  if (A.size() != f.size() || f.empty())
    throw ConfigError("matrix and forcing dimensions must match");
  const std::vector<Mode> modes = spectral_split(A);
  const std::size_t n = f.size();

  LSESolution sol;
  for (const Mode& m : modes) sol.eigenvalues.push_back(m.lambda);

  std::vector<SmoothFnPtr> g, h;
  for (const AAASpec& spec : f) {
    g.push_back(spec.principal_fn());
    h.push_back(spec.corrective_fn());
  }
  for (std::size_t c = 0; c < n; ++c) {
    sol.v.push_back(std::make_shared<GreenLineFn>(modes, g, c,
                                                  opts.horizon_factor,
                                                  opts.panel_width));
    sol.w.push_back(std::make_shared<GreenHalfFn>(modes, A, h, c,
                                                  opts.horizon_factor,
                                                  opts.panel_width));
    sol.u.push_back(fn_sum(sol.v.back(), sol.w.back()));
  }

  // Independent substitution checks: finite differences of quadrature
  // values, never the solver's own jet recurrences.
  auto substitution_sup = [&](const std::vector<SmoothFnPtr>& y,
                              const std::vector<SmoothFnPtr>& rhs,
                              const Grid& grid) {
    double sup = 0.0;
    for (double x : grid.values())
      for (std::size_t c = 0; c < n; ++c) {
        double lhs = fd_derivative(*y[c], x, opts.fd_step);
        for (std::size_t d = 0; d < n; ++d) lhs += A[c][d] * (*y[d])(x);
        sup = std::max(sup, std::abs(lhs - (*rhs[c])(x)));
      }
    return sup;
  };
  sol.residual_v = substitution_sup(sol.v, g, opts.v_check);
  sol.residual_w = substitution_sup(sol.w, h, opts.w_check);

  sol.w_vanishing = true;
  for (std::size_t c = 0; c < n; ++c)
    sol.w_vanishing = sol.w_vanishing && check_vanishing(*sol.w[c],
                                                         opts.vanishing_j_max,
                                                         opts.vanishing);
  return sol;
}

LSESolution solve_constant_lse(double a, const AAASpec& f,
                               const LSEOptions& opts) {
  return solve_constant_lse({{a}}, {f}, opts);
}

SplitSolveResult split_solve(const std::vector<std::vector<double>>& A,
                             const std::vector<AAASpec>& f,
                             const EpsSchedule& schedule, const Grid& j_grid,
                             int k_max, const LSEOptions& opts) {
  SplitSolveResult out;
  out.sol = solve_constant_lse(A, f, opts);
  const int n = static_cast<int>(f.size());

  NDDSystem sys;
  sys.n = n;
  NDDSystem::Term deriv{1, 0.0, {}}, zero{0, 0.0, {}};
  for (int r = 0; r < n; ++r) {
    std::vector<Expression> drow, zrow;
    for (int c = 0; c < n; ++c) {
      drow.push_back(Expression::constant(r == c ? 1.0 : 0.0));
      zrow.push_back(
          Expression::constant(A[static_cast<std::size_t>(r)]
                                [static_cast<std::size_t>(c)]));
    }
    deriv.A.push_back(std::move(drow));
    zero.A.push_back(std::move(zrow));
  }
  sys.terms = {deriv, zero};

  std::vector<Net> u_nets, f_nets;
  for (int c = 0; c < n; ++c) {
    SmoothFnPtr uc = out.sol.u[static_cast<std::size_t>(c)];
    u_nets.push_back({[uc](double) { return uc; }, Domain::HalfLine});
    SmoothFnPtr fc = f[static_cast<std::size_t>(c)].sum_fn();
    f_nets.push_back({[fc](double) { return fc; }, Domain::HalfLine});
  }
  out.report = verify_solution(sys, u_nets, f_nets, schedule, j_grid, k_max);
  return out;
}

SmoothFnPtr primitive(SmoothFnPtr u, double x0) {
  if (!u) throw Error("primitive needs a function");
  return fn_from_callable([u, x0](double x, int order) {
    std::vector<double> d(static_cast<std::size_t>(order) + 1);
    d[0] = integrate_adaptive([&](double t) { return (*u)(t); }, x0, x, 1e-11,
                              1e-14);
    if (order >= 1) {
      const Jet ju = u->jet_at(x, order - 1);
      for (int m = 1; m <= order; ++m)
        d[static_cast<std::size_t>(m)] = ju.deriv(m - 1);
    }
    return Jet(x, std::move(d));
  });
}

Net primitive_net(const Net& u, double x0) {
  Net out;
  out.domain = u.domain;
  out.generator = [u, x0](double eps) {
    return primitive(u.generator(eps), x0);
  };
  return out;
}

}  // namespace aagf
