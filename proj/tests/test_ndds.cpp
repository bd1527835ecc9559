#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "aagf/mollifier.hpp"
#include "aagf/ndds.hpp"
#include "doctest.h"
#include "nlohmann/json.hpp"

using namespace aagf;

namespace {

NDDSystem scalar_system(std::vector<NDDSystem::Term> terms) {
  NDDSystem sys;
  sys.n = 1;
  sys.terms = std::move(terms);
  return sys;
}

NDDSystem::Term scalar_term(int i, double omega, const char* coeff) {
  return {i, omega, {{parse(coeff)}}};
}

Net constant_net(SmoothFnPtr f) {
  return {[f](double) { return f; }, Domain::HalfLine};
}

}  // namespace

TEST_CASE("operator application worked examples") {
  std::vector<SmoothFnPtr> u = {wrap(parse("sin(x)"))};

  NDDSystem ident = scalar_system({scalar_term(0, 0.0, "1")});
  SmoothFnPtr lu = apply_operator(ident, u)[0];
  CHECK((*lu)(0.7) == doctest::Approx(std::sin(0.7)).epsilon(1e-15));

  NDDSystem delay = scalar_system({scalar_term(0, M_PI, "1")});
  SmoothFnPtr ld = apply_operator(delay, u)[0];
  for (double x : {0.0, 1.0, 2.5})
    CHECK((*ld)(x) == doctest::Approx(-std::sin(x)).epsilon(1e-13));

  NDDSystem deriv = scalar_system({scalar_term(1, 0.0, "1")});
  SmoothFnPtr lv = apply_operator(deriv, u)[0];
  CHECK((*lv)(1.2) == doctest::Approx(std::cos(1.2)).epsilon(1e-14));

  // Variable coefficient and two terms combined.
  NDDSystem mixed =
      scalar_system({scalar_term(1, 0.0, "1"), scalar_term(0, 0.0, "x")});
  SmoothFnPtr lm = apply_operator(mixed, u)[0];
  CHECK((*lm)(0.4) ==
        doctest::Approx(std::cos(0.4) + 0.4 * std::sin(0.4)).epsilon(1e-14));
}

TEST_CASE("convolution term reproduces the spectral identity") {
  // K * sin = rho_hat(1) * sin for an even kernel; with the bundled
  // mollifier rho_hat(1) is 1 up to its moment order.
  Mollifier rho = build_mollifier(8);
  NDDSystem sys = scalar_system({});
  sys.kernel = {{rho.rho_expr}};
  sys.kernel_radius = rho.radius;
  std::vector<SmoothFnPtr> u = {wrap(parse("sin(x)"))};
  SmoothFnPtr ku = apply_operator(sys, u)[0];
  const double factor = rho.rho_hat(1.0);
  CHECK(std::abs(factor - 1.0) < 5e-4);
  for (double x : {0.3, 1.0, 2.2}) {
    CHECK((*ku)(x) == doctest::Approx(factor * std::sin(x)).epsilon(1e-9));
    // Jets differentiate under the integral onto the state.
    CHECK(ku->jet_at(x, 1).deriv(1) ==
          doctest::Approx(factor * std::cos(x)).epsilon(1e-8));
  }
}

TEST_CASE("operator application is linear") {
  NDDSystem sys =
      scalar_system({scalar_term(1, 0.5, "2"), scalar_term(0, 0.0, "cos(x)")});
  std::vector<SmoothFnPtr> a = {wrap(parse("sin(x)"))};
  std::vector<SmoothFnPtr> b = {wrap(parse("exp(-x)"))};
  std::vector<SmoothFnPtr> comb = {
      fn_linear_combination({3.0, -2.0}, {a[0], b[0]})};
  SmoothFnPtr la = apply_operator(sys, a)[0];
  SmoothFnPtr lb = apply_operator(sys, b)[0];
  SmoothFnPtr lc = apply_operator(sys, comb)[0];
  for (double x : {0.1, 1.4, 6.0})
    CHECK((*lc)(x) ==
          doctest::Approx(3.0 * (*la)(x)-2.0 * (*lb)(x)).epsilon(1e-12));
}

TEST_CASE("verify_solution accepts exact and perturbed solutions") {
  // u' + u with u = e^{-x}: the residual cancels identically.
  NDDSystem sys =
      scalar_system({scalar_term(1, 0.0, "1"), scalar_term(0, 0.0, "1")});
  EpsSchedule sched{0.5, 0.7, 8};
  Grid j_grid{0.0, 50.0, 201};

  std::vector<Net> u = {constant_net(wrap(parse("exp(-x)")))};
  std::vector<Net> f = {constant_net(wrap(parse("0*x")))};
  SolutionReport r1 = verify_solution(sys, u, f, sched, j_grid);
  CHECK(r1.solution);
  CHECK(r1.per_component[0].identically_small);

  // Perturbing by eps^3 sin keeps the verdict with level 3 evidence.
  std::vector<Net> up = {{[](double eps) {
                            char buf[64];
                            std::snprintf(buf, sizeof buf,
                                          "exp(-x) + %.17g*sin(x)",
                                          eps * eps * eps);
                            return wrap(parse(buf));
                          },
                          Domain::HalfLine}};
  SolutionReport r2 = verify_solution(sys, up, f, sched, j_grid);
  CHECK(r2.solution);
  CHECK(r2.per_component[0].negligible_level >= 3);

  // A genuinely wrong state is rejected.
  std::vector<Net> bad = {constant_net(wrap(parse("sin(x)")))};
  SolutionReport r3 = verify_solution(sys, bad, f, sched, j_grid);
  CHECK_FALSE(r3.solution);
  CHECK(r3.per_component[0].verdict == Verdict::Moderate);

  nlohmann::json j = nlohmann::json::parse(r3.to_json());
  CHECK(j["verdict"] == "not-solution");
  CHECK(j["components"].size() == 1);
}

TEST_CASE("scalar split solve worked examples") {
  // v' + v = sin has the bounded solution (sin - cos)/2.
  AAASpec f{parse("sin(x)"), parse("exp(-x)")};
  LSESolution sol = solve_constant_lse(1.0, f);
  for (double x : {-4.0, 0.0, 2.5}) {
    const double v_ref = 0.5 * (std::sin(x) - std::cos(x));
    CHECK((*sol.v[0])(x) == doctest::Approx(v_ref).epsilon(1e-10));
  }
  // w' + w = e^{-x}, w(0) = 0: w = x e^{-x}.
  for (double x : {0.5, 3.0, 10.0})
    CHECK((*sol.w[0])(x) == doctest::Approx(x * std::exp(-x)).epsilon(1e-10));
  CHECK(sol.residual_v < 1e-8);
  CHECK(sol.residual_w < 1e-8);
  CHECK(sol.w_vanishing);
  CHECK(sol.eigenvalues.size() == 1);
  CHECK(sol.eigenvalues[0].real() == 1.0);

  // Constant forcing: v = c / a.
  AAASpec fc{parse("3 + 0*x"), parse("0*x")};
  LSESolution solc = solve_constant_lse(2.0, fc);
  CHECK((*solc.v[0])(1.0) == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("unstable scalar mode integrates from the future") {
  // v' - 2v = sin bounded on R: v = -(2 sin + cos)/5.
  AAASpec f{parse("sin(x)"), parse("exp(-x)")};
  LSESolution sol = solve_constant_lse(-2.0, f);
  for (double x : {-1.0, 0.7}) {
    const double v_ref = -(2.0 * std::sin(x) + std::cos(x)) / 5.0;
    CHECK((*sol.v[0])(x) == doctest::Approx(v_ref).epsilon(1e-10));
  }
  CHECK(sol.residual_v < 1e-8);
  CHECK(sol.residual_w < 1e-8);
  CHECK(sol.w_vanishing);
}

TEST_CASE("2x2 split solve") {
  // Diagonal hyperbolic system: closed-form bounded solutions per mode.
  std::vector<std::vector<double>> A = {{3.0, 0.0}, {0.0, -2.0}};
  std::vector<AAASpec> f = {{parse("sin(x)"), parse("exp(-x)")},
                            {parse("sin(x)"), parse("2*exp(-x)")}};
  LSEOptions opts;
  opts.v_check = {-10.0, 10.0, 41};
  opts.w_check = {0.02, 20.0, 41};
  opts.vanishing.points_per_window = 51;
  LSESolution sol = solve_constant_lse(A, f, opts);
  for (double x : {-2.0, 1.3}) {
    CHECK((*sol.v[0])(x) ==
          doctest::Approx((3.0 * std::sin(x) - std::cos(x)) / 10.0)
              .epsilon(1e-10));
    CHECK((*sol.v[1])(x) ==
          doctest::Approx(-(2.0 * std::sin(x) + std::cos(x)) / 5.0)
              .epsilon(1e-10));
  }
  CHECK(sol.residual_v < 1e-8);
  CHECK(sol.residual_w < 1e-8);
  CHECK(sol.w_vanishing);

  // Coupled symmetric matrix: verified through the substitution residual.
  std::vector<std::vector<double>> B = {{2.0, 1.0}, {1.0, 2.0}};
  LSESolution solb = solve_constant_lse(B, f, opts);
  CHECK(solb.residual_v < 1e-8);
  CHECK(solb.residual_w < 1e-8);
}

TEST_CASE("solver guards its spectrum") {
  std::vector<AAASpec> f = {{parse("sin(x)"), parse("exp(-x)")},
                            {parse("sin(x)"), parse("exp(-x)")}};
  std::vector<std::vector<double>> rot = {{0.0, 1.0}, {-1.0, 0.0}};
  CHECK_THROWS_AS(solve_constant_lse(rot, f), NonHyperbolic);
  std::vector<std::vector<double>> defective = {{1.0, 1.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(solve_constant_lse(defective, f), ConfigError);
  CHECK_THROWS_AS(solve_constant_lse(0.0, f[0]), NonHyperbolic);
}

TEST_CASE("split solve reassembles into a verified solution") {
  EpsSchedule sched{0.5, 0.7, 6};
  Grid j_grid{0.0, 30.0, 121};
  AAASpec f{parse("sin(x)"), parse("exp(-x)")};
  SplitSolveResult r = split_solve({{1.0}}, {f}, sched, j_grid);
  CHECK(r.report.solution);
  CHECK(r.sol.residual_v < 1e-8);
  CHECK(r.sol.residual_w < 1e-8);
  CHECK(r.sol.w_vanishing);

  // Zero forcing solves to zero.
  AAASpec z{parse("0*x"), parse("0*x")};
  SplitSolveResult rz = split_solve({{2.0}}, {z}, sched, j_grid);
  CHECK(rz.report.solution);
  CHECK(std::abs((*rz.sol.u[0])(3.0)) < 1e-13);
}

TEST_CASE("primitive worked examples") {
  SmoothFnPtr s = primitive(wrap(parse("cos(x)")), 0.0);
  for (double x : {0.5, 2.0, -1.0})
    CHECK((*s)(x) == doctest::Approx(std::sin(x)).epsilon(1e-10));
  CHECK(s->jet_at(0.8, 2).deriv(1) ==
        doctest::Approx(std::cos(0.8)).epsilon(1e-14));
  CHECK(s->jet_at(0.8, 2).deriv(2) ==
        doctest::Approx(-std::sin(0.8)).epsilon(1e-14));

  SmoothFnPtr e = primitive(wrap(parse("exp(-x)")), 0.0);
  CHECK((*e)(2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-10));

  SmoothFnPtr z = primitive(wrap(parse("0*x")), 0.0);
  CHECK((*z)(5.0) == 0.0);

  Net n = primitive_net(constant_net(wrap(parse("cos(x)"))), 0.0);
  CHECK((*n.generator(0.1))(1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-10));
}

TEST_CASE("system configuration and validation") {
  const char* text = R"json({
    "n": 1,
    "terms": [
      {"i": 1, "omega": 0.0, "A": [["1"]]},
      {"i": 0, "omega": 0.5, "A": [["cos(x)"]]}
    ],
    "kernel": {"radius": 6.0, "entries": [["exp(-(x^2))"]]}
  })json";
  NDDSystem sys = NDDSystem::from_json(text);
  CHECK(sys.n == 1);
  CHECK(sys.terms.size() == 2);
  CHECK(sys.terms[1].omega == 0.5);
  CHECK(sys.kernel_radius == 6.0);

  NDDSystem bad;
  bad.n = 3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  NDDSystem order;
  order.n = 1;
  order.terms = {{5, 0.0, {{parse("1")}}}};
  CHECK_THROWS_AS(order.validate(), ConfigError);
  CHECK_THROWS_AS(NDDSystem::from_json("{"), ConfigError);
  CHECK_THROWS_AS(NDDSystem::from_json(R"({"n": 2, "terms": [{"A": [["1"]]}]})"),
                  ConfigError);
}
