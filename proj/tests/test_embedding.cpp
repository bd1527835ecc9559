#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "aagf/embedding.hpp"
#include "aagf/mollifier.hpp"
#include "aagf/nets.hpp"
#include "aagf/quadrature.hpp"
#include "doctest.h"
#include "nlohmann/json.hpp"

using namespace aagf;

namespace {

const Mollifier& rho8() {
  static Mollifier m = build_mollifier(8);
  return m;
}

const Mollifier& rho4() {
  static Mollifier m = build_mollifier(4);
  return m;
}

}  // namespace

TEST_CASE("moment conditions hold to quadrature accuracy") {
  const Mollifier& m = rho8();
  CHECK(std::abs(m.moments[0] - 1.0) < 1e-8);
  for (int k = 1; k <= 8; ++k) CHECK(std::abs(m.moments[static_cast<std::size_t>(k)]) < 1e-6);

  // The next even moment must not vanish: finitely many conditions only.
  const double mu10 = integrate(
      [&](double x) { return std::pow(x, 10) * m(x); }, -m.radius, m.radius, 0.25);
  CHECK(std::abs(mu10) > 1.0);
}

TEST_CASE("closed spectral form matches direct quadrature") {
  const Mollifier& m = rho8();
  for (double xi : {0.0, 0.3, 1.0, 2.0}) {
    const double direct = integrate(
        [&](double x) { return m(x) * std::cos(xi * x); }, -m.radius, m.radius,
        0.25);
    CHECK(m.rho_hat(xi) == doctest::Approx(direct).epsilon(1e-10));
  }
  CHECK(m.rho_hat(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // Flat near zero: deviation from 1 is O(xi^10) for K = 8.
  CHECK(std::abs(m.rho_hat(0.1) - 1.0) < 1e-11);
}

TEST_CASE("derivatives agree between recurrence and expression jets") {
  const Mollifier& m = rho8();
  for (double x : {-2.3, 0.0, 0.7, 4.1}) {
    Jet j = m.rho_expr.jet(x, 6);
    for (int n = 0; n <= 6; ++n)
      CHECK(m.deriv(x, n) == doctest::Approx(j.deriv(n)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(m.deriv(0.0, 25), OrderTooHigh);
}

TEST_CASE("regularizing a constant reproduces it") {
  DistributionRep rep = DistributionRep::of(parse("3.5 + 0*x"));
  SmoothFnPtr g = regularize(rep, rho8(), 0.1);
  for (double x : {-5.0, 0.0, 2.0})
    CHECK((*g)(x) == doctest::Approx(3.5).epsilon(1e-8));
}

TEST_CASE("regularized sine stays uniformly close") {
  DistributionRep rep = DistributionRep::of(parse("sin(x)"));
  SmoothFnPtr g = regularize(rep, rho8(), 0.05);
  double sup = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double x = -10.0 + 0.25 * i;
    sup = std::max(sup, std::abs((*g)(x) - std::sin(x)));
  }
  CHECK(sup < 1e-4);
}

TEST_CASE("first-derivative representative regularizes to the derivative") {
  // T = (sin)' as a rep of order 1 should mollify toward cos.
  DistributionRep rep = DistributionRep::derivative_of(parse("sin(x)"), 1);
  SmoothFnPtr g = regularize(rep, rho8(), 0.05);
  for (double x : {-3.0, 0.0, 1.2})
    CHECK((*g)(x) == doctest::Approx(std::cos(x)).epsilon(1e-3));
}

TEST_CASE("regularization is linear in the representative") {
  DistributionRep a = DistributionRep::of(parse("sin(x)"));
  DistributionRep b = DistributionRep::of(parse("exp(-(x^2))"));
  DistributionRep sum;
  sum.terms = {{0, 2.0, parse("sin(x)")}, {0, -1.0, parse("exp(-(x^2))")}};
  SmoothFnPtr ga = regularize(a, rho8(), 0.1);
  SmoothFnPtr gb = regularize(b, rho8(), 0.1);
  SmoothFnPtr gs = regularize(sum, rho8(), 0.1);
  for (double x : {-1.0, 0.4, 2.0})
    CHECK((*gs)(x) ==
          doctest::Approx(2.0 * (*ga)(x) - (*gb)(x)).epsilon(1e-10));
}

TEST_CASE("jets commute with the integral sign") {
  DistributionRep rep = DistributionRep::of(parse("sin(x)"));
  SmoothFnPtr g = regularize(rep, rho8(), 0.1);
  // d/dx of the regularization equals the regularization of the
  // derivative rep, both computed by quadrature onto rho.
  DistributionRep drep = DistributionRep::derivative_of(parse("sin(x)"), 1);
  SmoothFnPtr dg = regularize(drep, rho8(), 0.1);
  for (double x : {-0.7, 1.3}) {
    Jet j = g->jet_at(x, 1);
    CHECK(j.deriv(1) == doctest::Approx((*dg)(x)).epsilon(1e-8));
  }
}

TEST_CASE("consistency residual vanishes identically for low-degree polynomials") {
  // Degree <= K: the moment conditions kill every Taylor term, so the
  // residual is pure quadrature noise and lands in the identically-small
  // branch of the classifier.
  Net res = consistency_residual(parse("x^3 - 2*x + 1"), rho4());
  EpsSchedule sched{0.5, 0.7, 8};
  Grid grid{-10.0, 10.0, 201};
  Classification c = classify(res, 1, sched, grid);
  CHECK(c.verdict == Verdict::Negligible);
  CHECK(c.identically_small);
}

TEST_CASE("consistency residual decays at the moment order for sine") {
  Net res = consistency_residual(parse("sin(x)"), rho4());
  EpsSchedule sched{0.5, 0.7, 8};
  Grid grid{-10.0, 10.0, 201};
  OrderFit f = fit_order(res, 0, sched, grid);
  CHECK(f.slope > 4.0 - 0.3);
  CHECK(f.r2 > 0.99);

  Classification c = classify(res, 1, sched, grid);
  CHECK(c.verdict == Verdict::Negligible);
  CHECK(c.negligible_level >= 4);
}

TEST_CASE("higher moment order gives faster consistency decay") {
  EpsSchedule sched{0.5, 0.7, 6};
  Grid grid{-5.0, 5.0, 101};
  OrderFit f4 = fit_order(consistency_residual(parse("sin(x)"), rho4()), 0,
                          sched, grid);
  OrderFit f8 = fit_order(consistency_residual(parse("sin(x)"), rho8()), 0,
                          sched, grid);
  CHECK(f8.slope > f4.slope + 2.0);
}

TEST_CASE("representative validation") {
  DistributionRep bad;
  bad.terms = {{5, 1.0, parse("sin(x)")}};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  DistributionRep empty;
  CHECK_THROWS_AS(empty.validate(), ConfigError);
}

TEST_CASE("mollifier header round-trips through JSON") {
  const Mollifier& m = rho8();
  Mollifier back = mollifier_from_json(m.header_json());
  CHECK(back.K == m.K);
  CHECK(back.coeffs == m.coeffs);
  for (double x : {-1.0, 0.5, 3.0})
    CHECK(back(x) == doctest::Approx(m(x)).epsilon(1e-15));

  nlohmann::json j = nlohmann::json::parse(m.header_json());
  CHECK(j["K"] == 8);
  CHECK(j.contains("coeffs"));

  const std::string csv = m.table_csv(1.0);
  CHECK(csv.rfind("x,rho", 0) == 0);
}
