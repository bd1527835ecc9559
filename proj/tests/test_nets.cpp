#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <string>

#include "aagf/nets.hpp"
#include "aagf/smoothfn.hpp"
#include "doctest.h"
#include "nlohmann/json.hpp"

using namespace aagf;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Net whose representative at eps comes from a template over `eps`.
Net tnet(std::string (*gen)(double), Domain dom = Domain::RealLine) {
  Net net;
  net.domain = dom;
  net.generator = [gen](double eps) { return wrap(parse(gen(eps))); };
  return net;
}

Net net_sin_over_eps() {
  return tnet(+[](double e) { return "sin(x/" + fmt(e) + ")"; });
}

Net net_eps_minus2_sin() {
  return tnet(+[](double e) { return "sin(x)/" + fmt(e * e); });
}

Net net_eps_cubed() {
  return tnet(+[](double e) { return fmt(e * e * e) + " + 0*x"; });
}

Net net_exp_small() {  // e^{-1/eps} sin(x/eps)
  return tnet(+[](double e) {
    return fmt(std::exp(-1.0 / e)) + "*sin(x/" + fmt(e) + ")";
  });
}

Net net_exp_large() {  // e^{1/eps}
  return tnet(+[](double e) { return "exp(" + fmt(1.0 / e) + " + 0*x)"; });
}

}  // namespace

TEST_CASE("seminorm worked examples") {
  Grid g{0.0, 2.0 * M_PI, 4001};
  SmoothFnPtr s = wrap(parse("sin(x)"));
  CHECK(seminorm(*s, 0, g) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(seminorm(*s, 1, g) == doctest::Approx(2.0).epsilon(1e-3));

  Grid j{0.0, 20.0, 4001};
  SmoothFnPtr e = wrap(parse("exp(-x)"));
  CHECK(seminorm(*e, 2, j) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("seminorm is monotone in order and refinement") {
  Grid coarse{-10.0, 10.0, 201};
  Grid fine{-10.0, 10.0, 2001};
  SmoothFnPtr f = wrap(parse("sin(3*x) * exp(sin(x))"));
  double prev = 0.0;
  for (int k = 0; k <= 5; ++k) {
    const double cur = seminorm(*f, k, fine);
    CHECK(cur >= prev);
    prev = cur;
    CHECK(seminorm(*f, k, fine) >= seminorm(*f, k, coarse));
  }
}

TEST_CASE("fit_order worked examples") {
  EpsSchedule sched;
  Grid grid = Grid::real_line();

  OrderFit f1 = fit_order(net_eps_minus2_sin(), 0, sched, grid);
  CHECK(std::abs(f1.slope + 2.0) < 0.05);
  CHECK(f1.r2 > 0.999);

  // Seminorm is 1 + 1/eps; the constant term biases the finite fit upward.
  OrderFit f2 = fit_order(net_sin_over_eps(), 1, sched, grid);
  CHECK(std::abs(f2.slope + 1.0) < 0.15);

  OrderFit f3 = fit_order(net_eps_cubed(), 0, sched, grid);
  CHECK(std::abs(f3.slope - 3.0) < 0.05);
}

TEST_CASE("fit_order flags identically zero nets") {
  Net zero = tnet(+[](double) { return std::string("0*x"); });
  CHECK_THROWS_AS(fit_order(zero, 0, EpsSchedule{}, Grid::real_line()),
                  DegenerateFit);
}

TEST_CASE("classification of the five bundled nets") {
  EpsSchedule sched;
  Grid grid = Grid::real_line();

  Classification c1 = classify(net_eps_minus2_sin(), 2, sched, grid);
  CHECK(c1.verdict == Verdict::Moderate);

  Classification c2 = classify(net_sin_over_eps(), 2, sched, grid);
  CHECK(c2.verdict == Verdict::Moderate);

  Classification c3 = classify(net_eps_cubed(), 2, sched, grid);
  CHECK(c3.verdict == Verdict::Negligible);
  CHECK(c3.negligible_level >= 2);

  Classification c4 = classify(net_exp_small(), 2, sched, grid);
  CHECK(c4.verdict == Verdict::Negligible);

  Classification c5 = classify(net_exp_large(), 2, sched, grid);
  CHECK(c5.verdict == Verdict::Neither);
}

TEST_CASE("negligible implies moderate on bundled nets") {
  EpsSchedule sched;
  Grid grid = Grid::real_line();
  for (Net net : {net_eps_cubed(), net_exp_small()}) {
    Classification c = classify(net, 2, sched, grid);
    REQUIRE(c.verdict == Verdict::Negligible);  // moderate test passed too
  }
}

TEST_CASE("schedule invariance: halved eps0 keeps every verdict") {
  Grid grid = Grid::real_line();
  EpsSchedule base;
  EpsSchedule halved{0.25, 0.7, 12};
  for (Net net : {net_eps_minus2_sin(), net_sin_over_eps(), net_eps_cubed(),
                  net_exp_small(), net_exp_large()}) {
    Classification a = classify(net, 2, base, grid);
    Classification b = classify(net, 2, halved, grid);
    CHECK(a.verdict == b.verdict);
  }
}

TEST_CASE("product stability") {
  EpsSchedule sched;
  Grid grid = Grid::real_line();

  Net u = net_sin_over_eps();
  Net v = tnet(+[](double e) { return "cos(x)/" + fmt(e); });
  Net uv;
  uv.generator = [u, v](double eps) {
    return fn_product(u.generator(eps), v.generator(eps));
  };
  CHECK(classify(uv, 2, sched, grid).verdict == Verdict::Moderate);

  Net nu = net_eps_cubed();
  Net nuv;
  nuv.generator = [nu, v](double eps) {
    return fn_product(nu.generator(eps), v.generator(eps));
  };
  Classification c = classify(nuv, 1, sched, grid);
  CHECK(c.verdict == Verdict::Negligible);
}

TEST_CASE("Landau-Kolmogorov sanity oracle") {
  Grid g{-10.0, 10.0, 4001};
  CHECK(lk_check(*wrap(parse("sin(x)")), 1, 2, g));
  CHECK(lk_check(*wrap(parse("sin(3*x)")), 1, 2, g));
  CHECK(lk_check(*wrap(parse("0.1*sin(x/0.1)")), 1, 2, g));
  CHECK_THROWS_AS(lk_check(*wrap(parse("sin(x)")), 2, 2, g), Error);
}

TEST_CASE("null characterization consistency") {
  EpsSchedule sched;
  Grid grid = Grid::real_line();

  Net u5 = tnet(+[](double e) {
    return fmt(std::pow(e, 5)) + "*sin(x/" + fmt(e) + ")";
  });
  NullCharacterizationReport r1 = null_characterization(u5, 2, sched, grid);
  CHECK(r1.moderate);
  CHECK(r1.order0_negligible);
  CHECK(r1.consistent);
  CHECK(std::abs(r1.fits[0].slope - 5.0) < 0.1);
  CHECK(std::abs(r1.fits[1].slope - 4.0) < 0.1);

  NullCharacterizationReport r2 =
      null_characterization(net_eps_cubed(), 2, sched, grid);
  CHECK(r2.consistent);

  NullCharacterizationReport r3 =
      null_characterization(net_sin_over_eps(), 2, sched, grid);
  CHECK(r3.moderate);
  CHECK_FALSE(r3.order0_negligible);
  CHECK(r3.consistent);  // vacuously
}

TEST_CASE("reports serialize to JSON and CSV") {
  EpsSchedule sched{0.5, 0.7, 8};
  Grid grid{-10.0, 10.0, 401};
  Classification c = classify(net_eps_cubed(), 1, sched, grid);
  nlohmann::json j = nlohmann::json::parse(c.to_json());
  CHECK(j["verdict"] == "Negligible");
  CHECK(j["per_k"].size() == 2);
  CHECK(j["schedule"]["eps0"] == 0.5);

  const std::string csv = seminorm_table_csv(net_eps_cubed(), 1, sched, grid);
  CHECK(csv.rfind("eps,k0,k1", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS((EpsSchedule{1.5, 0.7, 12}.validate()), Error);
  CHECK_THROWS_AS((EpsSchedule{0.5, 1.1, 12}.validate()), Error);
  CHECK_THROWS_AS((EpsSchedule{0.5, 0.7, 3}.validate()), Error);
  EpsSchedule ok;
  CHECK(ok.values().size() == 12);
  CHECK(ok.values().front() == 0.5);
}
