// Batch front-end: every workflow is a subcommand over a JSON config,
// emitting a JSON report that embeds the fully resolved config.
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "aagf/aaa.hpp"
#include "aagf/embedding.hpp"
#include "aagf/errors.hpp"
#include "aagf/mollifier.hpp"
#include "aagf/ndds.hpp"
#include "aagf/nets.hpp"
#include "aagf/seeley.hpp"
#include "nlohmann/json.hpp"

namespace {

using aagf::Domain;
using aagf::EpsSchedule;
using aagf::Grid;
using aagf::Net;
using nlohmann::json;

constexpr int kPass = 0, kFail = 1, kUsage = 2;

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw aagf::ConfigError("cannot open config file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw aagf::ConfigError("config file is not valid JSON: " + path);
  return j;
}

void write_report(const std::string& out_path, const json& report) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw aagf::ConfigError("cannot write report to " + out_path);
  out << report.dump(2) << "\n";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Whole-word substitution of `eps` so one expression template describes
// the entire net, e.g. "eps^-2*sin(x)".
std::string instantiate(const std::string& tmpl, double eps) {
  std::string out;
  std::size_t i = 0;
  auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)); };
  while (i < tmpl.size()) {
    if (tmpl.compare(i, 3, "eps") == 0 && (i == 0 || !word(tmpl[i - 1])) &&
        (i + 3 == tmpl.size() || !word(tmpl[i + 3]))) {
      out += "(" + fmt(eps) + ")";
      i += 3;
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

Net net_from_template(const std::string& tmpl, Domain domain) {
  aagf::parse(instantiate(tmpl, 0.5));  // surface syntax errors at config time
  Net net;
  net.domain = domain;
  net.generator = [tmpl](double eps) {
    return aagf::wrap(aagf::parse(instantiate(tmpl, eps)));
  };
  return net;
}

EpsSchedule schedule_from(const json& cfg, const std::string& override_flag) {
  EpsSchedule s;
  if (cfg.contains("schedule")) {
    const json& j = cfg["schedule"];
    s.eps0 = j.value("eps0", s.eps0);
    s.ratio = j.value("r", s.ratio);
    s.count = j.value("N", s.count);
  }
  if (!override_flag.empty()) {
    if (std::sscanf(override_flag.c_str(), "%lf,%lf,%d", &s.eps0, &s.ratio,
                    &s.count) != 3)
      throw aagf::ConfigError("--schedule expects eps0,r,N");
  }
  s.validate();
  return s;
}

json schedule_json(const EpsSchedule& s) {
  return {{"eps0", s.eps0}, {"r", s.ratio}, {"N", s.count}};
}

Grid grid_from(const json& cfg, Domain domain) {
  Grid g = domain == Domain::HalfLine ? Grid::half_line() : Grid::real_line();
  if (cfg.contains("grid")) {
    const json& j = cfg["grid"];
    g.lo = j.value("lo", g.lo);
    g.hi = j.value("hi", g.hi);
    g.points = j.value("points", g.points);
  }
  return g;
}

aagf::AAASpec spec_from(const json& j, double eps) {
  if (!j.contains("principal") || !j.contains("corrective"))
    throw aagf::ConfigError("AAA spec needs 'principal' and 'corrective'");
  return {aagf::parse(instantiate(j["principal"].get<std::string>(), eps)),
          aagf::parse(instantiate(j["corrective"].get<std::string>(), eps))};
}

int run_classify(const json& cfg, const std::string& out, int k_max) {
  const std::string tmpl = cfg.at("generator").get<std::string>();
  const Domain domain =
      cfg.value("domain", "R") == std::string("J") ? Domain::HalfLine
                                                   : Domain::RealLine;
  Net net = net_from_template(tmpl, domain);
  const EpsSchedule schedule = schedule_from(cfg, "");
  const Grid grid = grid_from(cfg, domain);
  aagf::Classification cls =
      aagf::classify(net, k_max, schedule, grid, aagf::ClassifyOptions{});

  json report;
  report["config"] = {{"generator", tmpl},
                      {"domain", domain == Domain::HalfLine ? "J" : "R"},
                      {"schedule", schedule_json(schedule)},
                      {"k_max", k_max},
                      {"grid", {{"lo", grid.lo}, {"hi", grid.hi}, {"points", grid.points}}}};
  report["classification"] = json::parse(cls.to_json());
  if (cfg.contains("csv")) {
    std::ofstream csv(cfg["csv"].get<std::string>());
    csv << aagf::seminorm_table_csv(net, k_max, schedule, grid);
  }
  const std::string verdict = aagf::to_string(cls.verdict);
  bool pass = cls.verdict != aagf::Verdict::Neither;
  if (cfg.contains("expect")) pass = verdict == cfg["expect"].get<std::string>();
  report["pass"] = pass;
  write_report(out, report);
  return pass ? kPass : kFail;
}

int run_seeley(const json& cfg, const std::string& out, int L) {
  if (cfg.contains("L")) L = cfg["L"].get<int>();
  aagf::SeeleySequence seq = aagf::build_sequence(L);
  json report;
  report["config"] = {{"L", L}};
  report["sequence"] = json::parse(seq.to_json());
  report["pass"] = true;
  write_report(out, report);
  return kPass;
}

int run_embed(const json& cfg, const std::string& out) {
  const int K = cfg.value("K", 8);
  const double radius = cfg.value("radius", 12.0);
  aagf::Mollifier rho = aagf::build_mollifier(K, radius);
  json report;
  report["config"] = {{"K", K}, {"radius", radius}};
  report["mollifier"] = json::parse(rho.header_json());
  if (cfg.contains("csv")) {
    std::ofstream csv(cfg["csv"].get<std::string>());
    csv << rho.table_csv();
  }
  bool pass = true;
  if (cfg.contains("f")) {
    const EpsSchedule schedule = schedule_from(cfg, "");
    report["config"]["schedule"] = schedule_json(schedule);
    Net residual = aagf::consistency_residual(
        aagf::parse(cfg["f"].get<std::string>()), rho);
    const Grid grid = grid_from(cfg, Domain::RealLine);
    aagf::OrderFit fit = aagf::fit_order(residual, 0, schedule, grid);
    report["consistency"] = {{"slope", fit.slope}, {"r2", fit.r2}};
    const double min_slope = cfg.value("min_slope", 4.0);
    pass = fit.slope >= min_slope && fit.r2 >= 0.95;
  }
  report["pass"] = pass;
  write_report(out, report);
  return pass ? kPass : kFail;
}

int run_decompose(const json& cfg, const std::string& out) {
  const EpsSchedule schedule = schedule_from(cfg, "");
  aagf::AAANet net{[cfg](double eps) { return spec_from(cfg, eps); }};
  aagf::DecomposeNetOptions opts;
  opts.run_probes = cfg.value("run_probes", false);
  aagf::DecomposeNetResult res = aagf::decompose_net(net, schedule, opts);
  json report;
  report["config"] = {{"principal", cfg["principal"]},
                      {"corrective", cfg["corrective"]},
                      {"schedule", schedule_json(schedule)},
                      {"run_probes", opts.run_probes}};
  bool pass = true;
  report["per_eps"] = json::array();
  for (const aagf::DecomposeDiagnostics& d : res.per_eps) {
    report["per_eps"].push_back({{"eps", d.eps},
                                 {"corrective_vanishing", d.corrective_vanishing},
                                 {"sum_gap", d.sum_gap},
                                 {"probe_residual", d.probe_residual}});
    pass = pass && d.corrective_vanishing && d.sum_gap < 1e-12;
  }
  report["pass"] = pass;
  write_report(out, report);
  return pass ? kPass : kFail;
}

int run_compose(const json& cfg, const std::string& out) {
  aagf::AAASpec u = spec_from(cfg, 1.0);
  aagf::TemperedSpec F =
      aagf::make_tempered(aagf::parse(cfg.at("F").get<std::string>()),
                          cfg.value("k_max", 2), cfg.value("window_radius", 8.0));
  aagf::CompositionResult res = aagf::compose(F, u);
  const bool vanishing = aagf::check_vanishing(*res.corrective, 1);
  double identity_gap = 0.0;
  for (double x : Grid::half_line().values())
    identity_gap = std::max(
        identity_gap,
        std::abs((*res.principal)(x) + (*res.corrective)(x) - (*res.composed)(x)));
  json report;
  report["config"] = {{"F", cfg["F"]},
                      {"principal", cfg["principal"]},
                      {"corrective", cfg["corrective"]},
                      {"window_radius", F.window_radius}};
  report["growth_exponents"] = F.growth_exponents;
  report["corrective_vanishing"] = vanishing;
  report["identity_gap"] = identity_gap;
  const bool pass = vanishing && identity_gap < 1e-12;
  report["pass"] = pass;
  write_report(out, report);
  return pass ? kPass : kFail;
}

int run_solve(const json& cfg, const std::string& out) {
  std::vector<std::vector<double>> A;
  if (cfg.contains("a"))
    A = {{cfg["a"].get<double>()}};
  else
    A = cfg.at("A").get<std::vector<std::vector<double>>>();
  std::vector<aagf::AAASpec> forcing;
  for (const json& j : cfg.at("forcing")) forcing.push_back(spec_from(j, 1.0));
  const EpsSchedule schedule = schedule_from(cfg, "");
  const Grid j_grid = cfg.contains("grid") ? grid_from(cfg, Domain::HalfLine)
                                           : Grid{0.0, 100.0, 401};
  aagf::SplitSolveResult res =
      aagf::split_solve(A, forcing, schedule, j_grid, cfg.value("k_max", 1));
  json report;
  report["config"] = {{"A", A}, {"schedule", schedule_json(schedule)}};
  report["residual_v"] = res.sol.residual_v;
  report["residual_w"] = res.sol.residual_w;
  report["w_vanishing"] = res.sol.w_vanishing;
  report["verify"] = json::parse(res.report.to_json());
  const double tol = cfg.value("substitution_tol", 1e-6);
  const bool pass = res.sol.residual_v < tol && res.sol.residual_w < tol &&
                    res.sol.w_vanishing && res.report.solution;
  report["pass"] = pass;
  write_report(out, report);
  return pass ? kPass : kFail;
}

int run_verify(const json& cfg, const std::string& out, int k_max) {
  aagf::NDDSystem sys = aagf::NDDSystem::from_json(cfg.at("system").dump());
  std::vector<Net> u, f;
  for (const json& j : cfg.at("u"))
    u.push_back(net_from_template(j.get<std::string>(), Domain::HalfLine));
  for (const json& j : cfg.at("f"))
    f.push_back(net_from_template(j.get<std::string>(), Domain::HalfLine));
  const EpsSchedule schedule = schedule_from(cfg, "");
  const Grid j_grid = cfg.contains("grid") ? grid_from(cfg, Domain::HalfLine)
                                           : Grid{0.0, 100.0, 401};
  aagf::SolutionReport rep =
      aagf::verify_solution(sys, u, f, schedule, j_grid, k_max);
  json report;
  report["config"] = {{"system", cfg["system"]},
                      {"u", cfg["u"]},
                      {"f", cfg["f"]},
                      {"schedule", schedule_json(schedule)},
                      {"k_max", k_max}};
  report["report"] = json::parse(rep.to_json());
  report["pass"] = rep.solution;
  write_report(out, report);
  return rep.solution ? kPass : kFail;
}

int run_primitive(const json& cfg, const std::string& out) {
  aagf::SmoothFnPtr u = aagf::wrap(aagf::parse(cfg.at("u").get<std::string>()));
  const double x0 = cfg.value("x0", 0.0);
  aagf::SmoothFnPtr U = aagf::primitive(u, x0);
  Grid grid = cfg.contains("grid") ? grid_from(cfg, Domain::RealLine)
                                   : Grid{-10.0, 10.0, 201};
  double sup = 0.0;
  for (double x : grid.values())
    sup = std::max(sup, std::abs(U->jet_at(x, 1).deriv(1) - (*u)(x)));
  json report;
  report["config"] = {{"u", cfg["u"]}, {"x0", x0}};
  report["derivative_gap"] = sup;
  if (cfg.contains("csv")) {
    std::ofstream csv(cfg["csv"].get<std::string>());
    csv << "x,U\n";
    for (double x : grid.values()) csv << fmt(x) << "," << fmt((*U)(x)) << "\n";
  }
  const bool pass = sup < cfg.value("tol", 1e-8);
  report["pass"] = pass;
  write_report(out, report);
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized-function workbench"};
  app.require_subcommand(1);

  std::string config_path, out_path, schedule_flag;
  int k_max = 2;
  int seeley_L = 8;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out,--report", out_path, "report output path");
  app.add_option("--schedule", schedule_flag, "eps0,r,N override");
  app.add_option("--kmax", k_max, "maximum seminorm order");

  CLI::App* classify = app.add_subcommand("classify", "net classification");
  CLI::App* seeley = app.add_subcommand("seeley", "Seeley sequence");
  seeley->add_option("--L", seeley_L, "truncation length");
  CLI::App* embed = app.add_subcommand("embed", "mollifier embedding");
  CLI::App* decompose = app.add_subcommand("decompose", "AAA decomposition");
  CLI::App* compose = app.add_subcommand("compose", "tempered composition");
  CLI::App* solve = app.add_subcommand("solve", "LSE split solve");
  CLI::App* verify = app.add_subcommand("verify", "operator verification");
  CLI::App* primitive = app.add_subcommand("primitive", "net primitive");

  // Per-subcommand copies of the shared flags so they work in either
  // position on the command line.
  for (CLI::App* sub : {classify, seeley, embed, decompose, compose, solve,
                        verify, primitive}) {
    sub->add_option("--config", config_path);
    sub->add_option("--out,--report", out_path);
    sub->add_option("--schedule", schedule_flag);
    sub->add_option("--kmax", k_max);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!schedule_flag.empty() || cfg.contains("schedule"))
      cfg["schedule"] = schedule_json(schedule_from(cfg, schedule_flag));

    if (classify->parsed()) return run_classify(cfg, out_path, k_max);
    if (seeley->parsed()) return run_seeley(cfg, out_path, seeley_L);
    if (embed->parsed()) return run_embed(cfg, out_path);
    if (decompose->parsed()) return run_decompose(cfg, out_path);
    if (compose->parsed()) return run_compose(cfg, out_path);
    if (solve->parsed()) return run_solve(cfg, out_path);
    if (verify->parsed()) return run_verify(cfg, out_path, k_max);
    if (primitive->parsed()) return run_primitive(cfg, out_path);
  } catch (const aagf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const aagf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
