#include "aagf/mollifier.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "aagf/errors.hpp"
#include "aagf/quadrature.hpp"
#include "nlohmann/json.hpp"

namespace aagf {

namespace {

constexpr int kMaxDerivOrder = 24;

// E[x^{2m}] for the standard normal: (2m-1)!!.
double gaussian_moment(int two_m) {
  double v = 1.0;
  for (int i = two_m - 1; i >= 1; i -= 2) v *= i;
  return v;
}

// Solve the (K/2+1)-square moment system by Gaussian elimination with
// partial pivoting; the matrices are tiny (at most 5x5 for K = 8).
std::vector<double> solve_coeffs(int K) {
  const int n = K / 2 + 1;
  std::vector<std::vector<double>> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = m[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 0; j < n; ++j)
      row[static_cast<std::size_t>(j)] = gaussian_moment(2 * (i + j));
    row[static_cast<std::size_t>(n)] = i == 0 ? 1.0 : 0.0;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
          std::abs(m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
        piv = r;
    std::swap(m[static_cast<std::size_t>(col)], m[static_cast<std::size_t>(piv)]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                            m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      for (int c = col; c <= n; ++c)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            factor * m[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] /
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  return out;
}

double poly_eval(const std::vector<double>& p, double x) {
  double v = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Expression build_expr(const std::vector<double>& coeffs) {
  std::ostringstream os;
  os << "(1/sqrt(2*pi))*exp(-(x^2)/2)*(";
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (j) os << "+";
    os << fmt(coeffs[j]);
    if (j) os << "*x^" << 2 * j;
  }
  os << ")";
  return parse(os.str());
}

Mollifier assemble(int K, double radius, std::vector<double> coeffs) {
  if (K < 2 || K > 8 || K % 2 != 0)
    throw ConfigError("mollifier moment count K must be even, 2 <= K <= 8");
  Mollifier m;
  m.K = K;
  m.radius = radius;
  m.coeffs = std::move(coeffs);

  // Q_{n+1} = Q_n' - x Q_n, so rho^{(n)} = Q_n(x) e^{-x^2/2} / sqrt(2 pi).
  std::vector<double> full(static_cast<std::size_t>(K) + 1, 0.0);
  for (std::size_t j = 0; j < m.coeffs.size(); ++j) full[2 * j] = m.coeffs[j];
  m.deriv_polys.push_back(full);
  for (int n = 0; n < kMaxDerivOrder; ++n) {
    const std::vector<double>& q = m.deriv_polys.back();
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t i = 1; i < q.size(); ++i)
      next[i - 1] += static_cast<double>(i) * q[i];
    for (std::size_t i = 0; i < q.size(); ++i) next[i + 1] -= q[i];
    m.deriv_polys.push_back(std::move(next));
  }

  m.rho_expr = build_expr(m.coeffs);
  m.fn = wrap(m.rho_expr);

  for (int k = 0; k <= K; ++k) {
    const double mu = integrate(
        [&m, k](double x) { return std::pow(x, k) * m.deriv(x, 0); }, -radius,
        radius, 0.25);
    m.moments.push_back(mu);
    const double res = k == 0 ? std::abs(mu - 1.0) : std::abs(mu);
    const double tol = k == 0 ? 1e-8 : 1e-6;
    if (res >= tol) throw MomentFailure(k, res);
  }
  return m;
}

}  // namespace

double Mollifier::deriv(double x, int n) const {
  if (n < 0 || n >= static_cast<int>(deriv_polys.size()))
    throw OrderTooHigh("mollifier derivative order beyond precomputed table");
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  return poly_eval(deriv_polys[static_cast<std::size_t>(n)], x) *
         std::exp(-0.5 * x * x) * inv_sqrt_2pi;
}

double Mollifier::rho_hat(double xi) const {
  const double t = 0.5 * xi * xi;
  double term = 1.0, sum = 1.0;
  for (int j = 1; j <= K / 2; ++j) {
    term *= t / j;
    sum += term;
  }
  return std::exp(-t) * sum;
}

SmoothFnPtr Mollifier::scaled(double eps) const {
  if (!(eps > 0.0)) throw DomainError("mollifier scale must be positive");
  Mollifier self = *this;
  return fn_from_callable([self, eps](double x, int order) {
    std::vector<double> d(static_cast<std::size_t>(order) + 1);
    double scale = 1.0 / eps;
    const double y = x / eps;
    for (int n = 0; n <= order; ++n, scale /= eps)
      d[static_cast<std::size_t>(n)] = self.deriv(y, n) * scale;
    return Jet(x, std::move(d));
  });
}

std::string Mollifier::table_csv(double spacing) const {
  std::ostringstream os;
  os << "x,rho\n";
  const int half = static_cast<int>(std::llround(radius / spacing));
  for (int i = -half; i <= half; ++i) {
    const double x = i * spacing;
    os << fmt(x) << "," << fmt(deriv(x, 0)) << "\n";
  }
  return os.str();
}

std::string Mollifier::header_json() const {
  nlohmann::json j;
  j["K"] = K;
  j["radius"] = radius;
  j["coeffs"] = coeffs;
  j["moments"] = moments;
  j["expression"] = rho_expr.str();
  return j.dump(2);
}

Mollifier build_mollifier(int K, double radius) {
  return assemble(K, radius, solve_coeffs(K));
}

Mollifier mollifier_from_json(const std::string& header) {
  nlohmann::json j = nlohmann::json::parse(header, nullptr, false);
  if (j.is_discarded() || !j.contains("K") || !j.contains("coeffs"))
    throw ConfigError("mollifier header needs K and coeffs");
  return assemble(j["K"].get<int>(), j.value("radius", 12.0),
                  j["coeffs"].get<std::vector<double>>());
}

}  // namespace aagf
