#include "gefhole/series.hpp"

#include <algorithm>
#include <cmath>

#include "gefhole/errors.hpp"

namespace gefhole {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_abs(std::complex<double> x) {
  const double a = std::abs(x);
  return a > 0 ? std::log(a) : kNegInf;
}

LogComplex to_log(std::complex<double> sum, double shift) {
  LogComplex out;
  const double a = std::abs(sum);
  if (a == 0) return out;
  out.log_abs = std::log(a) + shift;
  out.arg = std::arg(sum);
  return out;
}

}  // namespace

double half_log_factorial(int k) {
  static const std::vector<double> table = [] {
    std::vector<double> t(1 << 15);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.5 * std::lgamma(static_cast<double>(i) + 1.0);
    return t;
  }();
  if (k >= 0 && static_cast<std::size_t>(k) < table.size()) return table[k];
  return 0.5 * std::lgamma(k + 1.0);
}

CoeffVector sample_coeffs(int n, RandomStream& rng, double scale) {
  if (n < 0) throw ArgumentError("sample_coeffs: n must be >= 0");
  if (!(scale > 0)) throw ArgumentError("sample_coeffs: scale must be > 0");
  CoeffVector c;
  c.scale = scale;
  c.xi.resize(static_cast<std::size_t>(n) + 1);
  for (auto& x : c.xi) x = rng.complex_gaussian();
  return c;
}

double log_b(int k, double r) {
  if (k < 0 || !(r > 0)) throw ArgumentError("log_b: need k >= 0, r > 0");
  if (k == 0) return 0.0;
  return k * std::log(r) - half_log_factorial(k);
}

LogBracket stirling_bounds(int k) {
  if (k < 1) throw ArgumentError("stirling_bounds: k must be >= 1");
  const double base = k * (std::log(static_cast<double>(k)) - 1.0);
  return {base, base + std::log(3.0) + 0.5 * std::log(static_cast<double>(k))};
}

std::complex<double> LogComplex::value() const {
  if (is_zero()) return {0.0, 0.0};
  return std::polar(std::exp(log_abs), arg);
}

std::complex<double> PolyWithDerivative::newton_step() const {
  if (value.is_zero()) return {0.0, 0.0};
  if (derivative.is_zero()) return {std::numeric_limits<double>::infinity(), 0.0};
  return std::polar(std::exp(value.log_abs - derivative.log_abs), value.arg - derivative.arg);
}

LogComplex eval_poly(const CoeffVector& c, std::complex<double> z) {
  return eval_poly_with_derivative(c, z).value;
}

PolyWithDerivative eval_poly_with_derivative(const CoeffVector& c, std::complex<double> z) {
  const int n = c.degree();
  PolyWithDerivative out;
  if (n < 0) return out;
  const std::complex<double> w = c.scale * z;
  const double lw = log_abs(w);
  const double theta = std::arg(w);

  // log |xi_k w^k / sqrt(k!)| and log |k xi_k w^(k-1) / sqrt(k!)|
  std::vector<double> m(n + 1, kNegInf);
  std::vector<double> d(n + 1, kNegInf);
  double top = kNegInf;
  double top_d = kNegInf;
  for (int k = 0; k <= n; ++k) {
    const double lx = log_abs(c.xi[k]);
    if (lx == kNegInf) continue;
    const double lf = half_log_factorial(k);
    if (k == 0 || lw != kNegInf) m[k] = lx + (k == 0 ? 0.0 : k * lw) - lf;
    if (k == 1) d[k] = lx;
    else if (k > 1 && lw != kNegInf) d[k] = lx + std::log(static_cast<double>(k)) + (k - 1) * lw - lf;
    top = std::max(top, m[k]);
    top_d = std::max(top_d, d[k]);
  }

  std::complex<double> sum{0.0, 0.0};
  std::complex<double> dsum{0.0, 0.0};
  for (int k = 0; k <= n; ++k) {
    if (m[k] == kNegInf && d[k] == kNegInf) continue;
    const double ph = std::arg(c.xi[k]);
    if (m[k] != kNegInf) sum += std::polar(std::exp(m[k] - top), ph + k * theta);
    if (d[k] != kNegInf) dsum += std::polar(std::exp(d[k] - top_d), ph + (k - 1) * theta);
  }
  if (top != kNegInf) out.value = to_log(sum, top);
  if (top_d != kNegInf) {
    out.derivative = to_log(dsum, top_d);
    if (!out.derivative.is_zero()) out.derivative.log_abs += std::log(c.scale);
  }
  return out;
}

double tail_envelope(int N, double B, double lambda) {
  if (!(lambda >= 16.0)) throw ArgumentError("tail_envelope: lambda must be >= 16");
  if (!(B >= 1.0 && B <= 0.5 * std::sqrt(lambda)))
    throw ArgumentError("tail_envelope: B must lie in [1, sqrt(lambda)/2]");
  if (N < 0) throw ArgumentError("tail_envelope: N must be >= 0");
  return 0.5 * N * std::log(16.0 * B * B / lambda);
}

TruncationPlan make_truncation_plan(double r, double C2) {
  if (!(r > std::exp(1.0))) throw ArgumentError("make_truncation_plan: r must exceed e");
  if (!(C2 >= 4.0)) throw ArgumentError("make_truncation_plan: C2 must be >= 4");
  TruncationPlan p;
  p.r = r;
  p.C2 = C2;
  p.lambda = std::log(r);
  const double r2 = r * r;
  p.N0 = static_cast<int>(std::floor(p.lambda * r2)) + 1;
  p.N1 = static_cast<int>(std::floor(2.0 * p.lambda * r2)) + 1;
  p.alpha_lo = p.N0 / r2;
  p.alpha_hi = p.N1 / r2;
  p.gamma = std::pow(r, -C2);
  p.t = p.gamma;
  return p;
}

RegularityReport regularity_check(const CoeffVector& c, const TruncationPlan& plan) {
  const int N = c.degree();
  if (N < plan.N0 || N > plan.N1)
    throw ArgumentError("regularity_check: degree outside [N0, N1]");
  RegularityReport rep;
  const double r = plan.r;
  const double r2 = r * r;
  const double r6 = r2 * r2 * r2;
  rep.coeff_bound = true;
  for (int k = 0; k <= N; ++k) {
    const double a = std::abs(c.xi[k]);
    if (a > std::sqrt(r6 + k)) rep.coeff_bound = false;
    rep.energy_sum += a * a;
  }
  rep.energy_bound = rep.energy_sum <= rep.energy_constant * plan.lambda * r2 * r2;
  const double floor_mag = -r2;  // log exp(-r^2)
  rep.leading_bound = log_abs(c.xi[N]) >= floor_mag;
  for (int k = plan.N0; k <= N; ++k) {
    if (log_abs(c.xi[k]) >= floor_mag) {
      rep.selected_degree = k;
      break;
    }
  }
  return rep;
}

}  // namespace gefhole
