#include "gefhole/stats.hpp"

#include <algorithm>
#include <cmath>

#include "gefhole/errors.hpp"

namespace gefhole {

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // theta-function form converges fast for small lambda
    const double pi2 = M_PI * M_PI;
    double s = 0.0;
    for (int k = 1; k <= 50; ++k) s += std::exp(-(2.0 * k - 1) * (2.0 * k - 1) * pi2 / (8.0 * lambda * lambda));
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

namespace {

// Stephens' small-sample correction.
double ks_p(double d, double ne) {
  const double sq = std::sqrt(ne);
  return kolmogorov_sf((sq + 0.12 + 0.11 / sq) * d);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ArgumentError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  KsResult r;
  r.statistic = d;
  r.n_eff = na * nb / (na + nb);
  r.p_value = ks_p(d, r.n_eff);
  return r;
}

KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw ArgumentError("ks_one_sample: empty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  KsResult r;
  r.statistic = d;
  r.n_eff = n;
  r.p_value = ks_p(d, n);
  return r;
}

MeanStderr mean_stderr(const std::vector<double>& x) {
  MeanStderr out;
  if (x.empty()) return out;
  double m = 0.0;
  for (double v : x) m += v;
  m /= x.size();
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  out.mean = m;
  out.stderr_ = x.size() > 1 ? std::sqrt(ss / (x.size() - 1) / x.size()) : 0.0;
  return out;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  if (m < 2) throw ArgumentError("gelman_rubin: need at least two chains");
  const std::size_t n = chains[0].size();
  for (const auto& c : chains)
    if (c.size() != n || n < 2) throw ArgumentError("gelman_rubin: chains must share a length >= 2");
  std::vector<double> means(m), vars(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ms = mean_stderr(chains[i]);
    means[i] = ms.mean;
    vars[i] = ms.stderr_ * ms.stderr_ * n;
  }
  double grand = 0.0;
  for (double v : means) grand += v;
  grand /= m;
  double B = 0.0;
  for (double v : means) B += (v - grand) * (v - grand);
  B *= static_cast<double>(n) / (m - 1);
  double W = 0.0;
  for (double v : vars) W += v;
  W /= m;
  if (W <= 0.0) return B > 0.0 ? INFINITY : 1.0;
  const double var_plus = (n - 1.0) / n * W + B / n;
  return std::sqrt(var_plus / W);
}

double effective_sample_size(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 4) return static_cast<double>(n);
  const double m = mean_stderr(x).mean;
  double c0 = 0.0;
  for (double v : x) c0 += (v - m) * (v - m);
  c0 /= n;
  if (c0 <= 0.0) return static_cast<double>(n);
  auto rho = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - m) * (x[i + lag] - m);
    return s / n / c0;
  };
  double tau = -1.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double pair = rho(2 * k) + rho(2 * k + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  return n / std::max(tau, 1.0 / n);
}

}  // namespace gefhole
