#include "checks.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "gefhole/conditional_sampler.hpp"
#include "gefhole/constants.hpp"
#include "gefhole/energy_optimizer.hpp"
#include "gefhole/errors.hpp"
#include "gefhole/radial_measures.hpp"
#include "gefhole/rootfinder.hpp"
#include "gefhole/series.hpp"
#include "gefhole/stats.hpp"

namespace gefhole::checks {
namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double gk61(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-14);
}

// x log x from p to q, by quadrature
double z_quadrature(double p) {
  const double q = q_of_p(p);
  auto f = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
  // split at 1 where the integrand changes sign
  const double lo = std::min(p, q), hi = std::max(p, q);
  double s = 0.0;
  if (lo < 1.0 && hi > 1.0)
    s = gk61(f, lo, 1.0) + gk61(f, 1.0, hi);
  else
    s = gk61(f, lo, hi);
  return std::abs(s);
}

double g_quadrature(double p) {
  auto f = [](double x) { return 1.0 - x + (x > 0 ? x * std::log(x) : 0.0); };
  return std::abs(gk61(f, 1.0, p));
}

double spike_target(double p, double alpha) { return std::abs(q_of_p(p) - p) / alpha; }

// (1.05, 0.95 sqrt(q)) below 1, (1.05, 0.95 sqrt(p)) above
std::pair<double, double> forbidden_annulus(double p) {
  const double hi = p < 1.0 ? std::sqrt(q_of_p(p)) : std::sqrt(p);
  return {1.05, 0.95 * hi};
}

RadialMeasure random_measure(RandomStream& rng, double support) {
  std::vector<CircleAtom> atoms;
  std::vector<Annulus> annuli;
  for (int i = 0; i < 3; ++i) atoms.push_back({support * (0.05 + 0.95 * rng.uniform()), rng.uniform()});
  // two disjoint annuli from four sorted cut points
  std::vector<double> cut(4);
  for (auto& x : cut) x = support * rng.uniform();
  std::sort(cut.begin(), cut.end());
  if (rng.uniform() < 0.5) cut[0] = 0.0;
  for (int i = 0; i < 2; ++i) annuli.push_back({cut[2 * i], cut[2 * i + 1], rng.uniform()});
  RadialMeasure raw(atoms, annuli);
  const double m = raw.total_mass();
  for (auto& a : atoms) a.mass /= m;
  for (auto& A : annuli) A.c /= m;
  return RadialMeasure(std::move(atoms), std::move(annuli));
}

std::vector<cplx> random_config(RandomStream& rng, int N, double spread) {
  std::vector<cplx> z(N);
  for (auto& v : z) v = spread * rng.complex_gaussian();
  return z;
}

int count_zeros(const CoeffVector& c, double r) {
  try {
    return winding_count(c, r).count;
  } catch (const NumericalError&) {
    return count_in_disk(roots(c), r);
  }
}

CheckResult make(std::string id, std::string name, bool ok, double value, double threshold, std::string detail) {
  CheckResult r;
  r.id = std::move(id);
  r.name = std::move(name);
  r.passed = ok;
  r.value = value;
  r.threshold = threshold;
  r.detail = std::move(detail);
  return r;
}

// ---- acceptance criteria ----

CheckResult criterion_constants() {
  const bool exact = q_of_p(0.0) == kE && q_of_p(1.0) == 1.0 && q_of_p(kE) == 0.0 && q_of_p(3.0) == 0.0 &&
                     q_of_p(10.0) == 0.0;
  const double z0 = std::abs(z_const(0.0) - kE * kE / 4.0);
  double zmax = 0.0, gmax = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double p = 0.01 * i;
    if (i != 100) zmax = std::max(zmax, std::abs(z_const(p) - z_quadrature(p)));
    gmax = std::max(gmax, std::abs(ginibre_g(p) - g_quadrature(p)));
  }
  zmax = std::max(zmax, std::abs(z_const(1.0)));
  const double worst = std::max({z0, zmax, gmax});
  return make("1", "constants", exact && worst <= 1e-10, worst, 1e-10,
              fmt("exact q values %s, |Z_0 - e^2/4| %.1e, Z grid %.1e, G grid %.1e", exact ? "ok" : "WRONG", z0, zmax,
                  gmax));
}

CheckResult criterion_potential() {
  double u_err = 0.0, s_err = 0.0, i_err = 0.0;
  for (double alpha : {8.0, 16.0}) {
    const RadialMeasure eq = equilibrium(alpha);
    const double sa = std::sqrt(alpha);
    for (int i = 0; i < 20; ++i) {
      const double s = 1.5 * sa * i / 19.0;
      const double cf = s <= sa ? s * s / (2 * alpha) + 0.5 * std::log(alpha) - 0.5 : std::log(s);
      u_err = std::max(u_err, std::abs(log_potential(eq, s) - cf));
    }
    s_err = std::max(s_err, std::abs(log_energy(eq) - (0.5 * std::log(alpha) - 0.25)));
    for (double p : {0.0, 0.25, 0.5, 2.0, 2.5, kE, 4.0}) {
      const double quad = functional_I(catalog(p, alpha), alpha, Method::quadrature).I_alpha;
      i_err = std::max(i_err, std::abs(quad - minimal_I(p, alpha)));
    }
  }
  const bool ok = u_err <= 1e-10 && s_err <= 1e-10 && i_err <= 1e-6;
  return make("2", "potential identities", ok, i_err, 1e-6,
              fmt("U_eq %.1e, Sigma_eq %.1e (tol 1e-10); I by quadrature vs closed form %.1e", u_err, s_err, i_err));
}

CheckResult criterion_optimizer() {
  const double alpha = 10.0;
  bool ok = true;
  double worst_gap = 0.0;
  std::ostringstream d;
  for (double p : {0.0, 0.5, 2.0, 4.0}) {
    const MinimizeResult res = minimize(alpha, Constraint::for_p(p), {800});
    const ShellGrid& g = res.grid;
    const double spike = g.masses[g.unit_index];
    const auto [lo, hi] = forbidden_annulus(p);
    double forb = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.radii[i] > lo && g.radii[i] < hi) forb += g.masses[i];
    const double gap = std::abs(res.I - minimal_I(p, alpha));
    const bool this_ok =
        std::abs(spike - spike_target(p, alpha)) <= 0.01 && forb < 1e-3 && gap <= 1e-3 && g.infeasibility() <= 1e-10;
    ok = ok && this_ok;
    worst_gap = std::max(worst_gap, gap);
    d << fmt("p=%g spike %.5f (target %.5f) forbidden %.1e |I gap| %.1e%s; ", p, spike, spike_target(p, alpha), forb,
             gap, this_ok ? "" : " FAIL");
  }
  return make("3", "optimizer recovery", ok, worst_gap, 1e-3, d.str());
}

double n2_normalization(double L) {
  const auto ctx = JointDensityContext::make(2, L);
  // r^2 = u / (1 - u) / L^2 maps [0, 1) onto [0, inf); int g r dr = int g / (2 L^2 (1-u)^2) du
  using GL = boost::math::quadrature::gauss<double, 30>;
  const int panels = 9, n_theta = 96;
  std::vector<double> us, ws;
  for (int k = 0; k < panels; ++k) {
    const double a = 1.0 - std::pow(0.25, k), b = 1.0 - std::pow(0.25, k + 1);
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();
    for (std::size_t i = 0; i < x.size(); ++i)
      for (int sgn : {-1, 1}) {
        if (i == 0 && sgn == -1 && x[0] == 0.0) continue;
        us.push_back(0.5 * (a + b) + sgn * 0.5 * (b - a) * x[i]);
        ws.push_back(0.5 * (b - a) * w[i]);
      }
  }
  std::vector<double> rad(us.size()), jac(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) {
    rad[i] = std::sqrt(us[i] / (1.0 - us[i])) / L;
    jac[i] = ws[i] / (2.0 * L * L * (1.0 - us[i]) * (1.0 - us[i]));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < us.size(); ++i)
    for (std::size_t j = 0; j < us.size(); ++j) {
      double inner = 0.0;
      for (int k = 0; k < n_theta; ++k) {
        const double th = 2.0 * kPi * (k + 0.5) / n_theta;
        inner += std::exp(log_joint_density(std::vector<cplx>{rad[i], std::polar(rad[j], th)}, ctx));
      }
      total += jac[i] * jac[j] * inner * (2.0 * kPi / n_theta);
    }
  return 2.0 * kPi * total;
}

CheckResult criterion_joint_density() {
  RandomStream rng(41);
  double n1_err = 0.0;
  for (double L : {1.0, 2.5}) {
    const auto ctx = JointDensityContext::make(1, L);
    for (int i = 0; i < 50; ++i) {
      const cplx z = (1.5 / L) * rng.complex_gaussian();
      const double want = L * L / (kPi * std::pow(1.0 + L * L * std::norm(z), 2));
      n1_err = std::max(n1_err, std::abs(std::exp(log_joint_density(std::vector<cplx>{z}, ctx)) - want));
    }
  }
  const double mass = n2_normalization(1.0);
  double perm_err = 0.0;
  const auto ctx8 = JointDensityContext::make(8, 1.3);
  for (int i = 0; i < 20; ++i) {
    auto z = random_config(rng, 8, 1.5);
    const double v = log_joint_density(z, ctx8);
    for (int s = 0; s < 5; ++s) {
      std::shuffle(z.begin(), z.end(), rng.engine());
      perm_err = std::max(perm_err, std::abs(log_joint_density(z, ctx8) - v) / std::max(1.0, std::abs(v)));
    }
  }
  const bool ok = n1_err <= 1e-10 && mass >= 0.999 && mass <= 1.001 && perm_err <= 1e-12;
  return make("4", "joint density", ok, mass, 0.999,
              fmt("N=1 closed form %.1e; N=2 mass %.6f; permutation %.1e", n1_err, mass, perm_err));
}

CheckResult criterion_sampler() {
  const int N = 8;
  const double L = 1.0;
  const auto ctx = JointDensityContext::make(N, L);
  RandomStream rng(101);
  ChainOptions o;
  o.hole_radius = 0.0;
  o.burn_in_sweeps = 2000;
  // the far zeros mix slowly; thin 150 leaves a margin over 1e4 effective samples
  o.thin = 150;
  o.sweeps = 12000 * o.thin;
  RandomStream chain_rng = rng.split(0);
  const ChainResult ch = mh_hole_chain(ctx, o, chain_rng);
  std::vector<double> a_min, a_any, b_min, b_any;
  RandomStream pick = rng.split(2);
  for (const auto& s : ch.samples) {
    double m = 1e300;
    for (auto z : s.zeros) m = std::min(m, std::abs(z));
    a_min.push_back(m);
    a_any.push_back(std::abs(s.zeros[pick.next_u64() % N]));
  }
  RandomStream direct = rng.split(1);
  for (int i = 0; i < 12000; ++i) {
    const ZeroConfig zc = roots(sample_coeffs(N, direct, L));
    double m = 1e300;
    for (auto z : zc.zeros) m = std::min(m, std::abs(z));
    b_min.push_back(m);
    b_any.push_back(std::abs(zc.zeros[direct.next_u64() % N]));
  }
  // |z| has infinite variance at this N (tail ~ R^-2), so ESS is taken on the rank-equivalent 1 / (1 + |z|^2)
  auto bounded = [](std::vector<double> v) {
    for (auto& x : v) x = 1.0 / (1.0 + x * x);
    return v;
  };
  const double ess = std::min(effective_sample_size(bounded(a_min)), effective_sample_size(bounded(a_any)));
  const auto k1 = ks_two_sample(a_min, b_min);
  const auto k2 = ks_two_sample(a_any, b_any);
  const double p = std::min(k1.p_value, k2.p_value);
  const bool ok = p > 0.01 && ess >= 1e4;
  return make("5", "sampler consistency", ok, p, 0.01,
              fmt("KS p (min modulus) %.3f, KS p (one zero) %.3f, ESS %.0f, acceptance %.3f", k1.p_value, k2.p_value,
                  ess, ch.acceptance_rate));
}

CheckResult criterion_forbidden() {
  const int N = 64;
  const double L = std::sqrt(64.0 / 9.0);
  const auto ctx = JointDensityContext::make(N, L);
  RandomStream rng(202);
  ChainOptions o;
  o.hole_radius = 1.0;
  o.sweeps = 40000;
  o.burn_in_sweeps = 8000;
  o.thin = 10;
  const ChainResult ch = mh_hole_chain(ctx, o, rng);
  const double eq = L * L / kPi;
  const double lo = 1.05, hi = std::sqrt(kE) * 0.95;
  double cnt = 0.0;
  for (const auto& s : ch.samples)
    for (auto z : s.zeros) {
      const double r = std::abs(z);
      if (r > lo && r < hi) cnt += 1.0;
    }
  const double ratio = cnt / ch.samples.size() / (kPi * (hi * hi - lo * lo)) / eq;
  const auto h = radial_histogram(ch.samples, uniform_edges(1.0, 1.10, 2));
  const double boundary = h.density[1] > 0 ? h.density[0] / h.density[1] : INFINITY;
  const bool ok = ratio < 0.2 && boundary >= 10.0;
  return make("6", "forbidden region", ok, ratio, 0.2,
              fmt("annulus density / equilibrium %.3f (need < 0.2); boundary bin / next bin %.2f (need >= 10); "
                  "%zu samples, acceptance %.3f",
                  ratio, boundary, ch.samples.size(), ch.acceptance_rate));
}

CheckResult criterion_rouche() {
  bool ok = true;
  std::ostringstream d;
  double worst = 1.0;
  for (double p : {0.0, 0.5, 2.0}) {
    RandomStream rng(303, static_cast<std::uint64_t>(p * 10));
    int cert = 0, exact = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      RandomStream s = rng.split(static_cast<std::uint64_t>(i));
      const RareEventSample ev = construct_rare_event(4.0, p, s);
      if (!ev.certificate.holds) continue;
      ++cert;
      if (ev.zero_count() == ev.k0) ++exact;
    }
    const double frac = cert ? static_cast<double>(exact) / cert : 0.0;
    worst = std::min(worst, std::min(frac, static_cast<double>(cert) / n));
    ok = ok && cert == n && exact == cert;
    d << fmt("p=%g k0=%d certified %d/%d exact %d; ", p, main_index(p, 4.0), cert, n, exact);
  }
  return make("7", "Rouche construction", ok, worst, 1.0, d.str());
}

CheckResult criterion_first_moment() {
  const double r = 3.0;
  const int N = static_cast<int>(std::ceil(4 * r * r + 40));
  RandomStream rng(404);
  std::vector<double> n(10000);
  for (std::size_t i = 0; i < n.size(); ++i) {
    RandomStream s = rng.split(i);
    n[i] = count_zeros(sample_coeffs(N, s), r);
  }
  const auto ms = mean_stderr(n);
  const double rel = std::abs(ms.mean / (r * r) - 1.0);
  return make("8", "first moment", rel <= 0.02, rel, 0.02,
              fmt("E n(3) = %.4f +- %.4f vs 9", ms.mean, ms.stderr_));
}

struct Suite {
  std::string name;
  long cases = 0;
  long violations = 0;
  double worst = -INFINITY;  // largest (lhs - rhs) style excess
};

Suite bernstein_markov() {
  Suite s{"Bernstein-Markov"};
  RandomStream rng(501);
  for (int i = 0; i < 1000; ++i) {
    const int N = 1 + static_cast<int>(rng.next_u64() % 40);
    const double L = i % 2 ? 3.0 : 1.0;
    std::vector<cplx> a(N + 1);
    double S = 0.0;
    for (int k = 0; k <= N; ++k) {
      const cplx xi = rng.complex_gaussian();
      S += std::norm(xi);
      a[k] = xi * std::exp(k * std::log(L) - 0.5 * std::lgamma(k + 1.0));
    }
    const double R = (std::sqrt(N) + 3.0) / L;
    double sup = 0.0;
    for (int ir = 0; ir <= 120; ++ir)
      for (int it = 0; it < 64; ++it) {
        const cplx w = std::polar(R * ir / 120.0, 2 * kPi * it / 64.0);
        cplx v = a[N];
        for (int k = N - 1; k >= 0; --k) v = v * w + a[k];
        sup = std::max(sup, std::norm(v) * std::exp(-L * L * std::norm(w)));
      }
    ++s.cases;
    s.worst = std::max(s.worst, sup - S);
    if (sup > S + 1e-9) ++s.violations;
  }
  return s;
}

Suite a_below_s() {
  Suite s{"A <= S"};
  RandomStream rng(502);
  for (int i = 0; i < 1000; ++i) {
    const int N = 1 + static_cast<int>(rng.next_u64() % 24);
    const double L = i % 2 ? 2.0 : 1.0;
    const auto ctx = JointDensityContext::make(N, L);
    const auto z = random_config(rng, N, std::sqrt(static_cast<double>(N)) / L);
    const double ex = log_A_sup(z, ctx, 60, 64) - log_S(z, ctx);
    ++s.cases;
    s.worst = std::max(s.worst, ex);
    if (ex > 1e-12) ++s.violations;
  }
  return s;
}

Suite jensen() {
  Suite s{"Jensen"};
  RandomStream rng(503);
  for (int i = 0; i < 100; ++i) {
    const RadialMeasure nu = random_measure(rng, 3.0);
    for (int j = 0; j < 10; ++j) {
      const double r = 0.05 + 4.0 * rng.uniform();
      const Sides sd = jensen_check(nu, r);
      const double ex = std::abs(sd.lhs - sd.rhs) - 1e-10 * std::max(1.0, std::abs(sd.lhs));
      ++s.cases;
      s.worst = std::max(s.worst, std::abs(sd.lhs - sd.rhs));
      if (ex > 0) ++s.violations;
    }
  }
  return s;
}

TestFunction random_test_function(RandomStream& rng, double alpha) {
  const double sa = std::sqrt(alpha);
  if (rng.uniform() < 0.5) {
    const double mid = 0.5 + (sa - 0.5) * rng.uniform();
    return radial_bump(mid, 0.1 + 0.5 * rng.uniform());
  }
  const cplx c = std::polar(sa * rng.uniform(), 2 * kPi * rng.uniform());
  return bump(c, 0.3 + rng.uniform());
}

Suite lin_stats_gap() {
  Suite s{"linear statistics gap"};
  RandomStream rng(504);
  const std::vector<double> ps = {0.0, 0.25, 0.5, 2.0, 2.5, kE, 4.0};
  const CatalogKind kinds[] = {CatalogKind::gef_constrained, CatalogKind::ginibre};
  for (int i = 0; i < 100; ++i) {
    const double alpha = 8.0 + 8.0 * rng.uniform();
    const auto pick = [&] {
      if (rng.uniform() < 0.2) return equilibrium(alpha);
      const double p = ps[rng.next_u64() % ps.size()];
      return catalog(p, alpha, kinds[rng.next_u64() % 2]);
    };
    const RadialMeasure nu = pick(), mu = pick();
    const TestFunction phi = random_test_function(rng, alpha);
    const Sides sd = lin_stats_gap_bound(nu, mu, phi, 1.0 / 24);
    ++s.cases;
    s.worst = std::max(s.worst, sd.lhs - sd.rhs);
    if (sd.lhs > sd.rhs * (1 + 1e-9) + 1e-12) ++s.violations;
  }
  return s;
}

Suite smoothed_energy_comparison() {
  Suite s{"smoothed energy comparison"};
  RandomStream rng(505);
  const double t = 1e-3;
  for (int i = 0; i < 1000; ++i) {
    const int N = 2 + static_cast<int>(rng.next_u64() % 63);
    const auto z = random_config(rng, N, 1.0 + 2.0 * rng.uniform());
    double pair = 0.0;
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        if (j != k) pair += std::log(std::abs(z[j] - z[k]));
    pair /= static_cast<double>(N) * N;
    const double ex = pair - (smoothed_energy(z, t) + 2.0 * std::log(1.0 / t) / N);
    ++s.cases;
    s.worst = std::max(s.worst, ex);
    if (ex > 0) ++s.violations;
  }
  return s;
}

Suite g_nonpositive() {
  Suite s{"g_nu <= 0"};
  RandomStream rng(506);
  std::vector<std::pair<RadialMeasure, double>> ms;
  for (double alpha : {8.0, 10.0, 16.0}) {
    ms.emplace_back(equilibrium(alpha), alpha);
    for (double p : {0.0, 0.25, 0.5, 2.0, 2.5, kE, 4.0}) {
      ms.emplace_back(catalog(p, alpha), alpha);
      ms.emplace_back(catalog(p, alpha, CatalogKind::ginibre), alpha);
    }
  }
  for (int i = 0; i < 20; ++i) {
    const double alpha = 4.0 + 12.0 * rng.uniform();
    ms.emplace_back(random_measure(rng, std::sqrt(alpha) * 0.999), alpha);
  }
  for (int i = 0; i < 5; ++i)
    ms.emplace_back(random_feasible_grid(10.0, 200, Constraint::for_p(i * 0.5), 900 + i).to_measure(1e-3), 10.0);
  for (const auto& [nu, alpha] : ms) {
    const double B = b_alpha(nu, alpha).value;
    for (int j = 0; j < 1000; ++j) {
      const double r = 3.0 * std::sqrt(alpha) * j / 999.0;
      const double g = log_potential(nu, r) - r * r / (2 * alpha) - 0.5 * B;
      ++s.cases;
      s.worst = std::max(s.worst, g);
      if (g > 1e-10) ++s.violations;
    }
  }
  return s;
}

std::vector<RadialMeasure> feasible_probes(double p, double alpha, int n, std::uint64_t seed) {
  std::vector<RadialMeasure> out;
  const RadialMeasure mu = catalog(p, alpha);
  for (int i = 0; i < n; ++i) {
    const ShellGrid g = random_feasible_grid(alpha, 200, Constraint::for_p(p), seed * 1000 + i);
    const RadialMeasure nu = g.to_measure(g.default_smoothing());
    // every third probe stays close to the minimizer
    if (i % 3 == 2)
      out.push_back(mix(mu, 0.9, nu, 0.1));
    else
      out.push_back(nu);
  }
  return out;
}

Suite variational() {
  Suite s{"variational characterization"};
  for (double p : {0.0, 0.5, 2.0}) {
    const double alpha = 10.0;
    const auto probes = feasible_probes(p, alpha, 50, 507 + static_cast<int>(p * 10));
    const auto rep = variational_check(catalog(p, alpha), probes, alpha);
    s.cases += static_cast<long>(probes.size());
    s.worst = std::max(s.worst, rep.max_violation);
    if (rep.max_violation > 1e-6) ++s.violations;
  }
  return s;
}

Suite convexity_and_energy(Suite* energy_suite) {
  Suite s{"convexity gap"};
  const double p = 0.0, alpha = 10.0;
  RandomStream rng(508);
  const auto probes = feasible_probes(p, alpha, 100, 509);
  const RadialMeasure mu = catalog(p, alpha);
  const double I_mu = minimal_I(p, alpha);
  for (const auto& nu : probes) {
    const TestFunction phi = random_test_function(rng, alpha);
    const GapSides gs = convexity_gap_check(nu, p, alpha, phi, 1.0 / 24);
    ++s.cases;
    s.worst = std::max(s.worst, gs.rhs - gs.lhs);
    if (!gs.holds(1e-9)) ++s.violations;
    // -Sigma(nu - mu) <= I(nu) - I(mu)
    const double ex = -signed_energy(nu, mu) - (functional_I(nu, alpha).I_alpha - I_mu) - 1e-6;
    ++energy_suite->cases;
    energy_suite->worst = std::max(energy_suite->worst, ex + 1e-6);
    if (ex > 0) ++energy_suite->violations;
  }
  return s;
}

CheckResult criterion_inequalities() {
  std::vector<Suite> suites;
  suites.push_back(bernstein_markov());
  suites.push_back(a_below_s());
  suites.push_back(jensen());
  suites.push_back(lin_stats_gap());
  suites.push_back(smoothed_energy_comparison());
  suites.push_back(g_nonpositive());
  suites.push_back(variational());
  Suite energy{"energy lower bound"};
  suites.push_back(convexity_and_energy(&energy));
  suites.push_back(energy);
  long violations = 0;
  std::ostringstream d;
  for (const auto& s : suites) {
    violations += s.violations;
    d << fmt("%s %ld/%ld (worst %.1e); ", s.name.c_str(), s.violations, s.cases, s.worst);
  }
  return make("9", "inequality suites", violations == 0, static_cast<double>(violations), 0.0, d.str());
}

CheckResult criterion_hole() {
  RandomStream rng(606);
  const HoleEstimate h = hole_probability_mc(1.0, 1000000, rng);
  const double target = kE * kE / 4.0;
  const double ratio = -std::log(h.estimate) / target;
  const bool ok = ratio >= 0.3 && ratio <= 3.0;
  return make("10", "hole probability smoke check (non-asymptotic)", ok, ratio, 3.0,
              fmt("P[n(1)=0] = %.5f +- %.5f, -log = %.3f vs e^2/4 = %.3f, ratio %.3f in [0.3, 3]; fallbacks %ld",
                  h.estimate, h.stderr_, -std::log(h.estimate), target, ratio, h.fallbacks));
}

// ---- trivial tier ----

Check trivial(std::string id, std::string name, std::function<std::pair<double, double>()> err_tol) {
  return {id, name, [id, name, err_tol] {
            const auto [err, tol] = err_tol();
            return make(id, name, err <= tol, err, tol, fmt("error %.2e, tolerance %.1e", err, tol));
          }};
}

}  // namespace

std::vector<Check> acceptance_criteria() {
  return {
      {"1", "constants", criterion_constants},
      {"2", "potential identities", criterion_potential},
      {"3", "optimizer recovery", criterion_optimizer},
      {"4", "joint density", criterion_joint_density},
      {"5", "sampler consistency", criterion_sampler},
      {"6", "forbidden region", criterion_forbidden},
      {"7", "Rouche construction", criterion_rouche},
      {"8", "first moment", criterion_first_moment},
      {"9", "inequality suites", criterion_inequalities},
      {"10", "hole probability smoke check", criterion_hole},
  };
}

std::vector<Check> trivial_checks() {
  std::vector<Check> v;
  v.push_back(trivial("t.q", "q(0) = e, q(1) = 1, q(p >= e) = 0", [] {
    return std::pair{std::abs(q_of_p(0) - kE) + std::abs(q_of_p(1) - 1) + std::abs(q_of_p(kE)) + q_of_p(5.0), 0.0};
  }));
  v.push_back(trivial("t.z", "Z_0 = e^2/4, Z_1 = 0",
                      [] { return std::pair{std::abs(z_const(0) - kE * kE / 4) + std::abs(z_const(1)), 1e-12}; }));
  v.push_back(trivial("t.g", "G_1 = 0, G_0 = 1/4",
                      [] { return std::pair{std::abs(ginibre_g(1)) + std::abs(ginibre_g(0) - 0.25), 1e-14}; }));
  v.push_back(trivial("t.jlm", "psi continuous at 1 and 2, psi(1.5) = 2.5", [] {
    return std::pair{std::abs(jlm_exponent(1) - 1) + std::abs(jlm_exponent(2) - 4) + std::abs(jlm_exponent(1.5) - 2.5),
                     1e-12};
  }));
  v.push_back(trivial("t.rate", "moderate rate 2/3 at a = 1", [] {
    return std::pair{std::abs(moderate_rate(1, 1.5) - 2.0 / 3) + std::abs(moderate_rate(3, 1.5) - 18), 1e-12};
  }));
  v.push_back(trivial("t.main", "main term ratio vanishes at k0", [] {
    return std::pair{std::abs(main_term_logratio(0.5, main_index(0.5, 10), 10)), 0.0};
  }));
  v.push_back(trivial("t.logb", "log b_0 = 0, log b_4(2) = 4 log 2 - log 24 / 2", [] {
    return std::pair{std::abs(log_b(0, 3.7)) + std::abs(log_b(4, 2) - (4 * std::log(2.0) - 0.5 * std::log(24.0))),
                     1e-14};
  }));
  v.push_back(trivial("t.stirling", "Stirling bounds bracket 1! and 10!", [] {
    double bad = 0;
    for (int k : {1, 10, 170}) {
      const auto b = stirling_bounds(k);
      const double lf = std::lgamma(k + 1.0);
      bad += std::max(0.0, b.lo - lf) + std::max(0.0, lf - b.hi);
    }
    return std::pair{bad, 0.0};
  }));
  v.push_back(trivial("t.eval", "constant polynomial evaluates to 1", [] {
    CoeffVector c;
    c.xi.assign(6, 0.0);
    c.xi[0] = 1.0;
    double e = 0;
    for (cplx z : {cplx{0, 0}, cplx{2, -1}, cplx{-7, 3}}) e += std::abs(eval_poly(c, z).value() - 1.0);
    return std::pair{e, 1e-15};
  }));
  v.push_back(trivial("t.root1", "linear root is -xi0 / (xi1 L)", [] {
    CoeffVector c;
    c.xi = {cplx{0.3, -1.2}, cplx{0.7, 0.4}};
    c.scale = 1.7;
    const ZeroConfig zc = roots(c);
    return std::pair{std::abs(zc.zeros[0] + c.xi[0] / (c.xi[1] * c.scale)), 1e-14};
  }));
  v.push_back(trivial("t.count", "count_in_disk at 0 and at 1e30", [] {
    RandomStream rng(1);
    const ZeroConfig zc = roots(sample_coeffs(12, rng));
    return std::pair{static_cast<double>(count_in_disk(zc, 0) + std::abs(count_in_disk(zc, 1e30) - 12)), 0.0};
  }));
  v.push_back(trivial("t.winding", "z^N has N zeros in the unit disk", [] {
    CoeffVector c;
    c.xi.assign(9, 0.0);
    c.xi[8] = 1.0;
    return std::pair{static_cast<double>(std::abs(winding_count(c, 1.0).count - 8)), 0.0};
  }));
  v.push_back(trivial("t.atom", "unit circle atom: U(0) = 0, U(2) = log 2, Sigma = 0", [] {
    const RadialMeasure nu({{1.0, 1.0}}, {});
    return std::pair{std::abs(log_potential(nu, 0)) + std::abs(log_potential(nu, 2) - std::log(2.0)) +
                         std::abs(log_energy(nu)),
                     1e-15};
  }));
  v.push_back(trivial("t.batom", "B_1 of the unit circle atom is 0, attained at 0", [] {
    const RadialMeasure nu({{1.0, 1.0}}, {});
    const SupResult b = b_alpha_on(nu, 1.0, 3.0);
    return std::pair{std::abs(b.value) + b.argmax, 1e-12};
  }));
  v.push_back(trivial("t.Ieq", "I(mu_eq) = log(alpha)/2 - 3/4", [] {
    return std::pair{std::abs(functional_I(equilibrium(10), 10).I_alpha - (0.5 * std::log(10.0) - 0.75)), 1e-12};
  }));
  v.push_back(trivial("t.J", "J of the unit circle atom at alpha 1 is 1", [] {
    return std::pair{std::abs(functional_J(RadialMeasure({{1.0, 1.0}}, {}), 1.0) - 1.0), 1e-15};
  }));
  v.push_back(trivial("t.jensen", "Jensen for the unit circle atom at r = 2", [] {
    const Sides s = jensen_check(RadialMeasure({{1.0, 1.0}}, {}), 2.0);
    return std::pair{std::abs(s.lhs - std::log(2.0)) + std::abs(s.rhs - std::log(2.0)), 1e-15};
  }));
  v.push_back(trivial("t.dirichlet", "Dirichlet energy of the zero function is 0", [] {
    // compact support forces the only constant to be 0
    GriddedFunction g;
    g.n = 21;
    g.h = 0.1;
    g.half_width = 1.0;
    g.values.assign(441, 0.0);
    return std::pair{std::abs(dirichlet_energy(g)), 0.0};
  }));
  v.push_back(trivial("t.linstat", "gap bound with nu = mu is (0, 0)", [] {
    const RadialMeasure mu = catalog(0, 10);
    const Sides s = lin_stats_gap_bound(mu, mu, radial_bump(1.4, 0.2));
    return std::pair{std::abs(s.lhs) + std::abs(s.rhs), 1e-7};
  }));
  v.push_back(trivial("t.variational", "variational check with probe = candidate", [] {
    const RadialMeasure mu = catalog(0, 10);
    return std::pair{std::abs(variational_check(mu, {mu}, 10.0).max_violation), 1e-12};
  }));
  v.push_back(trivial("t.convexity", "convexity gap at the minimizer is (0, 0)", [] {
    const GapSides g = convexity_gap_check(catalog(0, 10), 0, 10, radial_bump(2.0, 0.3));
    return std::pair{std::abs(g.lhs) + std::abs(g.rhs), 1e-12};
  }));
  v.push_back(trivial("t.smoothed", "two points at distance 1", [] {
    const double t = 1e-3;
    return std::pair{std::abs(smoothed_energy(std::vector<cplx>{0.0, 1.0}, t) - 0.25 * 2 * std::log(t)), 1e-12};
  }));
  v.push_back(trivial("t.n1", "N = 1 joint density", [] {
    const auto ctx = JointDensityContext::make(1, 1.5);
    const cplx z{0.4, -0.3};
    const double want = 2.25 / (kPi * std::pow(1 + 2.25 * std::norm(z), 2));
    return std::pair{std::abs(std::exp(log_joint_density(std::vector<cplx>{z}, ctx)) - want), 1e-14};
  }));
  v.push_back(trivial("t.hole", "hole probability at r = 0.3 lies in (0, 1)", [] {
    RandomStream rng(3);
    const HoleEstimate h = hole_probability_mc(0.3, 2000, rng);
    return std::pair{h.estimate > 0 && h.estimate < 1 && h.stderr_ > 0 ? 0.0 : 1.0, 0.0};
  }));
  v.push_back(trivial("t.hist", "empty window gives zero counts", [] {
    std::vector<ZeroConfig> s(3);
    s[0].zeros = {cplx{0.5, 0}};
    const auto h = radial_histogram(s, uniform_edges(2.0, 3.0, 4));
    double tot = 0;
    for (double c : h.counts) tot += c;
    return std::pair{tot, 0.0};
  }));
  v.push_back(trivial("t.discrete", "single shell at radius 1 has I = 0 at alpha 1", [] {
    ShellGrid g = make_shell_grid(10.0, 40);
    std::fill(g.masses.begin(), g.masses.end(), 0.0);
    g.masses[g.unit_index] = 1.0;
    return std::pair{std::abs(discrete_I(g, 1.0, g.default_smoothing())), 1e-9};
  }));
  return v;
}

CheckResult run_check(const Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = c.run();
  } catch (const std::exception& e) {
    r = make(c.id, c.name, false, NAN, NAN, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string format_line(const CheckResult& r) {
  return fmt("%s  [%s] %s: %s (%.1fs)", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.name.c_str(), r.detail.c_str(),
             r.seconds);
}

}  // namespace gefhole::checks
