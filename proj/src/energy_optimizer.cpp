#include "gefhole/energy_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gefhole/constants.hpp"
#include "gefhole/errors.hpp"
#include "gefhole/rng.hpp"

namespace gefhole {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shell problem in cumulative coordinates F_k = mass on shells 0..k, k < M, F_M = 1.
// With rr_0 = t and d_k = log(rr_{k+1} / rr_k):
//   Sigma = log rr_M - sum_k d_k F_k^2
//   U(s)  = log rr_M - sum_{j > k} d_j F_j - F_k log(rr_{k+1} / s),  s in [rr_k, rr_{k+1}]
// so the energy is diagonal and every probe of U is linear in F.
struct Probe {
  int k;        // segment; k == M means beyond the last shell
  double lg;    // coefficient of F_k
  double c;     // constant part including -s^2 / 2 alpha
  double s;
};

struct Problem {
  int M = 0;
  double alpha = 0.0;
  std::vector<double> rr;  // M + 1 radii, rr_0 = t
  std::vector<double> d;   // M weights
  std::vector<double> lo, hi;
  double log_rM = 0.0;

  Problem(const ShellGrid& g, double t) : M(static_cast<int>(g.size()) - 1), alpha(g.alpha), rr(g.radii) {
    rr[0] = t;
    d.resize(M);
    for (int k = 0; k < M; ++k) d[k] = std::log(rr[k + 1] / rr[k]);
    log_rM = std::log(rr[M]);
    lo.assign(M, 0.0);
    hi.assign(M, 1.0);
    const double c = g.constraint.p / alpha;
    if (g.constraint.kind == ConstraintKind::at_most_inside)
      for (int k = 0; k < g.unit_index && k < M; ++k) hi[k] = c;
    if (g.constraint.kind == ConstraintKind::at_least_within)
      for (int k = g.unit_index; k < M; ++k) lo[k] = c;
  }

  std::vector<double> cumulative(const std::vector<double>& m) const {
    std::vector<double> F(M);
    double acc = 0.0;
    for (int k = 0; k < M; ++k) F[k] = acc += m[k];
    return F;
  }

  std::vector<double> masses(const std::vector<double>& F) const {
    std::vector<double> m(M + 1);
    double prev = 0.0;
    for (int k = 0; k < M; ++k) {
      m[k] = std::max(0.0, F[k] - prev);
      prev = F[k];
    }
    m[M] = std::max(0.0, 1.0 - prev);
    return m;
  }

  double quad(const std::vector<double>& F) const {
    double q = 0.0;
    for (int k = 0; k < M; ++k) q += d[k] * F[k] * F[k];
    return q;
  }

  Probe probe_at(double s) const {
    const double w = s * s / (2.0 * alpha);
    if (s >= rr[M]) return {M, 0.0, std::log(s) - w, s};
    const double se = std::max(s, rr[0]);
    int k = static_cast<int>(std::upper_bound(rr.begin(), rr.end(), se) - rr.begin()) - 1;
    k = std::clamp(k, 0, M - 1);
    return {k, std::log(rr[k + 1] / se), log_rM - w, s};
  }

  // suffix[k] = sum_{j >= k} d_j F_j, suffix[M] = 0
  std::vector<double> suffix(const std::vector<double>& F) const {
    std::vector<double> S(M + 1, 0.0);
    for (int k = M - 1; k >= 0; --k) S[k] = S[k + 1] + d[k] * F[k];
    return S;
  }

  double h(const Probe& p, const std::vector<double>& F, const std::vector<double>& S) const {
    if (p.k >= M) return p.c;
    return p.c - S[p.k + 1] - p.lg * F[p.k];
  }

  // Exact sup of U - s^2 / 2 alpha over [0, sqrt(alpha)].
  std::pair<double, Probe> sup(const std::vector<double>& F) const {
    const auto S = suffix(F);
    const double smax = std::sqrt(alpha);
    std::vector<Probe> cand;
    cand.push_back({0, std::log(rr[1] / rr[0]), log_rM, 0.0});
    for (int k = 1; k <= M && rr[k] <= smax; ++k) cand.push_back(probe_at(rr[k]));
    for (int k = 0; k < M; ++k) {
      const double s = std::sqrt(alpha * F[k]);
      if (s > rr[k] && s < rr[k + 1] && s <= smax) cand.push_back(probe_at(s));
    }
    if (smax > rr[M]) cand.push_back(probe_at(smax));
    std::sort(cand.begin(), cand.end(), [](const Probe& a, const Probe& b) { return a.s < b.s; });
    double best = -kInf;
    for (const auto& p : cand) best = std::max(best, h(p, F, S));
    const double tol = 1e-12 * std::max(1.0, std::abs(best));
    for (const auto& p : cand)
      if (h(p, F, S) >= best - tol) return {best, p};
    return {best, cand.back()};
  }

  double exact_I(const std::vector<double>& F, double* argmax = nullptr) const {
    const auto [best, p] = sup(F);
    if (argmax) *argmax = p.s;
    return 2.0 * best - log_rM + quad(F);
  }

  void add_probe_gradient(std::vector<double>& g, const Probe& p, double w) const {
    // caller accumulates the "d_j for j > k" part via prefix weights
    if (p.k < M) g[p.k] -= w * p.lg;
  }

  // Weighted isotonic regression with per-index bounds; block values are clamped means.
  std::vector<double> project(const std::vector<double>& y) const {
    struct Block {
      double swy, sw, lo, hi, v;
      int n;
    };
    std::vector<Block> st;
    st.reserve(M);
    for (int k = 0; k < M; ++k) {
      Block b{d[k] * y[k], d[k], lo[k], hi[k], 0.0, 1};
      b.v = std::clamp(b.swy / b.sw, b.lo, b.hi);
      st.push_back(b);
      while (st.size() > 1 && st[st.size() - 2].v > st.back().v) {
        Block top = st.back();
        st.pop_back();
        Block& a = st.back();
        a.swy += top.swy;
        a.sw += top.sw;
        a.lo = std::max(a.lo, top.lo);
        a.hi = std::min(a.hi, top.hi);
        a.n += top.n;
        a.v = std::clamp(a.swy / a.sw, a.lo, a.hi);
      }
    }
    std::vector<double> out;
    out.reserve(M);
    for (const auto& b : st) out.insert(out.end(), b.n, b.v);
    return out;
  }

  // Linear minimization over the feasible set: thresholds split at the constraint level.
  std::vector<double> lmo(const std::vector<double>& g) const {
    std::vector<double> levels{0.0};
    for (int k = 0; k < M; ++k) {
      if (lo[k] > 0 && lo[k] < 1) levels.push_back(lo[k]);
      if (hi[k] > 0 && hi[k] < 1) levels.push_back(hi[k]);
    }
    levels.push_back(1.0);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<double> suf(M + 1, 0.0);
    for (int k = M - 1; k >= 0; --k) suf[k] = suf[k + 1] + g[k];
    std::vector<double> F(M, 0.0);
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      const double th = 0.5 * (levels[i] + levels[i + 1]);
      // suffix {k >= j}: must contain every k with lo_k > th and no k with hi_k < th
      int jmin = 0, jmax = M;
      for (int k = 0; k < M; ++k) {
        if (hi[k] < th) jmin = std::max(jmin, k + 1);
        if (lo[k] > th) jmax = std::min(jmax, k);
      }
      int best = jmax;
      for (int j = jmin; j <= jmax; ++j)
        if (suf[j] < suf[best]) best = j;
      for (int k = best; k < M; ++k) F[k] += levels[i + 1] - levels[i];
    }
    return F;
  }
};

struct Smoothed {
  const Problem& P;
  std::vector<Probe> probes;
  double tau = 1e-2;

  explicit Smoothed(const Problem& p) : P(p) {
    const double smax = std::sqrt(P.alpha);
    probes.push_back({0, std::log(P.rr[1] / P.rr[0]), P.log_rM, 0.0});
    for (int k = 0; k < P.M; ++k)
      for (int j = (k == 0 ? 1 : 0); j < 4; ++j) {
        const double s = P.rr[k] + (P.rr[k + 1] - P.rr[k]) * j / 4.0;
        if (s <= smax) probes.push_back(P.probe_at(s));
      }
    if (P.rr[P.M] <= smax) probes.push_back(P.probe_at(P.rr[P.M]));
    if (smax > P.rr[P.M]) probes.push_back(P.probe_at(smax));
  }

  double bias() const { return 2.0 * tau * std::log(static_cast<double>(probes.size())); }

  // f = sum d F^2 + 2 tau logsumexp(h / tau); returns f and fills grad when given.
  double eval(const std::vector<double>& F, std::vector<double>* grad) const {
    const auto S = P.suffix(F);
    std::vector<double> z(probes.size());
    double mx = -kInf;
    for (std::size_t q = 0; q < probes.size(); ++q) {
      z[q] = P.h(probes[q], F, S) / tau;
      mx = std::max(mx, z[q]);
    }
    double sum = 0.0;
    for (auto& v : z) sum += v = std::exp(v - mx);
    const double f = P.quad(F) + 2.0 * tau * (mx + std::log(sum));
    if (grad) {
      auto& g = *grad;
      g.assign(P.M, 0.0);
      std::vector<double> wk(P.M + 1, 0.0);
      for (std::size_t q = 0; q < probes.size(); ++q) {
        const double w = z[q] / sum;
        wk[std::min(probes[q].k, P.M)] += w;
        P.add_probe_gradient(g, probes[q], 2.0 * w);
      }
      double before = 0.0;
      for (int k = 0; k < P.M; ++k) {
        g[k] += 2.0 * P.d[k] * F[k] - 2.0 * P.d[k] * before;
        before += wk[k];
      }
    }
    return f;
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

ShellGrid with_cumulative(const ShellGrid& base, const Problem& P, const std::vector<double>& F) {
  ShellGrid g = base;
  g.masses = P.masses(F);
  return g;
}

}  // namespace

Constraint Constraint::for_p(double p) {
  if (!(p >= 0)) throw ArgumentError("constraint: p must be >= 0");
  if (p < 1.0) return {ConstraintKind::at_most_inside, p};
  if (p > 1.0) return {ConstraintKind::at_least_within, p};
  return none();
}

std::string Constraint::label() const {
  std::ostringstream os;
  switch (kind) {
    case ConstraintKind::none: return "none";
    case ConstraintKind::at_most_inside: os << "F_" << p; break;
    case ConstraintKind::at_least_within: os << "M_" << p; break;
  }
  return os.str();
}

double ShellGrid::total_mass() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

double ShellGrid::mass_inside_unit() const {
  double s = 0.0;
  for (int i = 0; i < unit_index; ++i) s += masses[i];
  return s;
}

double ShellGrid::mass_within_unit() const { return mass_inside_unit() + masses[unit_index]; }

double ShellGrid::infeasibility() const {
  double v = std::abs(total_mass() - 1.0);
  for (double m : masses) v = std::max(v, -m);
  const double c = constraint.p / alpha;
  if (constraint.kind == ConstraintKind::at_most_inside) v = std::max(v, mass_inside_unit() - c);
  if (constraint.kind == ConstraintKind::at_least_within) v = std::max(v, c - mass_within_unit());
  return std::max(v, 0.0);
}

double ShellGrid::default_smoothing() const {
  double gap = kInf;
  for (std::size_t i = 1; i < radii.size(); ++i) gap = std::min(gap, radii[i] - radii[i - 1]);
  return 0.5 * gap;
}

RadialMeasure ShellGrid::to_measure(double t) const {
  std::vector<CircleAtom> atoms;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (masses[i] > 0) atoms.push_back({i == 0 ? t : radii[i], masses[i]});
  return RadialMeasure(std::move(atoms), {});
}

ShellGrid make_shell_grid(double alpha, int shells, Constraint c, double r_max) {
  if (!(alpha > std::numbers::e)) throw ArgumentError("shell grid: alpha must exceed e");
  if (r_max <= 0) r_max = std::sqrt(alpha);
  if (!(r_max > 1.0) || r_max > std::sqrt(alpha) * (1 + 1e-12))
    throw ArgumentError("shell grid: need 1 < r_max <= sqrt(alpha)");
  if (shells < 4) throw ArgumentError("shell grid: need at least 4 shells");
  if (c.kind != ConstraintKind::none && !(c.p < alpha)) throw ArgumentError("shell grid: need p < alpha");
  const int n1 = std::clamp(static_cast<int>(std::lround(shells / r_max)), 1, shells - 1);
  const int n2 = shells - n1;
  ShellGrid g;
  g.alpha = alpha;
  g.constraint = c;
  g.unit_index = n1;
  g.radii.resize(shells + 1);
  for (int i = 0; i <= n1; ++i) g.radii[i] = static_cast<double>(i) / n1;
  for (int i = 1; i <= n2; ++i) g.radii[n1 + i] = 1.0 + (r_max - 1.0) * i / n2;
  g.radii[n1] = 1.0;
  g.radii[shells] = r_max;

  Problem P(g, g.default_smoothing());
  std::vector<double> F(shells);
  for (int k = 0; k < shells; ++k) {
    const double mid = 0.5 * (g.radii[k] + g.radii[k + 1]);
    F[k] = std::min(1.0, mid * mid / (r_max * r_max));
  }
  g.masses = P.masses(P.project(F));
  return g;
}

DiscreteEval discrete_eval(const ShellGrid& g, double alpha, double smoothing_t) {
  if (!(smoothing_t > 0) || smoothing_t >= g.radii.at(1)) throw ArgumentError("discrete_I: need 0 < t < r_1");
  ShellGrid h = g;
  h.alpha = alpha;
  Problem P(h, smoothing_t);
  const auto F = P.cumulative(g.masses);
  DiscreteEval e{};
  e.energy = P.log_rM - P.quad(F);
  const auto [best, probe] = P.sup(F);
  e.B = 2.0 * best;
  e.argmax = probe.s;
  e.I = e.B - e.energy;
  return e;
}

double discrete_I(const ShellGrid& g, double alpha, double smoothing_t) {
  return discrete_eval(g, alpha, smoothing_t).I;
}

MinimizeResult minimize(double alpha, Constraint c, GridSpec spec, Budget budget) {
  ShellGrid grid = make_shell_grid(alpha, spec.shells, c, spec.r_max);
  const double t = grid.default_smoothing();
  Problem P(grid, t);
  std::vector<double> x = P.project(P.cumulative(grid.masses));

  MinimizeResult res;
  std::vector<double> best_F = x;
  double best_I = P.exact_I(x);
  int iter = 0;
  auto record = [&](const std::vector<double>& F, bool force) {
    if (!force && iter % budget.trace_every != 0) return;
    double arg = 0.0;
    const double I = P.exact_I(F, &arg);
    if (I < best_I) {
      best_I = I;
      best_F = F;
    }
    ShellGrid tmp = with_cumulative(grid, P, F);
    res.trace.push_back({iter, I, best_I, tmp.infeasibility(), arg});
  };
  record(x, true);

  Smoothed sm(P);
  std::vector<double> g, gy;
  if (budget.algorithm == Algorithm::subgradient) {
    while (iter < budget.max_iterations) {
      const auto [val, probe] = P.sup(x);
      (void)val;
      g.assign(P.M, 0.0);
      for (int k = 0; k < P.M; ++k) {
        g[k] = 2.0 * P.d[k] * x[k];
        if (k > probe.k) g[k] -= 2.0 * P.d[k];
      }
      if (probe.k < P.M) g[probe.k] -= 2.0 * probe.lg;
      const double step = budget.step_scale / std::sqrt(iter + 1.0);
      std::vector<double> y(P.M);
      for (int k = 0; k < P.M; ++k) y[k] = x[k] - step * g[k] / P.d[k];
      x = P.project(y);
      ++iter;
      record(x, false);
    }
    res.budget_exhausted = true;
    sm.tau = 0.0;
  } else {
    sm.tau = budget.tau_start;
    bool exhausted = false;
    while (true) {
      std::vector<double> xk = best_F, y = best_F;
      double tk = 1.0, eta = 0.5, fprev = kInf;
      for (int it = 0; it < budget.iterations_per_stage; ++it) {
        if (iter >= budget.max_iterations) {
          exhausted = true;
          break;
        }
        const double fy = sm.eval(y, &gy);
        std::vector<double> xn, diff(P.M), z(P.M);
        double fn = 0.0;
        for (int tries = 0; tries < 60; ++tries) {
          for (int k = 0; k < P.M; ++k) z[k] = y[k] - eta * gy[k] / P.d[k];
          xn = P.project(z);
          fn = sm.eval(xn, nullptr);
          double lin = 0.0, q = 0.0;
          for (int k = 0; k < P.M; ++k) {
            diff[k] = xn[k] - y[k];
            lin += gy[k] * diff[k];
            q += P.d[k] * diff[k] * diff[k];
          }
          if (fn <= fy + lin + q / (2.0 * eta) + 1e-14 * std::abs(fy)) break;
          eta *= 0.5;
        }
        ++iter;
        if (fn > fprev) {  // restart momentum
          tk = 1.0;
          y = xk;
          continue;
        }
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        for (int k = 0; k < P.M; ++k) y[k] = xn[k] + (tk - 1.0) / tn * (xn[k] - xk[k]);
        xk = std::move(xn);
        tk = tn;
        fprev = fn;
        eta *= 1.25;
        record(xk, false);
        if (it % 200 == 199) {
          sm.eval(xk, &g);
          const auto s = P.lmo(g);
          std::vector<double> dlt(P.M);
          for (int k = 0; k < P.M; ++k) dlt[k] = xk[k] - s[k];
          if (dot(g, dlt) < 1e-3 * sm.tau) break;
        }
      }
      record(xk, true);
      if (exhausted || sm.tau <= budget.tau_end * 1.000001) {
        res.budget_exhausted = exhausted;
        break;
      }
      sm.tau = std::max(budget.tau_end, sm.tau * 0.1);
    }
  }

  // Frank-Wolfe gap of the smoothed problem at the best point plus the smoothing bias.
  if (sm.tau > 0) {
    sm.eval(best_F, &g);
    const auto s = P.lmo(g);
    std::vector<double> dlt(P.M);
    for (int k = 0; k < P.M; ++k) dlt[k] = best_F[k] - s[k];
    res.gap_estimate = std::max(0.0, dot(g, dlt)) + sm.bias();
  } else {
    res.gap_estimate = kInf;
  }
  res.grid = with_cumulative(grid, P, best_F);
  res.I = best_I;
  res.iterations = iter;
  return res;
}

VariationalReport variational_check(const RadialMeasure& mu, const std::vector<RadialMeasure>& probes, double alpha) {
  VariationalReport rep;
  rep.max_violation = -kInf;
  const double base = mutual_energy(mu, mu) - 0.5 * b_alpha(mu, alpha).value;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double v = mutual_energy(probes[i], mu) - 0.5 * b_alpha(probes[i], alpha).value - base;
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.worst_probe = static_cast<int>(i);
    }
  }
  if (probes.empty()) rep.max_violation = 0.0;
  return rep;
}

VariationalReport variational_check(const ShellGrid& candidate, const std::vector<ShellGrid>& probes, double alpha) {
  std::vector<RadialMeasure> ps;
  ps.reserve(probes.size());
  for (const auto& p : probes) ps.push_back(p.to_measure(p.default_smoothing()));
  return variational_check(candidate.to_measure(candidate.default_smoothing()), ps, alpha);
}

GapSides convexity_gap_check(const RadialMeasure& nu, double p, double alpha, const TestFunction& phi, double grid_h) {
  const RadialMeasure mu = catalog(p, alpha);
  GapSides out{};
  out.lhs = functional_I(nu, alpha).I_alpha - functional_I(mu, alpha).I_alpha;
  out.x = std::abs(integrate(nu, phi) - integrate(mu, phi));
  const double D = dirichlet_energy(sample_on_grid(phi, grid_h));
  out.rhs = 2.0 * std::numbers::pi * out.x * out.x / D;
  return out;
}

ShellGrid random_feasible_grid(double alpha, int shells, Constraint c, std::uint64_t seed) {
  ShellGrid g = make_shell_grid(alpha, shells, c);
  Problem P(g, g.default_smoothing());
  RandomStream rng(seed, 0x5eed);
  // random nondecreasing F in the box; a few random atoms keep the sweep varied
  std::vector<double> m(P.M + 1);
  const int style = static_cast<int>(rng.next_u64() % 3);
  for (auto& v : m) {
    const double u = rng.uniform();
    v = style == 0 ? u : style == 1 ? std::pow(u, 8.0) : (u < 0.02 ? 1.0 : 1e-3 * u);
  }
  double tot = 0.0;
  for (double v : m) tot += v;
  for (auto& v : m) v /= tot;
  std::vector<double> F = P.cumulative(m);
  for (int k = 0; k < P.M; ++k) F[k] = std::clamp(F[k], P.lo[k], P.hi[k]);
  for (int k = 1; k < P.M; ++k) F[k] = std::max(F[k], F[k - 1]);
  g.masses = P.masses(F);
  return g;
}

}  // namespace gefhole
