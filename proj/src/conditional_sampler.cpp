#include "gefhole/conditional_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gefhole/constants.hpp"
#include "gefhole/errors.hpp"

namespace gefhole {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_abs(cplx z) { return 0.5 * std::log(std::norm(z)); }

double logsumexp(const std::vector<double>& v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == kNegInf) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

// sum_{k != j} log |z_j - z_k| with z_j replaced by w
double pair_sum(const std::vector<cplx>& z, std::size_t j, cplx w) {
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k)
    if (k != j) s += log_abs(w - z[k]);
  return s;
}

double min_gap(const std::vector<cplx>& z) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < z.size(); ++j)
    for (std::size_t k = j + 1; k < z.size(); ++k) g = std::min(g, std::abs(z[j] - z[k]));
  return g;
}

// Draw |xi|^2 from Exp(1) restricted to [0, b^2], uniform phase.
cplx truncated_small(double b, RandomStream& rng) {
  const double u = rng.uniform();
  const double m2 = -std::log1p(u * std::expm1(-b * b));
  return std::polar(std::sqrt(std::max(0.0, m2)), 2.0 * kPi * rng.uniform());
}

// Draw |xi|^2 from Exp(1) restricted to [1, inf).
cplx truncated_large(RandomStream& rng) {
  const double u = rng.uniform();
  return std::polar(std::sqrt(1.0 - std::log1p(-u)), 2.0 * kPi * rng.uniform());
}

// 2 sup over a polar grid of (1/N) sum log|w - z_j| - |w|^2 / 2 alpha, refined by compass search.
std::pair<double, cplx> sup_potential(const std::vector<cplx>& z, double alpha, int radial, int angular) {
  const double N = static_cast<double>(z.size());
  auto h = [&](cplx w) {
    double s = 0.0;
    for (const auto& zj : z) s += log_abs(w - zj);
    return s / N - std::norm(w) / (2.0 * alpha);
  };
  double zmax = 0.0;
  for (const auto& zj : z) zmax = std::max(zmax, std::abs(zj));
  const double R = std::max(1.5 * std::sqrt(alpha), zmax + 1.0);
  std::vector<std::pair<double, cplx>> best;
  best.push_back({h(0.0), 0.0});
  for (int i = 1; i <= radial; ++i) {
    const double rad = R * i / radial;
    for (int a = 0; a < angular; ++a) {
      const cplx w = std::polar(rad, 2.0 * kPi * (a + 0.5 * (i % 2)) / angular);
      best.push_back({h(w), w});
    }
  }
  const std::size_t keep = std::min<std::size_t>(6, best.size());
  std::partial_sort(best.begin(), best.begin() + keep, best.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double top = best[0].first;
  cplx arg = best[0].second;
  const double step0 = R / radial;
  for (std::size_t c = 0; c < keep; ++c) {
    auto [v, w] = best[c];
    for (double step = step0; step > 1e-10; step *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (cplx d : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
          const double hv = h(w + step * d);
          if (hv > v) {
            v = hv;
            w += step * d;
            moved = true;
          }
        }
      }
    }
    if (v > top) {
      top = v;
      arg = w;
    }
  }
  return {2.0 * top, arg};
}

}  // namespace

JointDensityContext JointDensityContext::make(int N, double L) {
  if (N < 1 || !(L > 0)) throw ArgumentError("joint density: need N >= 1 and L > 0");
  JointDensityContext ctx;
  ctx.N = N;
  ctx.L = L;
  double s = 0.0;
  for (int j = 1; j <= N; ++j) s += std::lgamma(j + 1.0);
  ctx.log_A = s - N * std::log(kPi) - N * (N + 1.0) * std::log(L);
  ctx.moment_logs.resize(N + 1);
  for (int k = 0; k <= N; ++k) ctx.moment_logs[k] = std::lgamma(k + 1.0) - 2.0 * k * std::log(L);
  return ctx;
}

MonicCoeffs vieta(const std::vector<cplx>& zeros) {
  MonicCoeffs m;
  m.c.reserve(zeros.size() + 1);
  m.c.push_back(1.0);
  for (const auto& z : zeros) {
    m.c.push_back(0.0);
    for (std::size_t k = m.c.size() - 1; k > 0; --k) m.c[k] = m.c[k - 1] - z * m.c[k];
    m.c[0] = -z * m.c[0];
    double mx = 0.0;
    for (const auto& v : m.c) mx = std::max(mx, std::abs(v));
    if (mx > 0) {
      for (auto& v : m.c) v /= mx;
      m.log_scale += std::log(mx);
    }
  }
  return m;
}

double log_S(const std::vector<cplx>& zeros, const JointDensityContext& ctx) {
  if (static_cast<int>(zeros.size()) != ctx.N) throw ArgumentError("log_S: zero count differs from N");
  const auto m = vieta(zeros);
  std::vector<double> t(m.c.size());
  for (std::size_t k = 0; k < m.c.size(); ++k) {
    const double a = std::norm(m.c[k]);
    t[k] = a > 0 ? std::log(a) + ctx.moment_logs[k] : kNegInf;
  }
  return 2.0 * m.log_scale + logsumexp(t);
}

double log_A_sup(const std::vector<cplx>& zeros, const JointDensityContext& ctx, int radial, int angular) {
  const double L2 = ctx.L * ctx.L;
  // 2 N sup((1/N) log|q| - L^2 |w|^2 / 2N) is the same sup with alpha = N / L^2
  const auto [B, w] = sup_potential(zeros, ctx.N / L2, radial, angular);
  (void)w;
  return ctx.N * B;
}

double log_joint_density(const std::vector<cplx>& zeros, const JointDensityContext& ctx) {
  if (static_cast<int>(zeros.size()) != ctx.N) throw ArgumentError("log_joint_density: zero count differs from N");
  if (min_gap(zeros) <= 1e-12) throw CoincidentZeros("log_joint_density: zeros closer than 1e-12");
  double vdm = 0.0;
  for (std::size_t j = 0; j < zeros.size(); ++j)
    for (std::size_t k = j + 1; k < zeros.size(); ++k) vdm += 2.0 * log_abs(zeros[j] - zeros[k]);
  return ctx.log_A + vdm - (ctx.N + 1.0) * log_S(zeros, ctx);
}

double log_joint_density(const ZeroConfig& zc, const JointDensityContext& ctx) {
  return log_joint_density(zc.zeros, ctx);
}

std::vector<cplx> default_start(const JointDensityContext& ctx, double hole_radius) {
  const double rad = std::max(1.05 * hole_radius, 0.5 * std::sqrt(ctx.alpha()));
  std::vector<cplx> z(ctx.N);
  for (int j = 0; j < ctx.N; ++j) z[j] = std::polar(rad, 2.0 * kPi * j / ctx.N);
  return z;
}

ChainResult mh_hole_chain(const JointDensityContext& ctx, const ChainOptions& opt, RandomStream& rng) {
  if (!(opt.hole_radius >= 0)) throw ArgumentError("mh_hole_chain: hole_radius must be >= 0");
  if (opt.sweeps < 0 || opt.burn_in_sweeps < 0 || opt.thin < 1) throw ArgumentError("mh_hole_chain: bad sweep counts");
  std::vector<cplx> z = opt.start ? *opt.start : default_start(ctx, opt.hole_radius);
  if (static_cast<int>(z.size()) != ctx.N) throw InfeasibleStart("mh_hole_chain: start has the wrong size");
  for (const auto& zj : z)
    if (std::abs(zj) < opt.hole_radius) throw InfeasibleStart("mh_hole_chain: start has a zero inside the hole");
  if (min_gap(z) <= 1e-12) throw InfeasibleStart("mh_hole_chain: start has coincident zeros");

  ChainResult res;
  double sigma = opt.proposal_scale > 0 ? opt.proposal_scale : 0.5 / ctx.L;
  double lS = log_S(z, ctx);
  long win_prop = 0, win_acc = 0;
  const int total = opt.burn_in_sweeps + opt.sweeps;
  for (int sweep = 0; sweep < total; ++sweep) {
    const bool burn = sweep < opt.burn_in_sweeps;
    for (int j = 0; j < ctx.N; ++j) {
      const cplx w = z[j] + sigma * rng.complex_gaussian();
      const double u = rng.uniform();
      ++win_prop;
      if (!burn) ++res.proposals;
      if (std::abs(w) < opt.hole_radius) {
        if (!burn) ++res.hole_rejections;
        continue;
      }
      const double dv = 2.0 * (pair_sum(z, j, w) - pair_sum(z, j, z[j]));
      if (!std::isfinite(dv)) continue;
      const cplx old = z[j];
      z[j] = w;
      const double lS_new = log_S(z, ctx);
      const double delta = dv - (ctx.N + 1.0) * (lS_new - lS);
      if (std::log(u) < delta) {
        lS = lS_new;
        ++win_acc;
        if (!burn) ++res.accepted;
      } else {
        z[j] = old;
      }
    }
    if (burn && opt.auto_tune && (sweep + 1) % 20 == 0) {
      const double rate = static_cast<double>(win_acc) / win_prop;
      if (rate < 0.25) sigma *= 0.8;
      else if (rate > 0.40) sigma *= 1.25;
      win_prop = win_acc = 0;
    }
    if (!burn && (sweep - opt.burn_in_sweeps + 1) % opt.thin == 0) {
      ZeroConfig zc;
      zc.zeros = z;
      zc.scale = ctx.L;
      zc.plane = Plane::scaled;
      zc.smoothing_t = opt.smoothing_t;
      if (opt.record_I) res.I_trace.push_back(functional_I_discrete(z, ctx.alpha(), opt.smoothing_t, 48, 64).I_t);
      res.samples.push_back(std::move(zc));
    }
  }
  res.proposal_scale = sigma;
  res.acceptance_rate = res.proposals ? static_cast<double>(res.accepted) / res.proposals : 0.0;
  return res;
}

double circle_interaction(cplx a, cplx b, double t) {
  const double d = std::abs(a - b);
  if (d >= 2.0 * t) return std::log(d);
  constexpr int Q = 64;
  double s = 0.0;
  for (int i = 0; i < Q; ++i) {
    const cplx u = a + std::polar(t, 2.0 * kPi * (i + 0.5) / Q);
    s += std::log(std::max(std::abs(u - b), t));
  }
  return s / Q;
}

double smoothed_energy(const std::vector<cplx>& zeros, double t) {
  if (!(t > 0)) throw ArgumentError("smoothed_energy: t must be > 0");
  const double N = static_cast<double>(zeros.size());
  if (N == 0) throw ArgumentError("smoothed_energy: empty configuration");
  double s = 0.0;
  for (std::size_t j = 0; j < zeros.size(); ++j)
    for (std::size_t k = j + 1; k < zeros.size(); ++k) s += 2.0 * circle_interaction(zeros[j], zeros[k], t);
  return (s + N * std::log(t)) / (N * N);
}

double smoothed_energy(const ZeroConfig& zc) { return smoothed_energy(zc.zeros, zc.smoothing_t); }

DiscreteFunctional functional_I_discrete(const std::vector<cplx>& zeros, double alpha, double t, int radial,
                                         int angular) {
  if (!(alpha > 0)) throw ArgumentError("functional_I_discrete: alpha must be > 0");
  DiscreteFunctional out;
  const auto [B, w] = sup_potential(zeros, alpha, radial, angular);
  out.B = B;
  out.argmax_abs = std::abs(w);
  out.energy_t = smoothed_energy(zeros, t);
  out.I_t = B - out.energy_t;
  const double N = static_cast<double>(zeros.size());
  double pairs = 0.0;
  for (std::size_t j = 0; j < zeros.size(); ++j)
    for (std::size_t k = j + 1; k < zeros.size(); ++k) pairs += 2.0 * log_abs(zeros[j] - zeros[k]);
  out.I_star = B - pairs / (N * N);
  return out;
}

DiscreteFunctional functional_I_discrete(const ZeroConfig& zc, double alpha) {
  return functional_I_discrete(zc.zeros, alpha, zc.smoothing_t);
}

EventLayout rare_event_layout(double r, double p, double C1) {
  if (!(r >= 3)) throw ArgumentError("construct_rare_event: r must be >= 3");
  if (!(p >= 0) || p == 1.0) throw ArgumentError("construct_rare_event: need p >= 0, p != 1");
  EventLayout lay;
  lay.C1 = C1;
  lay.k0 = main_index(p, r);
  const double r2 = r * r;
  const double a = p <= 11 ? 16.0 : 5.0 + p;
  lay.N = static_cast<int>(std::floor(a * r2)) + 1;
  const bool small_p = p < std::numbers::e;
  double lo, hi;
  if (!small_p) {
    lo = 0.0;
    hi = p;
  } else {
    const double q = q_of_p(p);
    lo = std::min(p, q);
    hi = std::max(p, q);
  }
  const int total = 4 * lay.N;
  lay.part.resize(total + 1);
  lay.bound.assign(total + 1, 0.0);
  const double lb0 = log_b(lay.k0, r);
  for (int k = 0; k <= total; ++k) {
    const double x = k / r2;
    if (k == lay.k0) {
      lay.part[k] = EventPart::main_index;
    } else if (k <= lay.N && x >= lo - 1e-12 && x <= hi + 1e-12) {
      lay.part[k] = EventPart::main_terms;
      const double logA = lb0 - log_b(k, r);
      const double denom = small_p ? 6.0 * r2 : 4.0 * p * r2;
      lay.bound[k] = std::exp(logA - std::log(denom) - 2.0 * C1 * std::log(k + 1.0));
    } else if (k <= lay.N) {
      lay.part[k] = EventPart::close_tail;
      const double denom = small_p ? 70.0 * r2 : 24.0 * r2;
      lay.bound[k] = 1.0 / (denom * std::pow(k + 1.0, C1));
    } else {
      lay.part[k] = EventPart::far_tail;
    }
  }
  return lay;
}

RareEventSample construct_rare_event(double r, double p, RandomStream& rng, double C1) {
  const EventLayout lay = rare_event_layout(r, p, C1);
  RareEventSample s;
  s.k0 = lay.k0;
  s.r = r;
  s.p = p;
  s.N = lay.N;
  s.coeffs.scale = 1.0;
  s.coeffs.xi.resize(lay.part.size());
  for (std::size_t k = 0; k < lay.part.size(); ++k) {
    switch (lay.part[k]) {
      case EventPart::main_index: s.coeffs.xi[k] = truncated_large(rng); break;
      case EventPart::main_terms:
      case EventPart::close_tail: s.coeffs.xi[k] = truncated_small(lay.bound[k], rng); break;
      case EventPart::far_tail: s.coeffs.xi[k] = rng.complex_gaussian(); break;
    }
  }
  auto& cert = s.certificate;
  cert.log_main = std::log(std::abs(s.coeffs.xi[lay.k0])) + log_b(lay.k0, r);
  double ratio = 0.0;
  for (std::size_t k = 0; k < lay.part.size(); ++k) {
    if (static_cast<int>(k) == lay.k0) continue;
    const double m = std::abs(s.coeffs.xi[k]);
    if (m > 0) ratio += std::exp(std::log(m) + log_b(static_cast<int>(k), r) - cert.log_main);
  }
  cert.rouche_margin = std::exp(cert.log_main) * (1.0 - ratio);
  cert.holds = ratio < 1.0;
  return s;
}

const ZeroConfig& RareEventSample::zeros() const {
  if (!zeros_) zeros_ = roots(coeffs);
  return *zeros_;
}

int RareEventSample::zero_count() const {
  try {
    return winding_count(coeffs, r, 256).count;
  } catch (const NearCircleRoot&) {
    return count_in_disk(zeros(), r);
  }
}

HoleEstimate hole_probability_mc(double r, long samples, RandomStream& rng) {
  if (!(r > 0) || samples < 1) throw ArgumentError("hole_probability_mc: need r > 0 and samples >= 1");
  HoleEstimate est;
  est.N = static_cast<int>(std::ceil(4.0 * r * r + 40.0));
  est.samples = samples;
  std::vector<double> lb(est.N + 1);
  for (int k = 0; k <= est.N; ++k) lb[k] = std::exp(log_b(k, r));
  for (long i = 0; i < samples; ++i) {
    RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
    const CoeffVector c = sample_coeffs(est.N, sub);
    // Rouche: a dominant constant term already certifies the hole
    double rest = 0.0;
    for (int k = 1; k <= est.N; ++k) rest += std::abs(c.xi[k]) * lb[k];
    int n;
    if (std::abs(c.xi[0]) > rest) {
      n = 0;
    } else {
      try {
        n = winding_count(c, r, 32).count;
      } catch (const NumericalError&) {
        ++est.fallbacks;
        n = count_in_disk(roots(c), r);
      }
    }
    if (n == 0) ++est.hits;
  }
  const double ph = static_cast<double>(est.hits) / samples;
  est.estimate = ph;
  est.stderr_ = std::sqrt(ph * (1.0 - ph) / samples);
  return est;
}

std::vector<double> uniform_edges(double lo, double hi, int bins) {
  if (bins < 1 || !(hi > lo)) throw ArgumentError("uniform_edges: need bins >= 1 and hi > lo");
  std::vector<double> e(bins + 1);
  for (int i = 0; i <= bins; ++i) e[i] = lo + (hi - lo) * i / bins;
  return e;
}

int RadialHistogram::bin_of(double x) const {
  if (edges.size() < 2 || x < edges.front() || x >= edges.back()) return -1;
  return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin()) - 1;
}

double RadialHistogram::window_mean(double lo, double hi) const {
  if (samples == 0) return 0.0;
  double s = 0.0;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b)
    if (edges[b] >= lo - 1e-12 && edges[b + 1] <= hi + 1e-12) s += counts[b];
  return s / samples;
}

namespace {

void finalize(RadialHistogram& h, const std::vector<double>& sumsq) {
  const std::size_t nb = h.counts.size();
  h.density.assign(nb, 0.0);
  h.stderr_.assign(nb, 0.0);
  if (h.samples == 0) return;
  const double n = static_cast<double>(h.samples);
  for (std::size_t b = 0; b < nb; ++b) {
    const double area =
        h.normalization == Normalization::per_area ? kPi * (h.edges[b + 1] * h.edges[b + 1] - h.edges[b] * h.edges[b]) : 1.0;
    const double mean = h.counts[b] / n;
    const double var = n > 1 ? std::max(0.0, (sumsq[b] - n * mean * mean) / (n - 1)) : 0.0;
    h.density[b] = mean / area;
    h.stderr_[b] = std::sqrt(var / n) / area;
  }
}

}  // namespace

RadialHistogram radial_histogram(const std::vector<ZeroConfig>& samples, const std::vector<double>& edges, double scale,
                                 Normalization norm) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) throw ArgumentError("radial_histogram: bad edges");
  if (!(scale > 0)) throw ArgumentError("radial_histogram: scale must be > 0");
  RadialHistogram h;
  h.edges = edges;
  h.scale = scale;
  h.normalization = norm;
  h.counts.assign(edges.size() - 1, 0.0);
  std::vector<double> sumsq(h.counts.size(), 0.0), one(h.counts.size());
  for (const auto& zc : samples) {
    std::fill(one.begin(), one.end(), 0.0);
    for (const auto& z : zc.zeros) {
      const int b = h.bin_of(std::abs(z) / scale);
      if (b >= 0) one[b] += 1.0;
    }
    for (std::size_t b = 0; b < one.size(); ++b) {
      h.counts[b] += one[b];
      sumsq[b] += one[b] * one[b];
    }
    ++h.samples;
  }
  h.sum_squares = sumsq;
  finalize(h, sumsq);
  return h;
}

void RadialHistogram::merge(const RadialHistogram& other) {
  if (other.edges != edges) throw ArgumentError("radial_histogram: merging different binnings");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    counts[i] += other.counts[i];
    sum_squares[i] += other.sum_squares[i];
  }
  samples += other.samples;
  finalize(*this, sum_squares);
}

}  // namespace gefhole
