#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "gefhole/rng.hpp"
#include "gefhole/rootfinder.hpp"
#include "gefhole/series.hpp"

namespace gefhole {

using cplx = std::complex<double>;

/// Density of the N zeros of P_{N,L} (scaled plane) in uniform random order.
struct JointDensityContext {
  int N = 0;
  double L = 1.0;
  double log_A = 0.0;                // sum_j log j! - N log pi - N(N+1) log L
  std::vector<double> moment_logs;   // log(k! / L^{2k}), k = 0..N

  static JointDensityContext make(int N, double L);
  double alpha() const { return N / (L * L); }
};

/// Monic coefficients of prod (w - z_j) as exp(log_scale) * c.
struct MonicCoeffs {
  std::vector<cplx> c;
  double log_scale = 0.0;
};

MonicCoeffs vieta(const std::vector<cplx>& zeros);

/// log S = log \int |q_z|^2 dmu_L = log sum |c_k|^2 k! / L^{2k}.
double log_S(const std::vector<cplx>& zeros, const JointDensityContext& ctx);

/// log sup_w |q_z(w)|^2 exp(-L^2 |w|^2) over a polar probe grid.
double log_A_sup(const std::vector<cplx>& zeros, const JointDensityContext& ctx, int radial = 200,
                 int angular = 256);

double log_joint_density(const std::vector<cplx>& zeros, const JointDensityContext& ctx);
double log_joint_density(const ZeroConfig& zc, const JointDensityContext& ctx);

struct ChainOptions {
  double hole_radius = 0.0;
  int sweeps = 1000;          // after burn-in
  int burn_in_sweeps = 500;
  int thin = 1;               // sweeps between kept samples
  double proposal_scale = 0;  // 0: start from 0.5 / L
  bool auto_tune = true;      // toward 25-40% acceptance during burn-in, then frozen
  std::optional<std::vector<cplx>> start;
  bool record_I = false;
  double smoothing_t = 1e-3;
};

struct ChainResult {
  std::vector<ZeroConfig> samples;
  std::vector<double> I_trace;  // I_alpha of the smoothed empirical measure per kept sample
  double acceptance_rate = 0.0;  // after burn-in
  double proposal_scale = 0.0;
  long proposals = 0;
  long accepted = 0;
  long hole_rejections = 0;
};

/// Default start: equally spaced on the circle of radius max(1.05 hole, sqrt(alpha) / 2).
std::vector<cplx> default_start(const JointDensityContext& ctx, double hole_radius);

ChainResult mh_hole_chain(const JointDensityContext& ctx, const ChainOptions& opt, RandomStream& rng);

/// Interaction of two circles of radius t centred at a and b.
double circle_interaction(cplx a, cplx b, double t);

/// Sigma(mu_z^t) = (1/N^2) [ sum_{j != k} K_t(z_j, z_k) + N log t ].
double smoothed_energy(const std::vector<cplx>& zeros, double t);
double smoothed_energy(const ZeroConfig& zc);

struct DiscreteFunctional {
  double B = 0.0;          // 2 sup (U_{mu_z}(w) - |w|^2 / 2 alpha)
  double argmax_abs = 0.0;
  double energy_t = 0.0;   // Sigma(mu_z^t)
  double I_t = 0.0;        // B - Sigma(mu_z^t)
  double I_star = 0.0;     // B - (1/N^2) sum_{j != k} log |z_j - z_k|
};

DiscreteFunctional functional_I_discrete(const std::vector<cplx>& zeros, double alpha, double t,
                                         int radial = 96, int angular = 128);
DiscreteFunctional functional_I_discrete(const ZeroConfig& zc, double alpha);

struct Certificate {
  double rouche_margin = 0.0;  // |xi_k0| b_k0 - sum_{k != k0} |xi_k| b_k
  double log_main = 0.0;       // log |xi_k0| b_k0
  bool holds = false;
};

struct RareEventSample {
  CoeffVector coeffs;  // GEF coefficients, scale 1
  int k0 = 0;
  double r = 0.0;
  double p = 0.0;
  int N = 0;           // end of the close tail; coefficients run to 4N
  Certificate certificate;

  /// Zeros of the truncated series; computed on first use.
  const ZeroConfig& zeros() const;
  /// Exact zero count in |z| < r by the argument principle.
  int zero_count() const;

 private:
  mutable std::optional<ZeroConfig> zeros_;
};

enum class EventPart { main_index, main_terms, close_tail, far_tail };

struct EventLayout {
  int k0 = 0;
  int N = 0;
  double C1 = 2.0;
  std::vector<EventPart> part;   // per index 0..4N
  std::vector<double> bound;     // |xi_k| bound on main terms and close tail
};

EventLayout rare_event_layout(double r, double p, double C1 = 2.0);
RareEventSample construct_rare_event(double r, double p, RandomStream& rng, double C1 = 2.0);

struct HoleEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  long hits = 0;
  long samples = 0;
  int N = 0;
  long fallbacks = 0;  // samples that needed full root extraction
};

/// Plain Monte Carlo for P[n(r) = 0] over the truncation N = ceil(4 r^2 + 40).
HoleEstimate hole_probability_mc(double r, long samples, RandomStream& rng);

enum class Normalization { per_sample, per_area };

struct RadialHistogram {
  std::vector<double> edges;
  std::vector<double> counts;   // totals over samples
  std::vector<double> density;  // per sample, divided by bin area when per_area
  std::vector<double> stderr_;
  std::vector<double> sum_squares;  // per-bin sum over samples of count^2
  long samples = 0;
  double scale = 1.0;
  Normalization normalization = Normalization::per_area;

  /// Mean number of zeros per sample with lo <= |z| / scale < hi.
  double window_mean(double lo, double hi) const;
  /// Bin index containing radius x, or -1.
  int bin_of(double x) const;
  void merge(const RadialHistogram& other);
};

std::vector<double> uniform_edges(double lo, double hi, int bins);

RadialHistogram radial_histogram(const std::vector<ZeroConfig>& samples, const std::vector<double>& edges,
                                 double scale = 1.0, Normalization norm = Normalization::per_area);

}  // namespace gefhole
