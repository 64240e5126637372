#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "gefhole/rng.hpp"

namespace gefhole {

/// Taylor coefficients xi_0..xi_N of P_{N,L}(z) = sum_k xi_k (L z)^k / sqrt(k!).
struct CoeffVector {
  std::vector<std::complex<double>> xi;
  double scale = 1.0;  // L

  int degree() const { return static_cast<int>(xi.size()) - 1; }
};

CoeffVector sample_coeffs(int n, RandomStream& rng, double scale = 1.0);

/// 0.5 * log(k!), tabulated.
double half_log_factorial(int k);

/// log(r^k / sqrt(k!)).
double log_b(int k, double r);

struct LogBracket {
  double lo;
  double hi;
};

/// (k/e)^k <= k! <= 3 sqrt(k) (k/e)^k, in the log domain.
LogBracket stirling_bounds(int k);

/// Complex number stored as log-magnitude and phase.
struct LogComplex {
  double log_abs = -std::numeric_limits<double>::infinity();
  double arg = 0.0;

  std::complex<double> value() const;
  bool is_zero() const { return log_abs == -std::numeric_limits<double>::infinity(); }
};

/// P_{N,L}(z) by max-term rescaled summation.
LogComplex eval_poly(const CoeffVector& c, std::complex<double> z);

struct PolyWithDerivative {
  LogComplex value;
  LogComplex derivative;  // d/dz
  /// P/P' as an ordinary complex number (finite whenever P' != 0).
  std::complex<double> newton_step() const;
};

PolyWithDerivative eval_poly_with_derivative(const CoeffVector& c, std::complex<double> z);

/// Log of the envelope exp((N/2) log(16 B^2 / lambda)) for the tail T_N on |z| <= 2 B r.
double tail_envelope(int N, double B, double lambda);

struct TruncationPlan {
  double r = 0;
  double lambda = 0;
  int N0 = 0;
  int N1 = 0;
  double alpha_lo = 0;  // N0 / r^2
  double alpha_hi = 0;  // N1 / r^2
  double gamma = 0;
  double t = 0;
  double C2 = 4;

  double alpha(int N) const { return N / (r * r); }
};

TruncationPlan make_truncation_plan(double r, double C2 = 4.0);

struct RegularityReport {
  bool coeff_bound = false;      // |xi_k| <= sqrt(r^6 + k), k <= N
  bool energy_bound = false;     // sum |xi_k|^2 <= C lambda r^4
  bool leading_bound = false;    // |xi_N| >= exp(-r^2)
  std::optional<int> selected_degree;
  double energy_constant = 3.0;  // C
  double energy_sum = 0.0;

  bool all() const { return coeff_bound && energy_bound && leading_bound; }
};

RegularityReport regularity_check(const CoeffVector& c, const TruncationPlan& plan);

}  // namespace gefhole
