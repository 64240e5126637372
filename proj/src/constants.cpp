#include "gefhole/constants.hpp"

#include <cmath>
#include <numbers>

#include "gefhole/errors.hpp"
#include "gefhole/series.hpp"

namespace gefhole {

namespace {

constexpr double kE = std::numbers::e;

double x_logx_minus_x(double x) { return x > 0 ? x * (std::log(x) - 1.0) : 0.0; }

// Safeguarded Newton on f(q) = q(log q - 1) - target over [lo, hi], f' = log q.
double bracketed_newton(double target, double lo, double hi) {
  auto f = [&](double q) { return x_logx_minus_x(q) - target; };
  double flo = f(lo);
  double q = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fq = f(q);
    if (fq == 0.0) return q;
    if ((fq < 0) == (flo < 0)) {
      lo = q;
      flo = fq;
    } else {
      hi = q;
    }
    const double d = q > 0 ? std::log(q) : -INFINITY;
    double next = q - fq / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - q) <= 1e-16 * std::max(1.0, q)) return next;
    q = next;
  }
  return q;
}

}  // namespace

double q_of_p(double p) {
  if (!(p >= 0)) throw ArgumentError("q_of_p: p must be >= 0");
  if (p == 0.0) return kE;
  if (p == 1.0) return 1.0;
  if (p >= kE) return 0.0;
  const double target = x_logx_minus_x(p);
  if (p < 1.0) return bracketed_newton(target, 1.0, kE);
  return bracketed_newton(target, 0.0, 1.0);
}

double h_antiderivative(double x) { return x > 0 ? 0.25 * x * x * (2.0 * std::log(x) - 1.0) : 0.0; }

double z_const(double p) {
  if (!(p >= 0)) throw ArgumentError("z_const: p must be >= 0");
  if (p == 0.0) return kE * kE / 4.0;
  if (p == 1.0) return 0.0;
  if (p >= kE) return h_antiderivative(p);
  return std::abs(h_antiderivative(q_of_p(p)) - h_antiderivative(p));
}

RateConstant rate_constant(double p) {
  RateConstant rc{p, q_of_p(p), z_const(p), Branch::deficit};
  if (p == 0.0) rc.branch = Branch::hole;
  else if (p < 1.0) rc.branch = Branch::deficit;
  else if (p < kE) rc.branch = Branch::overcrowd;
  else rc.branch = Branch::saturated;
  return rc;
}

double ginibre_g(double p) {
  if (!(p >= 0)) throw ArgumentError("ginibre_g: p must be >= 0");
  auto F = [](double x) {
    const double x2 = x * x;
    return x - 0.5 * x2 + (x > 0 ? 0.5 * x2 * std::log(x) : 0.0) - 0.25 * x2;
  };
  return std::abs(F(p) - F(1.0));
}

double jlm_exponent(double b) {
  if (!(b > 0.5)) throw ArgumentError("jlm_exponent: b must exceed 1/2");
  if (b <= 1.0) return 2.0 * b - 1.0;
  if (b <= 2.0) return 3.0 * b - 2.0;
  return 2.0 * b;
}

double moderate_rate(double a, double b) {
  if (!(a > 0)) throw ArgumentError("moderate_rate: a must be > 0");
  if (!(b > 4.0 / 3.0 && b < 2.0))
    throw ArgumentError("moderate_rate: b outside (4/3, 2); the lower bound alone extends to (1, 2)");
  return 2.0 * a * a * a / 3.0;
}

int main_index(double p, double r) { return static_cast<int>(std::floor(p * r * r)); }

double main_term_logratio(double p, int k, double r) {
  if (k < 1 || !(r > 0) || !(p >= 0)) throw ArgumentError("main_term_logratio: need k >= 1, r > 0, p >= 0");
  return log_b(main_index(p, r), r) - log_b(k, r);
}

MainTermBracket main_term_bracket(double p, int k, double r, double C1) {
  const double r2 = r * r;
  const double lead = p > 0 ? 0.5 * p * std::log(kE / p) * r2 : 0.0;
  const double kterm = 0.5 * k * std::log(kE * r2 / k);
  MainTermBracket b;
  b.deviation = main_term_logratio(p, k, r) - (lead - kterm);
  b.upper = C1 * std::log(k + 1.0);
  b.lower = C1 * std::log(main_index(p, r) + 1.0);
  return b;
}

}  // namespace gefhole
