#pragma once
// Independent reference computations for the unit tests. Nothing here calls the
// library routine it is used to check.

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "gefhole/radial_measures.hpp"
#include "gefhole/series.hpp"

namespace oracle {

using cplx = std::complex<double>;
using cld = std::complex<long double>;
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

inline double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-13, unsigned depth = 15) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, depth, tol);
}

/// P_{N,L}(z) summed term by term in long double with Kahan compensation.
inline cplx eval_reference(const gefhole::CoeffVector& c, cplx z) {
  long double re = 0, im = 0, cre = 0, cim = 0;
  const cld w = cld(z.real(), z.imag()) * static_cast<long double>(c.scale);
  cld pw = 1;
  long double sqrt_fact = 1;
  for (int k = 0; k <= c.degree(); ++k) {
    if (k > 0) {
      pw *= w;
      sqrt_fact *= std::sqrt(static_cast<long double>(k));
    }
    const cld t = cld(c.xi[k].real(), c.xi[k].imag()) * pw / sqrt_fact;
    long double y = t.real() - cre, s = re + y;
    cre = (s - re) - y;
    re = s;
    y = t.imag() - cim;
    s = im + y;
    cim = (s - im) - y;
    im = s;
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

/// Coefficients xi with P_{N,L} = lead * prod (z - r_j). Expanding the product cancels
/// heavily for roots spread around a circle, so it runs in 100-digit arithmetic.
inline gefhole::CoeffVector from_roots(const std::vector<cplx>& roots, double L = 1.0, cplx lead = 1.0) {
  using mp = boost::multiprecision::cpp_bin_float_100;
  std::vector<mp> re{1}, im{0};
  for (const auto& r : roots) {
    std::vector<mp> bre(re.size() + 1, mp(0)), bim(re.size() + 1, mp(0));
    for (std::size_t k = 0; k < re.size(); ++k) {
      bre[k + 1] += re[k];
      bim[k + 1] += im[k];
      bre[k] -= re[k] * r.real() - im[k] * r.imag();
      bim[k] -= re[k] * r.imag() + im[k] * r.real();
    }
    re = std::move(bre);
    im = std::move(bim);
  }
  gefhole::CoeffVector c;
  c.scale = L;
  mp fact = 1, Lk = 1;
  for (std::size_t k = 0; k < re.size(); ++k) {
    if (k > 0) {
      fact *= k;
      Lk *= L;
    }
    // a_k z^k = xi_k (L z)^k / sqrt(k!)
    const mp f = sqrt(fact) / Lk;
    const mp vr = f * (re[k] * lead.real() - im[k] * lead.imag());
    const mp vi = f * (re[k] * lead.imag() + im[k] * lead.real());
    c.xi.emplace_back(static_cast<double>(vr), static_cast<double>(vi));
  }
  return c;
}

/// Worst first-order root perturbation from unit roundoff in the monomial coefficients,
/// eps * sum |a_k| |z|^k / |P'(z)|, over the given roots.
inline double root_condition(const std::vector<cplx>& roots) {
  using mp = boost::multiprecision::cpp_bin_float_50;
  const auto c = from_roots(roots);
  double worst = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    mp dre = 1, dim = 0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i) continue;
      const double xr = roots[i].real() - roots[j].real(), xi = roots[i].imag() - roots[j].imag();
      const mp t = dre * xr - dim * xi;
      dim = dre * xi + dim * xr;
      dre = t;
    }
    mp s = 0, zk = 1;
    const double m = std::abs(roots[i]);
    for (int k = 0; k <= c.degree(); ++k) {
      // |a_k| = |xi_k| / sqrt(k!) with L = 1
      s += mp(std::abs(c.xi[k])) * zk / sqrt(boost::multiprecision::tgamma(mp(k + 1)));
      zk *= m;
    }
    worst = std::max(worst, static_cast<double>(1.1e-16 * s / sqrt(dre * dre + dim * dim)));
  }
  return worst;
}

inline double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  auto one = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double worst = 0;
    for (auto u : x) {
      double best = INFINITY;
      for (auto v : y) best = std::min(best, std::abs(u - v));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one(a, b), one(b, a));
}

/// q with q (log q - 1) = p (log p - 1) on the other branch, by bisection.
inline double q_bisect(double p) {
  auto h = [](double x) { return x > 0 ? x * (std::log(x) - 1) : 0.0; };
  const double target = h(p);
  double lo, hi;
  if (p < 1) {
    lo = 1;
    hi = kE;
  } else {
    lo = 0;
    hi = 1;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    // h decreases on (0, 1) and increases on (1, e)
    const bool go_right = p < 1 ? h(mid) < target : h(mid) > target;
    (go_right ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// U_nu(s) from the defining double integral: angular quadrature of log|s - rho e^{i theta}|.
inline double potential_by_quadrature(const gefhole::RadialMeasure& nu, double s) {
  auto circle_mean = [s](double rho) {
    if (rho == 0) return s > 0 ? std::log(s) : -INFINITY;
    // symmetric in theta -> 2 pi - theta; theta = pi t^3 tames the log singularity at 0 when s = rho
    auto f = [&](double t) {
      const double th = kPi * t * t * t;
      return 3 * kPi * t * t * std::log(std::abs(cplx(s, 0) - std::polar(rho, th)));
    };
    return gk(f, 0.0, 1.0, 1e-12) / kPi;
  };
  double u = 0.0;
  for (const auto& a : nu.atoms()) u += a.mass * circle_mean(a.radius);
  for (const auto& A : nu.annuli()) {
    auto g = [&](double rho) { return 2.0 * rho * A.c * circle_mean(rho); };
    // g is smooth on each piece; a depth cap stops the search when g is pure rounding noise
    if (s > A.lo && s < A.hi)
      u += gk(g, A.lo, s, 1e-12, 8) + gk(g, s, A.hi, 1e-12, 8);
    else
      u += gk(g, A.lo, A.hi, 1e-12, 8);
  }
  return u;
}

/// 2 max over a fine grid of U(s) - s^2 / 2 alpha, with U from the circle formula.
inline double b_grid(const gefhole::RadialMeasure& nu, double alpha, double s_max, int n = 200000) {
  auto U = [&](double s) {
    double u = 0;
    for (const auto& a : nu.atoms()) u += a.mass * std::log(std::max(a.radius, s));
    for (const auto& A : nu.annuli()) {
      auto g = [&](double rho) { return 2.0 * rho * A.c * std::log(std::max(rho, s)); };
      u += gk(g, A.lo, std::clamp(s, A.lo, A.hi)) + gk(g, std::clamp(s, A.lo, A.hi), A.hi);
    }
    return u;
  };
  double best = -INFINITY;
  for (int i = 0; i <= n; i += 1) {
    const double s = s_max * i / n;
    if (nu.annuli().empty() || i % 100 == 0) best = std::max(best, U(s) - s * s / (2 * alpha));
  }
  return 2 * best;
}

}  // namespace oracle
