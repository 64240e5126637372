#include "gefhole/rootfinder.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gefhole/errors.hpp"

namespace gefhole {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
using cd = std::complex<double>;

// 1/z without the inf/nan branches of the library complex division.
inline cd recip(cd z) {
  const double d = z.real() * z.real() + z.imag() * z.imag();
  return {z.real() / d, -z.imag() / d};
}

struct Eval {
  cd dlog;              // P'/P in the u variable
  double abs_p = 0;     // |P(u)| / |u|^n when |u| > 1
  double bound = 0;     // Horner rounding-error scale, same units as abs_p
  double log_factor = 0;
  bool exact_zero = false;

  double log_abs() const { return exact_zero ? kNegInf : std::log(abs_p) + log_factor; }
  bool negligible() const { return exact_zero || abs_p <= 8.0 * kEps * bound; }
};

// P(z) = K sum_j c_j u^j with z = s u and max |c_j| = 1; the `low` trailing
// coefficients that vanish are roots at the origin.
class ScaledPoly {
 public:
  explicit ScaledPoly(const CoeffVector& c) {
    const int N = c.degree();
    if (N < 1) throw ArgumentError("roots: degree must be >= 1");
    if (!(std::abs(c.xi[N]) >= 1e-300))
      throw DegenerateLeadingCoefficient("roots: |xi_N| below 1e-300");
    low_ = 0;
    while (low_ < N && std::abs(c.xi[low_]) == 0.0) ++low_;
    n_ = N - low_;
    std::vector<double> la(n_ + 1, kNegInf);
    const double lL = std::log(c.scale);
    for (int j = 0; j <= n_; ++j) {
      const int k = j + low_;
      const double a = std::abs(c.xi[k]);
      if (a > 0) la[j] = std::log(a) - half_log_factorial(k) + k * lL;
    }
    log_s_ = n_ > 0 ? (la[0] - la[n_]) / n_ : 0.0;
    double top = kNegInf;
    lc_.resize(n_ + 1);
    for (int j = 0; j <= n_; ++j) {
      lc_[j] = la[j] + j * log_s_;
      top = std::max(top, lc_[j]);
    }
    c_.resize(n_ + 1);
    for (int j = 0; j <= n_; ++j) {
      lc_[j] -= top;
      const int k = j + low_;
      c_[j] = lc_[j] == kNegInf ? cd{0, 0} : std::polar(std::exp(lc_[j]), std::arg(c.xi[k]));
    }
  }

  int degree() const { return n_; }
  int zero_roots() const { return low_; }
  double log_scale() const { return log_s_; }
  const std::vector<double>& log_coeffs() const { return lc_; }
  const std::vector<cd>& coeffs() const { return c_; }

  Eval eval(cd u) const {
    Eval e;
    const double au = std::abs(u);
    if (au <= 1.0) {
      cd p = c_[n_], dp = 0;
      double bound = std::abs(c_[n_]);
      for (int j = n_ - 1; j >= 0; --j) {
        dp = dp * u + p;
        p = p * u + c_[j];
        bound = bound * au + std::abs(c_[j]);
      }
      e.abs_p = std::abs(p);
      e.bound = bound;
      if (e.abs_p == 0) e.exact_zero = true;
      else e.dlog = dp * recip(p);
    } else {
      const cd v = recip(u);
      const double av = 1.0 / au;
      cd q = c_[0], dq = 0;
      double bound = std::abs(c_[0]);
      for (int j = 1; j <= n_; ++j) {
        dq = dq * v + q;
        q = q * v + c_[j];
        bound = bound * av + std::abs(c_[j]);
      }
      e.abs_p = std::abs(q);
      e.bound = bound;
      e.log_factor = n_ * std::log(au);
      if (e.abs_p == 0) e.exact_zero = true;
      else e.dlog = (static_cast<double>(n_) * q - v * dq) * recip(u * q);
    }
    return e;
  }

 private:
  int n_ = 0;
  int low_ = 0;
  double log_s_ = 0.0;
  std::vector<double> lc_;
  std::vector<cd> c_;
};

// Upper convex hull of (j, lc_j) gives starting radii (Bini's initialization).
std::vector<cd> newton_polygon_start(const ScaledPoly& P) {
  const auto& lc = P.log_coeffs();
  const int n = P.degree();
  std::vector<int> hull;
  for (int j = 0; j <= n; ++j) {
    if (lc[j] == kNegInf) continue;
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull.back();
      // drop b if it lies on or below segment a-j
      const double cross = (lc[b] - lc[a]) * (j - a) - (lc[j] - lc[a]) * (b - a);
      if (cross <= 0) hull.pop_back();
      else break;
    }
    hull.push_back(j);
  }
  std::vector<cd> z;
  z.reserve(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int a = hull[e];
    const int b = hull[e + 1];
    const int cnt = b - a;
    const double rad = std::exp((lc[a] - lc[b]) / cnt);
    const double offset = two_pi * static_cast<double>(e) / n + 0.4;
    for (int m = 0; m < cnt; ++m) z.push_back(std::polar(rad, two_pi * m / cnt + offset));
  }
  return z;
}

bool aberth(const ScaledPoly& P, std::vector<cd>& u, int max_iter) {
  const int n = P.degree();
  std::vector<char> done(n, 0);
  int remaining = n;
  for (int it = 0; it < max_iter && remaining > 0; ++it) {
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Eval e = P.eval(u[i]);
      if (e.negligible()) {
        done[i] = 1;
        --remaining;
        continue;
      }
      cd sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += recip(u[i] - u[j]);
      const cd w = recip(e.dlog - sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
      u[i] -= w;
      if (std::abs(w) <= 2.0 * kEps * std::abs(u[i])) {
        done[i] = 1;
        --remaining;
      }
    }
  }
  return remaining == 0;
}

void balance(Eigen::MatrixXcd& A) {
  const Eigen::Index n = A.rows();
  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0 || r == 0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / 2.0;
      while (c < g) {
        f *= 2.0;
        c *= 4.0;
      }
      g = r * 2.0;
      while (c >= g) {
        f /= 2.0;
        c /= 4.0;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
}

std::vector<cd> companion_eigenvalues(const ScaledPoly& P) {
  const int n = P.degree();
  const auto& c = P.coeffs();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) A(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) A(i, n - 1) = -c[i] / c[n];
  balance(A);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  if (es.info() != Eigen::Success) throw NumericalError("roots: eigenvalue iteration failed");
  std::vector<cd> u(n);
  for (int i = 0; i < n; ++i) u[i] = es.eigenvalues()[i];
  return u;
}

void polish(const ScaledPoly& P, std::vector<cd>& u, int iterations) {
  const int n = P.degree();
  for (int i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (j != i) nearest = std::min(nearest, std::abs(u[i] - u[j]));
    Eval e = P.eval(u[i]);
    for (int it = 0; it < iterations && !e.exact_zero; ++it) {
      const cd step = recip(e.dlog);
      if (!std::isfinite(step.real()) || std::abs(step) > 0.5 * nearest) break;
      const cd cand = u[i] - step;
      const Eval ec = P.eval(cand);
      if (!(ec.exact_zero || ec.log_abs() < e.log_abs())) break;
      u[i] = cand;
      e = ec;
    }
  }
}

ZeroConfig finish(const CoeffVector& c, const ScaledPoly& P, const std::vector<cd>& u) {
  ZeroConfig zc;
  zc.scale = c.scale;
  zc.plane = Plane::scaled;
  const double s = std::exp(P.log_scale());
  zc.zeros.assign(P.zero_roots(), cd{0, 0});
  double worst = 0.0;
  for (const cd& ui : u) {
    const cd z = s * ui;
    zc.zeros.push_back(z);
    const Eval e = P.eval(ui);
    if (!e.exact_zero) worst = std::max(worst, s / std::abs(e.dlog) / std::max(1.0, std::abs(z)));
  }
  zc.max_residual = worst;
  const int N = zc.size();
  for (int i = 0; i < N && !zc.near_multiple; ++i)
    for (int j = i + 1; j < N; ++j)
      if (std::norm(zc.zeros[i] - zc.zeros[j]) < 1e-28 * std::max(1.0, std::norm(zc.zeros[i]))) {
        zc.near_multiple = true;
        break;
      }
  return zc;
}

ZeroConfig solve(const CoeffVector& c, bool use_companion, const RootOptions& opt) {
  const ScaledPoly P(c);
  std::vector<cd> u;
  if (P.degree() > 0) {
    if (use_companion) {
      u = companion_eigenvalues(P);
    } else {
      u = newton_polygon_start(P);
      if (!aberth(P, u, opt.max_aberth_iterations)) u = companion_eigenvalues(P);
    }
    polish(P, u, opt.polish_iterations);
  }
  return finish(c, P, u);
}

}  // namespace

std::vector<std::complex<double>> ZeroConfig::physical() const {
  std::vector<std::complex<double>> w(zeros);
  if (plane == Plane::scaled)
    for (auto& x : w) x *= scale;
  return w;
}

ZeroConfig roots(const CoeffVector& c, const RootOptions& opt) {
  return solve(c, c.degree() <= opt.companion_max_degree, opt);
}

ZeroConfig roots_companion(const CoeffVector& c) { return solve(c, true, RootOptions{}); }

ZeroConfig roots_aberth(const CoeffVector& c) { return solve(c, false, RootOptions{}); }

int count_in_disk(const ZeroConfig& zc, double rho) {
  if (rho < 0) throw ArgumentError("count_in_disk: rho must be >= 0");
  int n = 0;
  for (const auto& z : zc.zeros)
    if (std::abs(z) <= rho) ++n;
  return n;
}

ContourCount argument_principle_count(const CoeffVector& c, double rho, int quad_points) {
  if (!(rho > 0)) throw ArgumentError("argument_principle_count: rho must be > 0");
  if (quad_points < 8 || quad_points % 2 != 0)
    throw ArgumentError("argument_principle_count: quad_points must be even and >= 8");
  double sum_all = 0.0, sum_even = 0.0;
  double nearest = std::numeric_limits<double>::infinity();
  const double h = 2.0 * std::numbers::pi / quad_points;
  for (int q = 0; q < quad_points; ++q) {
    const cd z = std::polar(rho, h * q);
    const PolyWithDerivative pd = eval_poly_with_derivative(c, z);
    if (pd.value.is_zero()) throw NearCircleRoot("argument_principle_count: root on the contour");
    const cd step = pd.newton_step();
    nearest = std::min(nearest, std::abs(step));
    // z P'/P
    const double re = (z / step).real();
    sum_all += re;
    if (q % 2 == 0) sum_even += re;
  }
  ContourCount out;
  out.quad_points = quad_points;
  out.raw = sum_all / quad_points;
  out.error_estimate = std::abs(out.raw - sum_even / (quad_points / 2));
  out.nearest_root_estimate = nearest;
  out.count = static_cast<int>(std::lround(out.raw));
  if (nearest < 1e-6 * rho)
    throw NearCircleRoot("argument_principle_count: root within 1e-6 rho of the contour");
  if (out.error_estimate > 0.1 || std::abs(out.raw - out.count) > 0.1)
    throw NearCircleRoot("argument_principle_count: trapezoid rule unresolved; raise quad_points");
  return out;
}

ContourCount argument_principle_count_adaptive(const CoeffVector& c, double rho, int q0, int q_max) {
  for (int q = q0;; q *= 2) {
    try {
      return argument_principle_count(c, rho, q);
    } catch (const NearCircleRoot& e) {
      const std::string what = e.what();
      if (what.find("unresolved") == std::string::npos || q >= q_max) throw;
    }
  }
}

WindingCount winding_count(const CoeffVector& c, double rho, int q0) {
  if (!(rho > 0)) throw ArgumentError("winding_count: rho must be > 0");
  if (q0 < 4) throw ArgumentError("winding_count: q0 must be >= 4");
  const int n = c.degree();
  std::vector<double> la(n + 1, kNegInf);
  const double lr = std::log(c.scale * rho);
  double mx = kNegInf;
  for (int k = 0; k <= n; ++k) {
    const double m = std::abs(c.xi[k]);
    if (m > 0) la[k] = std::log(m) + k * lr - half_log_factorial(k);
    mx = std::max(mx, la[k]);
  }
  if (mx == kNegInf) throw DegenerateLeadingCoefficient("winding_count: zero polynomial");
  // a_k on the unit circle, max |a_k| = 1
  std::vector<cd> a(n + 1, 0.0);
  double D = 0.0, S = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (la[k] == kNegInf || la[k] - mx < -700) continue;
    a[k] = std::polar(std::exp(la[k] - mx), std::arg(c.xi[k]));
    D += k * std::abs(a[k]);
    S += std::abs(a[k]);
  }
  auto P = [&](double th) {
    const cd u = std::polar(1.0, th);
    cd v = a[n];
    for (int k = n - 1; k >= 0; --k) v = v * u + a[k];
    return v;
  };
  // |P(th) - P(th_i)| <= D |th - th_i|, so |P_i| + |P_j| > D h keeps the arc inside two
  // overlapping discs that miss 0, and the phase change is the principal one.
  const double floor_abs = 64.0 * kEps * S * (n + 1);
  WindingCount out;
  double total = 0.0;
  struct Arc {
    double t0, t1;
    cd p0, p1;
    int depth;
  };
  const double h0 = 2.0 * std::numbers::pi / q0;
  std::vector<Arc> stack;
  cd first = P(0.0);
  for (int i = q0; i >= 1; --i) {
    // pushed in reverse so arcs are processed in order
    const double t0 = h0 * (i - 1), t1 = h0 * i;
    stack.push_back({t0, t1, i == 1 ? first : P(t0), i == q0 ? first : P(t1), 0});
  }
  while (!stack.empty()) {
    Arc arc = stack.back();
    stack.pop_back();
    ++out.evaluations;
    const double m0 = std::abs(arc.p0), m1 = std::abs(arc.p1);
    if (m0 <= floor_abs || m1 <= floor_abs)
      throw NearCircleRoot("winding_count: polynomial vanishes on the contour to rounding");
    if (m0 + m1 > 1.000001 * D * (arc.t1 - arc.t0)) {
      total += std::arg(arc.p1 / arc.p0);
      out.min_abs = std::min({out.min_abs, m0, m1});
      continue;
    }
    if (arc.depth > 40) throw NearCircleRoot("winding_count: root too close to the contour");
    const double tm = 0.5 * (arc.t0 + arc.t1);
    const cd pm = P(tm);
    stack.push_back({tm, arc.t1, pm, arc.p1, arc.depth + 1});
    stack.push_back({arc.t0, tm, arc.p0, pm, arc.depth + 1});
    out.max_depth = std::max(out.max_depth, arc.depth + 1);
  }
  const double w = total / (2.0 * std::numbers::pi);
  out.count = static_cast<int>(std::lround(w));
  if (std::abs(w - out.count) > 1e-6) throw NumericalError("winding_count: non-integral winding");
  return out;
}

double linear_statistics(const ZeroConfig& zc, const TestFunction& phi, double r) {
  if (!(r > 0)) throw ArgumentError("linear_statistics: r must be > 0");
  double s = 0.0;
  for (const auto& z : zc.zeros) s += phi(z / r);
  return s;
}

PerturbationReport perturbation_match(const ZeroConfig& f_roots, const ZeroConfig& fg_roots, int M,
                                      double gamma, const TestFunction& phi, double r) {
  PerturbationReport rep;
  rep.difference = std::abs(linear_statistics(f_roots, phi, r) - linear_statistics(fg_roots, phi, r));
  rep.bound = M * phi.modulus(2.0 * M * gamma / r);
  rep.within = rep.difference <= rep.bound;
  return rep;
}

}  // namespace gefhole
