#include "gefhole/radial_measures.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "gefhole/constants.hpp"
#include "gefhole/errors.hpp"

namespace gefhole {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// F(u) = u^2 log u - u^2/2, F' = 2 u log u, F(0) = 0.
double F(double u) { return u > 0 ? u * u * std::log(u) - 0.5 * u * u : 0.0; }

double atom_potential(const CircleAtom& a, double s) { return a.mass * std::log(std::max(a.radius, s)); }

double annulus_potential(const Annulus& A, double s) {
  const double a = A.lo, b = A.hi;
  if (s <= a) return A.c * (F(b) - F(a));
  if (s >= b) return A.c * (b * b - a * a) * std::log(s);
  return A.c * (-a * a * std::log(s) + F(b) + 0.5 * s * s);
}

// \int_x^y 2 s U(s) ds for a single component, x <= y.
double atom_radial_integral(const CircleAtom& a, double x, double y) {
  const double t = a.radius;
  double out = 0.0;
  const double u0 = std::min(x, t), u1 = std::min(y, t);
  if (u1 > u0) out += std::log(t) * (u1 * u1 - u0 * u0);
  const double v0 = std::max(x, t), v1 = std::max(y, t);
  if (v1 > v0) out += F(v1) - F(v0);
  return a.mass * out;
}

double annulus_radial_integral(const Annulus& A, double x, double y) {
  const double a = A.lo, b = A.hi;
  double out = 0.0;
  {
    const double u0 = std::min(x, a), u1 = std::min(y, a);
    if (u1 > u0) out += (F(b) - F(a)) * (u1 * u1 - u0 * u0);
  }
  {
    const double u0 = std::clamp(x, a, b), u1 = std::clamp(y, a, b);
    if (u1 > u0) {
      out += -a * a * (F(u1) - F(u0)) + F(b) * (u1 * u1 - u0 * u0) +
             0.25 * (u1 * u1 * u1 * u1 - u0 * u0 * u0 * u0);
    }
  }
  {
    const double u0 = std::max(x, b), u1 = std::max(y, b);
    if (u1 > u0) out += (b * b - a * a) * (F(u1) - F(u0));
  }
  return A.c * out;
}

double radial_integral_of_potential(const RadialMeasure& nu, double x, double y) {
  double s = 0.0;
  for (const auto& a : nu.atoms()) s += atom_radial_integral(a, x, y);
  for (const auto& A : nu.annuli()) s += annulus_radial_integral(A, x, y);
  return s;
}

// Fixed-cost composite Gauss-Legendre. Pieces are graded geometrically toward a = 0,
// where integrands of the form v log v lose smoothness.
template <class Fn>
double gk(Fn f, double a, double b) {
  if (!(b > a)) return 0.0;
  using rule = boost::math::quadrature::gauss<double, 30>;
  double total = 0.0;
  if (a == 0.0) {
    double lo = b * std::ldexp(1.0, -40);
    total += rule::integrate(f, 0.0, lo);
    while (lo < b) {
      const double hi = std::min(b, 2.0 * lo);
      total += rule::integrate(f, lo, hi);
      lo = hi;
    }
    return total;
  }
  const int pieces = 4;
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) total += rule::integrate(f, a + i * h, i + 1 == pieces ? b : a + (i + 1) * h);
  return total;
}

double log_potential_quadrature(const RadialMeasure& nu, double s) {
  double u = 0.0;
  for (const auto& a : nu.atoms()) u += atom_potential(a, s);
  for (const auto& A : nu.annuli()) {
    auto f = [&](double v) { return A.c * 2.0 * v * std::log(std::max(v, s)); };
    if (s > A.lo && s < A.hi) u += gk(f, A.lo, s) + gk(f, s, A.hi);
    else u += gk(f, A.lo, A.hi);
  }
  return u;
}

std::vector<double> breakpoints(const RadialMeasure& nu, double s_max) {
  std::vector<double> bp{0.0, s_max};
  for (const auto& a : nu.atoms())
    if (a.radius < s_max) bp.push_back(a.radius);
  for (const auto& A : nu.annuli()) {
    if (A.lo < s_max) bp.push_back(A.lo);
    if (A.hi < s_max) bp.push_back(A.hi);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

double golden_max(const std::function<double(double)>& f, double a, double b, double* arg) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, b); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  *arg = f1 > f2 ? x1 : x2;
  return std::max(f1, f2);
}

}  // namespace

RadialMeasure::RadialMeasure(std::vector<CircleAtom> atoms, std::vector<Annulus> annuli) {
  for (const auto& a : atoms) {
    if (!(a.radius >= 0) || !(a.mass >= 0) || !std::isfinite(a.radius))
      throw ArgumentError("RadialMeasure: atoms need radius >= 0 and mass >= 0");
    if (a.mass > 0) atoms_.push_back(a);
  }
  for (const auto& A : annuli) {
    if (!(A.lo >= 0 && A.hi > A.lo) || !(A.c >= 0))
      throw ArgumentError("RadialMeasure: annuli need 0 <= lo < hi and c >= 0");
    if (A.c > 0) annuli_.push_back(A);
  }
  std::sort(atoms_.begin(), atoms_.end(), [](auto& x, auto& y) { return x.radius < y.radius; });
  std::sort(annuli_.begin(), annuli_.end(), [](auto& x, auto& y) { return x.lo < y.lo; });
  for (std::size_t i = 1; i < annuli_.size(); ++i)
    if (annuli_[i].lo < annuli_[i - 1].hi) throw ArgumentError("RadialMeasure: annuli overlap");
  total_mass_ = 0.0;
  for (const auto& a : atoms_) total_mass_ += a.mass;
  for (const auto& A : annuli_) total_mass_ += A.mass();
}

bool RadialMeasure::is_probability() const { return std::abs(total_mass_ - 1.0) <= 1e-12; }

double RadialMeasure::mass_within(double s) const {
  double m = 0.0;
  for (const auto& a : atoms_)
    if (a.radius <= s) m += a.mass;
  for (const auto& A : annuli_) {
    const double v = std::clamp(s, A.lo, A.hi);
    m += A.c * (v * v - A.lo * A.lo);
  }
  return m;
}

double RadialMeasure::mass_inside(double s) const {
  double m = 0.0;
  for (const auto& a : atoms_)
    if (a.radius < s) m += a.mass;
  for (const auto& A : annuli_) {
    const double v = std::clamp(s, A.lo, A.hi);
    m += A.c * (v * v - A.lo * A.lo);
  }
  return m;
}

double RadialMeasure::second_moment() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.mass * a.radius * a.radius;
  for (const auto& A : annuli_) m += 0.5 * A.c * (std::pow(A.hi, 4) - std::pow(A.lo, 4));
  return m;
}

double RadialMeasure::support_radius() const {
  double r = 0.0;
  for (const auto& a : atoms_) r = std::max(r, a.radius);
  for (const auto& A : annuli_) r = std::max(r, A.hi);
  return r;
}

RadialMeasure RadialMeasure::scaled(double factor) const {
  auto atoms = atoms_;
  auto annuli = annuli_;
  for (auto& a : atoms) a.mass *= factor;
  for (auto& A : annuli) A.c *= factor;
  return RadialMeasure(std::move(atoms), std::move(annuli));
}

RadialMeasure mix(const RadialMeasure& a, double wa, const RadialMeasure& b, double wb) {
  std::vector<CircleAtom> atoms;
  for (auto x : a.atoms()) atoms.push_back({x.radius, wa * x.mass});
  for (auto x : b.atoms()) atoms.push_back({x.radius, wb * x.mass});
  std::sort(atoms.begin(), atoms.end(), [](auto& x, auto& y) { return x.radius < y.radius; });
  std::vector<CircleAtom> merged;
  for (const auto& x : atoms) {
    if (!merged.empty() && merged.back().radius == x.radius) merged.back().mass += x.mass;
    else merged.push_back(x);
  }
  std::vector<double> edges;
  for (const auto& A : a.annuli()) edges.insert(edges.end(), {A.lo, A.hi});
  for (const auto& A : b.annuli()) edges.insert(edges.end(), {A.lo, A.hi});
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  auto density_at = [](const RadialMeasure& m, double s) {
    for (const auto& A : m.annuli())
      if (s > A.lo && s < A.hi) return A.c;
    return 0.0;
  };
  std::vector<Annulus> annuli;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    const double c = wa * density_at(a, mid) + wb * density_at(b, mid);
    if (c <= 0) continue;
    if (!annuli.empty() && annuli.back().hi == edges[i] && annuli.back().c == c) annuli.back().hi = edges[i + 1];
    else annuli.push_back({edges[i], edges[i + 1], c});
  }
  return RadialMeasure(std::move(merged), std::move(annuli));
}

double log_potential(const RadialMeasure& nu, double s) {
  if (!(s >= 0)) throw ArgumentError("log_potential: s must be >= 0");
  double u = 0.0;
  for (const auto& a : nu.atoms()) u += atom_potential(a, s);
  for (const auto& A : nu.annuli()) u += annulus_potential(A, s);
  return u;
}

double mutual_energy(const RadialMeasure& a, const RadialMeasure& b) {
  double e = 0.0;
  for (const auto& x : b.atoms()) e += x.mass * log_potential(a, x.radius);
  for (const auto& A : b.annuli()) e += A.c * radial_integral_of_potential(a, A.lo, A.hi);
  return e;
}

double log_energy(const RadialMeasure& nu) {
  for (const auto& a : nu.atoms())
    if (a.radius == 0.0) throw InfiniteEnergy("log_energy: atom at radius 0");
  return mutual_energy(nu, nu);
}

double signed_energy(const RadialMeasure& nu, const RadialMeasure& mu) {
  return log_energy(nu) - 2.0 * mutual_energy(nu, mu) + log_energy(mu);
}

SupResult b_alpha_on(const RadialMeasure& nu, double alpha, double s_max) {
  if (!(alpha > 0) || !(s_max > 0)) throw ArgumentError("b_alpha: alpha and s_max must be > 0");
  auto h = [&](double s) { return log_potential(nu, s) - s * s / (2.0 * alpha); };
  const auto bp = breakpoints(nu, s_max);
  std::vector<double> cand(bp);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double x = bp[i], y = bp[i + 1];
    const double mid = 0.5 * (x + y);
    // on (x, y): h'(s) = (A + B s^2) / s
    double A = 0.0, B = -1.0 / alpha;
    for (const auto& a : nu.atoms())
      if (a.radius <= x) A += a.mass;
    for (const auto& An : nu.annuli()) {
      if (An.hi <= x) A += An.mass();
      else if (An.lo <= x && mid < An.hi) {
        A -= An.c * An.lo * An.lo;
        B += An.c;
      }
    }
    if (B != 0.0) {
      const double s2 = -A / B;
      if (s2 > x * x && s2 < y * y) cand.push_back(std::sqrt(s2));
    }
  }
  std::sort(cand.begin(), cand.end());
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> vals(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    vals[i] = h(cand[i]);
    best = std::max(best, vals[i]);
  }
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < cand.size(); ++i)
    if (vals[i] >= best - tol) return {2.0 * best, cand[i]};
  return {2.0 * best, cand.back()};
}

SupResult b_alpha(const RadialMeasure& nu, double alpha) { return b_alpha_on(nu, alpha, std::sqrt(alpha)); }

double g_nu(const RadialMeasure& nu, double alpha, double s) {
  return log_potential(nu, s) - s * s / (2.0 * alpha) - 0.5 * b_alpha(nu, alpha).value;
}

FunctionalReport functional_I(const RadialMeasure& nu, double alpha, Method method) {
  if (!nu.is_probability()) throw ArgumentError("functional_I: measure must be a probability");
  FunctionalReport rep;
  rep.method = method;
  rep.convention_note = "J_alpha uses |w|^2/alpha; J_alpha_half uses |w|^2/(2 alpha) as in B_alpha";
  const double sa = std::sqrt(alpha);
  if (method == Method::closed_form) {
    rep.energy = log_energy(nu);
    const auto b = b_alpha(nu, alpha);
    rep.B_alpha = b.value;
    rep.argmax_w = b.argmax;
    for (double s : {0.0, 1.0, sa, b.argmax}) rep.U_at[s] = log_potential(nu, s);
  } else {
    for (const auto& a : nu.atoms())
      if (a.radius == 0.0) throw InfiniteEnergy("functional_I: atom at radius 0");
    auto U = [&](double s) { return log_potential_quadrature(nu, s); };
    double e = 0.0;
    for (const auto& a : nu.atoms()) e += a.mass * U(a.radius);
    for (const auto& A : nu.annuli()) {
      // kinks of U sit at atom radii and annulus edges
      std::vector<double> cuts{A.lo, A.hi};
      for (double x : breakpoints(nu, A.hi))
        if (x > A.lo && x < A.hi) cuts.push_back(x);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        e += gk([&](double s) { return A.c * 2.0 * s * U(s); }, cuts[i], cuts[i + 1]);
    }
    rep.energy = e;
    auto h = [&](double s) { return U(s) - s * s / (2.0 * alpha); };
    const int n = 400;
    double best = -std::numeric_limits<double>::infinity(), arg = 0.0;
    int ibest = 0;
    for (int i = 0; i <= n; ++i) {
      const double s = sa * i / n;
      const double v = h(s);
      if (v > best + 1e-13) {
        best = v;
        arg = s;
        ibest = i;
      }
    }
    double a2;
    const double lo = sa * std::max(0, ibest - 1) / n, hi = sa * std::min(n, ibest + 1) / n;
    const double refined = golden_max(h, lo, hi, &a2);
    if (refined > best + 1e-13) {
      best = refined;
      arg = a2;
    }
    rep.B_alpha = 2.0 * best;
    rep.argmax_w = arg;
    for (double s : {0.0, 1.0, sa, arg}) rep.U_at[s] = U(s);
  }
  rep.I_alpha = rep.B_alpha - rep.energy;
  const double m2 = nu.second_moment();
  rep.J_alpha = m2 / alpha - rep.energy;
  rep.J_alpha_half = m2 / (2.0 * alpha) - rep.energy;
  return rep;
}

double functional_J(const RadialMeasure& nu, double alpha) { return nu.second_moment() / alpha - log_energy(nu); }

double functional_J_half(const RadialMeasure& nu, double alpha) {
  return nu.second_moment() / (2.0 * alpha) - log_energy(nu);
}

Sides jensen_check(const RadialMeasure& nu, double r) {
  if (!(r > 0)) throw ArgumentError("jensen_check: r must be > 0");
  Sides out;
  out.lhs = log_potential(nu, r) - log_potential(nu, 0.0);
  double rhs = 0.0;
  for (const auto& a : nu.atoms()) {
    if (a.radius == 0.0) throw ArgumentError("jensen_check: atom at the origin");
    if (a.radius <= r) rhs += a.mass * std::log(r / a.radius);
  }
  for (const auto& A : nu.annuli()) {
    const double a = A.lo, b = A.hi;
    if (r <= a) continue;
    const double v = std::min(b, r);
    rhs += A.c * (0.5 * (v * v - a * a) - (a > 0 ? a * a * std::log(v / a) : 0.0));
    if (r > b) rhs += A.c * (b * b - a * a) * std::log(r / b);
  }
  out.rhs = rhs;
  return out;
}

GriddedFunction sample_on_grid(const TestFunction& phi, double h, double margin) {
  if (!(h > 0)) throw ArgumentError("sample_on_grid: h must be > 0");
  GriddedFunction g;
  const int half_n = static_cast<int>(std::ceil((phi.support_radius + margin) / h));
  g.n = 2 * half_n + 1;
  g.h = h;
  g.half_width = half_n * h;
  g.values.resize(static_cast<std::size_t>(g.n) * g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      g.values[static_cast<std::size_t>(i) * g.n + j] = phi({-g.half_width + i * h, -g.half_width + j * h});
  return g;
}

double dirichlet_energy(const GriddedFunction& g) {
  if (g.n < 3) throw ArgumentError("dirichlet_energy: grid too small");
  if (!(g.h <= 1.0 / 8.0 + 1e-15)) throw ArgumentError("dirichlet_energy: need at least 8 cells per unit length");
  double vmax = 0.0, edge = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double v = std::abs(g.at(i, j));
      vmax = std::max(vmax, v);
      if (i == 0 || j == 0 || i == g.n - 1 || j == g.n - 1) edge = std::max(edge, v);
    }
  if (edge > 1e-12 * std::max(vmax, 1e-300) && edge > 0)
    throw ArgumentError("dirichlet_energy: function does not vanish on the grid boundary");
  double sum = 0.0;
  const double inv2h = 0.5 / g.h;
  for (int i = 1; i + 1 < g.n; ++i)
    for (int j = 1; j + 1 < g.n; ++j) {
      const double dx = (g.at(i + 1, j) - g.at(i - 1, j)) * inv2h;
      const double dy = (g.at(i, j + 1) - g.at(i, j - 1)) * inv2h;
      sum += dx * dx + dy * dy;
    }
  return sum * g.h * g.h;
}

double integrate(const RadialMeasure& nu, const TestFunction& phi) {
  const int nodes = 512;
  auto circle_mean = [&](double u) {
    if (u == 0.0) return phi({0.0, 0.0});
    double s = 0.0;
    for (int q = 0; q < nodes; ++q) s += phi(std::polar(u, 2.0 * kPi * q / nodes));
    return s / nodes;
  };
  double total = 0.0;
  for (const auto& a : nu.atoms()) total += a.mass * circle_mean(a.radius);
  for (const auto& A : nu.annuli()) {
    const double lo = std::min(A.lo, phi.support_radius), hi = std::min(A.hi, phi.support_radius);
    total += A.c * gk([&](double u) { return 2.0 * u * circle_mean(u); }, lo, hi);
  }
  return total;
}

Sides lin_stats_gap_bound(const RadialMeasure& nu, const RadialMeasure& mu, const TestFunction& phi, double grid_h) {
  const double sig = signed_energy(nu, mu);
  if (sig > 1e-12) throw NegativeDiscriminant("lin_stats_gap_bound: signed energy is positive");
  Sides out;
  out.lhs = std::abs(integrate(nu, phi) - integrate(mu, phi));
  const double D = dirichlet_energy(sample_on_grid(phi, grid_h));
  out.rhs = std::sqrt(D / (2.0 * kPi)) * std::sqrt(std::max(0.0, -sig));
  return out;
}

RadialMeasure equilibrium(double alpha) {
  if (!(alpha > 0)) throw ArgumentError("equilibrium: alpha must be > 0");
  return RadialMeasure({}, {{0.0, std::sqrt(alpha), 1.0 / alpha}});
}

RadialMeasure catalog(double p, double alpha, CatalogKind which) {
  if (!(p >= 0)) throw ArgumentError("catalog: p must be >= 0");
  if (p == 1.0) throw ArgumentError("catalog: p = 1 is the unconstrained case");
  const double q = q_of_p(p);
  if (!(alpha > std::max({p, q, kE}))) throw ArgumentError("catalog: alpha must exceed max(p, q(p), e)");
  const double c = 1.0 / alpha;
  const double sa = std::sqrt(alpha);
  std::vector<CircleAtom> atoms;
  std::vector<Annulus> annuli;
  if (which == CatalogKind::ginibre) {
    if (p < 1.0) {
      if (p > 0) annuli.push_back({0.0, std::sqrt(p), c});
      annuli.push_back({1.0, sa, c});
      atoms.push_back({1.0, (1.0 - p) * c});
    } else {
      annuli.push_back({0.0, 1.0, c});
      annuli.push_back({std::sqrt(p), sa, c});
      atoms.push_back({1.0, (p - 1.0) * c});
    }
    return RadialMeasure(std::move(atoms), std::move(annuli));
  }
  if (p < 1.0) {
    if (p > 0) annuli.push_back({0.0, std::sqrt(p), c});
    annuli.push_back({std::sqrt(q), sa, c});
    atoms.push_back({1.0, (q - p) * c});
  } else if (p < kE) {
    if (q > 0) annuli.push_back({0.0, std::sqrt(q), c});
    annuli.push_back({std::sqrt(p), sa, c});
    atoms.push_back({1.0, (p - q) * c});
  } else {
    atoms.push_back({1.0, p * c});
    annuli.push_back({std::sqrt(p), sa, c});
  }
  RadialMeasure mu(std::move(atoms), std::move(annuli));
  if (which == CatalogKind::gef_global_radon) return mu.scaled(alpha);
  return mu;
}

double minimal_I(double p, double alpha) {
  return 0.5 * std::log(alpha) - 0.75 + z_const(p) / (alpha * alpha);
}

}  // namespace gefhole
