#include <doctest.h>

#include <cmath>

#include "gefhole/constants.hpp"
#include "gefhole/energy_optimizer.hpp"
#include "gefhole/errors.hpp"
#include "gefhole/radial_measures.hpp"
#include "gefhole/rng.hpp"
#include "oracles.hpp"

using namespace gefhole;
using oracle::cplx;

namespace {

const double kE = oracle::kE;

RadialMeasure unit_atom() { return RadialMeasure({{1.0, 1.0}}, {}); }

RadialMeasure random_measure(RandomStream& rng, double support) {
  std::vector<CircleAtom> atoms;
  for (int i = 0; i < 3; ++i) atoms.push_back({support * (0.05 + 0.95 * rng.uniform()), rng.uniform()});
  std::vector<double> cut(4);
  for (auto& x : cut) x = support * rng.uniform();
  std::sort(cut.begin(), cut.end());
  std::vector<Annulus> annuli{{cut[0], cut[1], rng.uniform()}, {cut[2], cut[3], rng.uniform()}};
  const double m = RadialMeasure(atoms, annuli).total_mass();
  for (auto& a : atoms) a.mass /= m;
  for (auto& A : annuli) A.c /= m;
  return RadialMeasure(atoms, annuli);
}

/// U from the circle identity log max(t, s), integrated numerically over annuli.
double potential_circle(const RadialMeasure& nu, double s) {
  double u = 0;
  for (const auto& a : nu.atoms()) u += a.mass * std::log(std::max(a.radius, s));
  for (const auto& A : nu.annuli()) {
    auto g = [&](double rho) { return 2.0 * rho * A.c * std::log(std::max(rho, s)); };
    const double m = std::clamp(s, A.lo, A.hi);
    u += oracle::gk(g, A.lo, m) + oracle::gk(g, m, A.hi);
  }
  return u;
}

double energy_oracle(const RadialMeasure& nu) {
  double e = 0;
  for (const auto& a : nu.atoms()) e += a.mass * potential_circle(nu, a.radius);
  for (const auto& A : nu.annuli()) {
    auto g = [&](double rho) { return 2.0 * rho * A.c * potential_circle(nu, rho); };
    // kinks of U sit at the atom radii and annulus ends
    std::vector<double> cuts{A.lo, A.hi};
    for (const auto& a : nu.atoms())
      if (a.radius > A.lo && a.radius < A.hi) cuts.push_back(a.radius);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) e += oracle::gk(g, cuts[i], cuts[i + 1], 1e-11);
  }
  return e;
}

double second_moment_oracle(const RadialMeasure& nu) {
  double m = 0;
  for (const auto& a : nu.atoms()) m += a.mass * a.radius * a.radius;
  for (const auto& A : nu.annuli()) m += oracle::gk([&](double r) { return 2 * r * A.c * r * r; }, A.lo, A.hi);
  return m;
}

}  // namespace

TEST_CASE("RadialMeasure: mass bookkeeping and validation") {
  const RadialMeasure nu({{0.5, 0.25}}, {{1.0, 2.0, 0.25}});
  CHECK(nu.total_mass() == doctest::Approx(0.25 + 0.25 * 3).epsilon(1e-15));
  CHECK(nu.is_probability());
  CHECK(nu.mass_inside(0.5) == 0.0);
  CHECK(nu.mass_within(0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(RadialMeasure({}, {{1.0, 2.0, 1.0}, {1.5, 3.0, 1.0}}), ArgumentError);
  CHECK_THROWS_AS(RadialMeasure({}, {{2.0, 1.0, 1.0}}), ArgumentError);
}

TEST_CASE("catalog: shapes") {
  const double alpha = 10;
  auto m0 = catalog(0.0, alpha);
  REQUIRE(m0.atoms().size() == 1);
  CHECK(m0.atoms()[0].radius == 1.0);
  CHECK(m0.atoms()[0].mass == doctest::Approx(kE / alpha));
  REQUIRE(m0.annuli().size() == 1);
  CHECK(m0.annuli()[0].lo == doctest::Approx(std::sqrt(kE)));
  CHECK(m0.annuli()[0].hi == doctest::Approx(std::sqrt(alpha)));
  CHECK(m0.annuli()[0].c == doctest::Approx(1 / alpha));

  const double q = q_of_p(0.5);
  auto mh = catalog(0.5, alpha);
  REQUIRE(mh.annuli().size() == 2);
  CHECK(mh.annuli()[0].lo == 0.0);
  CHECK(mh.annuli()[0].hi == doctest::Approx(std::sqrt(0.5)));
  CHECK(mh.annuli()[1].lo == doctest::Approx(std::sqrt(q)));
  CHECK(mh.atoms()[0].mass == doctest::Approx((q - 0.5) / alpha));

  auto g = catalog(2.0, alpha, CatalogKind::ginibre);
  REQUIRE(g.annuli().size() == 2);
  CHECK(g.annuli()[0].hi == 1.0);
  CHECK(g.annuli()[1].lo == doctest::Approx(std::sqrt(2.0)));
  CHECK(g.atoms()[0].mass == doctest::Approx(0.1));

  CHECK(catalog(0.0, alpha, CatalogKind::gef_global_radon).total_mass() == doctest::Approx(alpha));
  CHECK_THROWS_AS(catalog(1.0, alpha), ArgumentError);
  CHECK_THROWS_AS(catalog(0.0, 2.5), ArgumentError);
  CHECK_THROWS_AS(catalog(4.0, 3.9), ArgumentError);
}

TEST_CASE("catalog: every probability measure has unit mass") {
  for (double alpha : {3.0, 8.0, 16.0, 100.0})
    for (double p : {0.0, 0.1, 0.5, 0.9, 1.1, 2.0, 2.5, kE, 2.9}) {
      if (alpha <= std::max({p, q_of_p(p), kE})) continue;
      CHECK(std::abs(catalog(p, alpha).total_mass() - 1.0) < 1e-12);
      CHECK(std::abs(catalog(p, alpha, CatalogKind::ginibre).total_mass() - 1.0) < 1e-12);
    }
}

TEST_CASE("log_potential: examples and quadrature oracle") {
  CHECK(log_potential(unit_atom(), 0.0) == 0.0);
  CHECK(log_potential(unit_atom(), 2.0) == doctest::Approx(std::log(2.0)));
  for (double alpha : {4.0, 10.0})
    for (double s : {0.0, 0.3, 1.0, std::sqrt(alpha)})
      CHECK(log_potential(equilibrium(alpha), s) ==
            doctest::Approx(s * s / (2 * alpha) + 0.5 * std::log(alpha) - 0.5).epsilon(1e-13));

  RandomStream rng(21);
  std::vector<RadialMeasure> ms{catalog(0.0, 10), catalog(0.5, 10), catalog(2.0, 10), catalog(2.0, 10, CatalogKind::ginibre)};
  for (int i = 0; i < 4; ++i) ms.push_back(random_measure(rng, 3.0));
  for (const auto& nu : ms)
    for (int i = 0; i < 20; ++i) {
      const double s = 0.05 + 4.0 * rng.uniform();
      const double want = oracle::potential_by_quadrature(nu, s);
      CHECK(std::abs(log_potential(nu, s) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("log_energy: examples") {
  for (double alpha : {4.0, 10.0}) CHECK(log_energy(equilibrium(alpha)) == doctest::Approx(0.5 * std::log(alpha) - 0.25));
  CHECK(log_energy(unit_atom()) == 0.0);
  CHECK_THROWS_AS(log_energy(RadialMeasure({{0.0, 1.0}}, {})), InfiniteEnergy);
  const double alpha = 10;
  // Sigma = B - I with B = log alpha - 1 on the p < 1 branch
  CHECK(log_energy(catalog(0.0, alpha)) ==
        doctest::Approx(std::log(alpha) - 1 - (0.5 * std::log(alpha) - 0.75 + kE * kE / (4 * alpha * alpha))).epsilon(1e-12));
  RandomStream rng(22);
  for (int i = 0; i < 5; ++i) {
    const auto nu = random_measure(rng, 3.0);
    CHECK(log_energy(nu) == doctest::Approx(energy_oracle(nu)).epsilon(1e-9));
  }
  for (double p : {0.5, 2.0, 4.0}) CHECK(log_energy(catalog(p, alpha)) == doctest::Approx(energy_oracle(catalog(p, alpha))).epsilon(1e-9));
}

TEST_CASE("b_alpha: examples") {
  for (double alpha : {4.0, 10.0}) {
    CHECK(b_alpha(equilibrium(alpha), alpha).value == doctest::Approx(std::log(alpha) - 1).epsilon(1e-12));
    for (double p : {0.0, 0.5, 0.9}) CHECK(b_alpha(catalog(p, 10.0), 10.0).value == doctest::Approx(std::log(10.0) - 1).epsilon(1e-12));
  }
  // sup of log max(1, s) - s^2 / 2 on [0, 1] is 0 at s = 0
  const auto b = b_alpha(unit_atom(), 1.0);
  CHECK(std::abs(b.value) < 1e-14);
  CHECK(b.argmax == 0.0);
  CHECK(b.value == doctest::Approx(oracle::b_grid(unit_atom(), 1.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("b_alpha: restricted sup equals the sup over [0, 10 sqrt(alpha)]") {
  RandomStream rng(23);
  for (double alpha : {4.0, 10.0, 16.0}) {
    std::vector<RadialMeasure> ms{catalog(0.0, alpha), catalog(2.0, alpha), equilibrium(alpha)};
    for (int i = 0; i < 3; ++i) ms.push_back(random_measure(rng, std::sqrt(alpha)));
    for (const auto& nu : ms) {
      const double restricted = b_alpha(nu, alpha).value;
      CHECK(restricted == doctest::Approx(b_alpha_on(nu, alpha, 10 * std::sqrt(alpha)).value).epsilon(1e-12));
      // a grid can only undershoot the sup
      const double grid = oracle::b_grid(nu, alpha, 10 * std::sqrt(alpha), 20000);
      CHECK(grid <= restricted + 1e-10);
      CHECK(grid >= restricted - 1e-3);
    }
  }
}

TEST_CASE("functional_I: examples and quadrature agreement") {
  for (double alpha : {4.0, 10.0}) {
    const auto r = functional_I(equilibrium(alpha), alpha);
    CHECK(r.I_alpha == doctest::Approx(0.5 * std::log(alpha) - 0.75).epsilon(1e-12));
    CHECK(r.I_alpha == r.B_alpha - r.energy);
  }
  const double alpha = 10;
  CHECK(functional_I(catalog(0.0, alpha), alpha).I_alpha ==
        doctest::Approx(0.5 * std::log(alpha) - 0.75 + kE * kE / (4 * alpha * alpha)).epsilon(1e-12));
  for (double a : {8.0, 16.0})
    for (double p : {0.0, 0.25, 0.5, 2.0, 2.5, kE, 4.0}) {
      const auto cf = functional_I(catalog(p, a), a);
      const auto qd = functional_I(catalog(p, a), a, Method::quadrature);
      CHECK(std::abs(cf.I_alpha - minimal_I(p, a)) < 1e-12);
      CHECK(std::abs(qd.I_alpha - minimal_I(p, a)) < 1e-6);
      CHECK(qd.method == Method::quadrature);
    }
}

TEST_CASE("functional_J: both conventions") {
  for (double alpha : {4.0, 10.0}) {
    CHECK(functional_J(equilibrium(alpha), alpha) == doctest::Approx(0.75 - 0.5 * std::log(alpha)).epsilon(1e-12));
    CHECK(functional_J_half(equilibrium(alpha), alpha) == doctest::Approx(0.5 - 0.5 * std::log(alpha)).epsilon(1e-12));
  }
  CHECK(functional_J(unit_atom(), 1.0) == doctest::Approx(1.0));
  RandomStream rng(24);
  for (int i = 0; i < 5; ++i) {
    const double alpha = 10;
    const auto nu = random_measure(rng, 3.0);
    const double want = second_moment_oracle(nu) / alpha - energy_oracle(nu);
    CHECK(functional_J(nu, alpha) == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("jensen_check: both sides agree") {
  auto s = jensen_check(unit_atom(), 2.0);
  CHECK(s.lhs == doctest::Approx(std::log(2.0)));
  CHECK(s.rhs == doctest::Approx(std::log(2.0)));
  s = jensen_check(equilibrium(10.0), std::sqrt(10.0));
  CHECK(s.lhs == doctest::Approx(0.5));
  CHECK(s.rhs == doctest::Approx(0.5));
  RandomStream rng(25);
  for (int i = 0; i < 10; ++i) {
    const auto nu = random_measure(rng, 3.0);
    for (int j = 0; j < 10; ++j) {
      const auto t = jensen_check(nu, 0.1 + 4 * rng.uniform());
      CHECK(std::abs(t.lhs - t.rhs) < 1e-10);
    }
  }
}

TEST_CASE("dirichlet_energy: constant, Gaussian and second-order convergence") {
  TestFunction flat{[](cplx) { return 0.0; }, 1.0, 0.0};
  CHECK(dirichlet_energy(sample_on_grid(flat, 1.0 / 16)) == 0.0);

  TestFunction gauss{[](cplx w) { return std::exp(-std::norm(w)); }, 6.0, 1.0};
  double err[3];
  const double hs[3] = {1.0 / 8, 1.0 / 16, 1.0 / 32};
  for (int i = 0; i < 3; ++i) err[i] = std::abs(dirichlet_energy(sample_on_grid(gauss, hs[i])) - oracle::kPi);
  // second order: Richardson removes the h^2 term
  const double rich = (4 * dirichlet_energy(sample_on_grid(gauss, hs[2])) - dirichlet_energy(sample_on_grid(gauss, hs[1]))) / 3;
  CHECK(rich == doctest::Approx(oracle::kPi).epsilon(1e-5));
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.15));

  TestFunction wide{[](cplx w) { return 1.0 + 0 * w.real(); }, 1.0, 0.0};
  CHECK_THROWS_AS(dirichlet_energy(sample_on_grid(wide, 1.0 / 16)), ArgumentError);
  CHECK_THROWS_AS(dirichlet_energy(sample_on_grid(gauss, 0.2)), ArgumentError);
}

TEST_CASE("lin_stats_gap_bound") {
  const double alpha = 10;
  const auto mu = catalog(0.0, alpha);
  const auto phi = radial_bump(0.5 * (1 + std::sqrt(kE)), 0.5 * (std::sqrt(kE) - 1));
  const auto same = lin_stats_gap_bound(mu, mu, phi);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == doctest::Approx(0.0).epsilon(1e-6));
  const auto s = lin_stats_gap_bound(equilibrium(alpha), mu, phi);
  CHECK(s.lhs > 0.0);
  CHECK(s.lhs < s.rhs);

  RandomStream rng(26);
  const double ps[] = {0.0, 0.25, 0.5, 2.0, 2.5, 3.0, 4.0};
  int held = 0;
  for (int i = 0; i < 100; ++i) {
    const double a = 8 + 8 * rng.uniform();
    const auto kind = [&] { return rng.uniform() < 0.5 ? CatalogKind::gef_constrained : CatalogKind::ginibre; };
    const auto nu = catalog(ps[rng.next_u64() % 7], a, kind());
    const auto m2 = catalog(ps[rng.next_u64() % 7], a, kind());
    const auto f = bump(std::polar(2 * rng.uniform(), 2 * oracle::kPi * rng.uniform()), 0.5 + rng.uniform());
    const auto t = lin_stats_gap_bound(nu, m2, f, 1.0 / 16);
    if (t.lhs <= t.rhs * (1 + 1e-6)) ++held;
  }
  CHECK(held == 100);
}

TEST_CASE("g_nu is nonpositive at 1000 probe radii") {
  RandomStream rng(27);
  for (double alpha : {8.0, 16.0}) {
    std::vector<RadialMeasure> ms{equilibrium(alpha)};
    for (double p : {0.0, 0.5, 2.0, 2.5, 4.0}) {
      ms.push_back(catalog(p, alpha));
      ms.push_back(catalog(p, alpha, CatalogKind::ginibre));
    }
    for (int i = 0; i < 5; ++i) ms.push_back(random_measure(rng, 0.999 * std::sqrt(alpha)));
    for (const auto& nu : ms)
      for (int i = 0; i < 1000; ++i) CHECK(g_nu(nu, alpha, std::sqrt(alpha) * i / 999.0) <= 1e-10);
  }
}

TEST_CASE("catalog minimizers beat feasible perturbations") {
  const double alpha = 10;
  for (double p : {0.0, 0.5, 2.0, 4.0}) {
    const auto mu = catalog(p, alpha);
    const double I_mu = functional_I(mu, alpha).I_alpha;
    for (int i = 0; i < 50; ++i) {
      const auto g = random_feasible_grid(alpha, 120, Constraint::for_p(p), 9000 + 100 * static_cast<int>(p * 10) + i);
      const auto nu = g.to_measure(g.default_smoothing());
      // the mixture stays in the convex constraint set and probes near the minimizer
      const double w = 0.02 * (1 + i % 5);
      const auto probe = i % 2 ? nu : mix(mu, 1 - w, nu, w);
      CHECK(functional_I(probe, alpha).I_alpha >= I_mu - 1e-9);
    }
  }
}
