#include <doctest.h>

#include <cmath>

#include "gefhole/constants.hpp"
#include "gefhole/errors.hpp"
#include "gefhole/series.hpp"
#include "oracles.hpp"

using namespace gefhole;

namespace {

double hrel(double x) { return x > 0 ? x * (std::log(x) - 1) : 0.0; }

double z_by_quadrature(double p) {
  const double q = q_of_p(p);
  // x log x has an integrable endpoint at 0 only
  return std::abs(oracle::gk([](double x) { return x > 0 ? x * std::log(x) : 0.0; }, std::min(p, q), std::max(p, q)));
}

}  // namespace

TEST_CASE("q_of_p: exact endpoints") {
  CHECK(q_of_p(0.0) == oracle::kE);
  CHECK(q_of_p(1.0) == 1.0);
  CHECK(q_of_p(oracle::kE) == 0.0);
  CHECK(q_of_p(5.0) == 0.0);
}

TEST_CASE("q_of_p: residual and bisection oracle") {
  for (int i = 1; i < 1000; ++i) {
    const double p = oracle::kE * i / 1000.0;
    if (std::abs(p - 1.0) < 1e-12) continue;
    const double q = q_of_p(p);
    CHECK(std::abs(hrel(q) - hrel(p)) < 1e-12);
    CHECK(q == doctest::Approx(oracle::q_bisect(p)).epsilon(1e-10));
    if (p < 1) {
      CHECK(q > 1.0);
      CHECK(q <= oracle::kE);
    } else {
      CHECK(q >= 0.0);
      CHECK(q < 1.0);
    }
  }
  CHECK(std::abs(q_of_p(0.5) - oracle::q_bisect(0.5)) < 1e-12);
}

TEST_CASE("q_of_p: involution and strict monotonicity on each branch") {
  for (double p : {0.1, 0.3, 0.5, 0.9, 1.2, 2.0, 2.6}) CHECK(q_of_p(q_of_p(p)) == doctest::Approx(p).epsilon(1e-10));
  double prev = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const double q = q_of_p(i / 1000.0);
    CHECK(q < prev);
    prev = q;
  }
  prev = INFINITY;
  for (int i = 1; i <= 1000; ++i) {
    const double q = q_of_p(1.0 + (oracle::kE - 1.0) * i / 1000.0);
    CHECK(q < prev);
    prev = q;
  }
}

TEST_CASE("z_const: values") {
  CHECK(z_const(0.0) == doctest::Approx(oracle::kE * oracle::kE / 4).epsilon(1e-15));
  CHECK(z_const(0.0) == doctest::Approx(1.84726402).epsilon(1e-8));
  CHECK(z_const(1.0) == 0.0);
  CHECK(std::abs(z_const(2.0) - z_by_quadrature(2.0)) < 1e-10);
  CHECK(z_const(4.0) == doctest::Approx(4.0 * (2 * std::log(4.0) - 1)).epsilon(1e-14));
  for (double p : {0.05, 0.5, 0.95, 1.5, 2.5, 3.0, 6.0}) CHECK(std::abs(z_const(p) - z_by_quadrature(p)) < 1e-10);
}

TEST_CASE("z_const: symmetry of the pair, sign and the p -> 0 limit") {
  for (int i = 1; i < 100; ++i) {
    const double p = i / 100.0;
    CHECK(z_const(p) == doctest::Approx(z_const(q_of_p(p))).epsilon(1e-10));
    CHECK(z_const(p) > 0.0);
  }
  // q(p) = e - p (1 - log p) + ..., so Z_p approaches e^2/4 only at rate e p (1 - log p)
  for (double p : {1e-4, 1e-6, 1e-8}) {
    const double gap = oracle::kE * oracle::kE / 4 - z_const(p);
    CHECK(gap == doctest::Approx(oracle::kE * p * (1 - std::log(p))).epsilon(1e-2));
  }
  CHECK(std::abs(z_const(1e-8) - oracle::kE * oracle::kE / 4) < 1e-6);
  const auto rc = rate_constant(0.5);
  CHECK(rc.q == q_of_p(0.5));
  CHECK(rc.Z == z_const(0.5));
  CHECK(rc.branch == Branch::deficit);
  CHECK(rate_constant(0.0).branch == Branch::hole);
  CHECK(rate_constant(2.0).branch == Branch::overcrowd);
  CHECK(rate_constant(3.0).branch == Branch::saturated);
}

TEST_CASE("ginibre_g: values and quadrature") {
  CHECK(ginibre_g(1.0) == 0.0);
  CHECK(ginibre_g(0.0) == doctest::Approx(0.25).epsilon(1e-15));
  auto quad = [](double p) {
    return std::abs(oracle::gk([](double x) { return 1 - x + (x > 0 ? x * std::log(x) : 0.0); }, std::min(1.0, p), std::max(1.0, p)));
  };
  for (double p : {0.0, 0.3, 2.0, 3.0, 7.5}) CHECK(std::abs(ginibre_g(p) - quad(p)) < 1e-10);
}

TEST_CASE("jlm_exponent") {
  CHECK(jlm_exponent(1.0) == 1.0);
  CHECK(3 * 1.0 - 2 == jlm_exponent(1.0));
  CHECK(jlm_exponent(2.0) == 4.0);
  CHECK(2 * 2.0 == jlm_exponent(2.0));
  CHECK(jlm_exponent(1.5) == 2.5);
  CHECK(jlm_exponent(0.75) == 0.5);
  CHECK(jlm_exponent(3.0) == 6.0);
  CHECK_THROWS_AS(jlm_exponent(0.5), ArgumentError);
}

TEST_CASE("moderate_rate") {
  CHECK(moderate_rate(1.0, 1.5) == doctest::Approx(2.0 / 3.0));
  CHECK(moderate_rate(3.0, 1.5) == doctest::Approx(18.0));
  CHECK(moderate_rate(1e-8, 1.5) < 1e-20);
  CHECK_THROWS_AS(moderate_rate(1.0, 1.2), ArgumentError);
  CHECK_THROWS_AS(moderate_rate(1.0, 2.0), ArgumentError);
  CHECK_THROWS_AS(moderate_rate(0.0, 1.5), ArgumentError);
}

TEST_CASE("main_term_logratio: values") {
  CHECK(main_term_logratio(0.5, 50, 10.0) == 0.0);
  const double want = (0.5 * 50 * std::log(100.0) - 0.5 * std::lgamma(51.0)) - (0.5 * 120 * std::log(100.0) - 0.5 * std::lgamma(121.0));
  CHECK(main_term_logratio(0.5, 120, 10.0) == doctest::Approx(want).epsilon(1e-13));
  CHECK_THROWS_AS(main_term_logratio(0.5, 0, 10.0), ArgumentError);
}

TEST_CASE("main_term_bracket: two-sided form holds on the full sweep") {
  int checked = 0;
  for (double r : {5.0, 10.0, 20.0})
    for (double p : {0.0, 0.5, 2.0, 4.0})
      for (int k = 1; k <= 4 * r * r; ++k) {
        const auto b = main_term_bracket(p, k, r);
        CHECK(b.holds());
        ++checked;
      }
  CHECK(checked > 2000);
}

TEST_CASE("main_term_bracket: the symmetric form fails at k = 1 for large k0") {
  // |dev| <= 2 log(k + 1) cannot hold: the k0! Stirling term contributes -(1/2) log(2 pi k0)
  for (auto [p, r] : {std::pair{2.0, 20.0}, std::pair{4.0, 10.0}, std::pair{4.0, 20.0}}) {
    const auto b = main_term_bracket(p, 1, r);
    CHECK(std::abs(b.deviation) > 2.0 * std::log(2.0));
    CHECK(b.holds());
  }
}
