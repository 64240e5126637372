#include <doctest.h>

#include <cmath>

#include "gefhole/errors.hpp"
#include "gefhole/series.hpp"
#include "oracles.hpp"

using namespace gefhole;
using oracle::cplx;

TEST_CASE("sample_coeffs: unit second moment and exponential tail") {
  RandomStream rng(1);
  const int n = 100000;
  double m2 = 0;
  long tail = 0;
  for (int i = 0; i < n; ++i) {
    const auto c = sample_coeffs(0, rng);
    REQUIRE(c.xi.size() == 1);
    const double a = std::abs(c.xi[0]);
    m2 += a * a;
    if (a >= 1.5) ++tail;
  }
  CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.02));
  const double p = std::exp(-2.25);
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(static_cast<double>(tail) / n - p) < 3 * se);
}

TEST_CASE("sample_coeffs: split streams are reproducible") {
  RandomStream a(9), b(9);
  RandomStream sa = a.split(4), sb = b.split(4);
  a.uniform();  // parent draws must not affect children
  const auto ca = sample_coeffs(10, sa), cb = sample_coeffs(10, sb);
  for (int k = 0; k <= 10; ++k) CHECK(ca.xi[k] == cb.xi[k]);
}

TEST_CASE("log_b: values, recurrence and bounds") {
  CHECK(log_b(0, 3.3) == 0.0);
  CHECK(log_b(4, 2.0) == doctest::Approx(4 * std::log(2.0) - 0.5 * std::log(24.0)).epsilon(1e-15));
  for (double r : {2.0, 5.0, 10.0})
    for (int k = 1; k <= 200; ++k) {
      const double lb = log_b(k, r);
      const double main = 0.5 * k * std::log(oracle::kE * r * r / k);
      CHECK(lb <= main + 1e-12);
      CHECK(lb >= main - std::log(2.0 * std::pow(k, 0.25)) - 1e-12);
      CHECK(log_b(k + 1, r) - lb == doctest::Approx(std::log(r) - 0.5 * std::log(k + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("stirling_bounds bracket log k!") {
  const auto b1 = stirling_bounds(1);
  CHECK(std::exp(b1.lo) == doctest::Approx(1 / oracle::kE));
  CHECK(std::exp(b1.hi) == doctest::Approx(3 / oracle::kE));
  CHECK(b1.lo <= 0.0);
  CHECK(b1.hi >= 0.0);
  const auto b10 = stirling_bounds(10);
  CHECK(b10.lo <= std::log(3628800.0));
  CHECK(b10.hi >= std::log(3628800.0));
  for (int k = 1; k <= 2000; ++k) {
    const auto b = stirling_bounds(k);
    const double lf = std::lgamma(k + 1.0);
    CHECK(b.lo <= lf + 1e-12);
    CHECK(lf <= b.hi + 1e-12);
  }
}

TEST_CASE("eval_poly: trivial cases, reference match, linearity") {
  CoeffVector one;
  one.xi.assign(5, 0.0);
  one.xi[0] = 1.0;
  for (cplx z : {cplx{0, 0}, cplx{3, 4}, cplx{-20, 1}}) CHECK(std::abs(eval_poly(one, z).value() - 1.0) < 1e-15);

  RandomStream rng(3);
  for (int t = 0; t < 200; ++t) {
    auto c = sample_coeffs(1 + static_cast<int>(rng.next_u64() % 60), rng, 0.5 + rng.uniform());
    const cplx z = 3.0 * rng.complex_gaussian();
    CHECK(std::abs(eval_poly(c, 0.0).value() - c.xi[0]) < 1e-15);
    const cplx ref = oracle::eval_reference(c, z);
    CHECK(std::abs(eval_poly(c, z).value() - ref) <= 1e-12 * std::abs(ref));

    auto d = sample_coeffs(c.degree(), rng, c.scale);
    CoeffVector s = c;
    for (int k = 0; k <= c.degree(); ++k) s.xi[k] += d.xi[k];
    const cplx lhs = eval_poly(s, z).value(), rhs = eval_poly(c, z).value() + eval_poly(d, z).value();
    // cancellation can only hurt relative to the larger summand
    const double scale = std::max({std::abs(eval_poly(c, z).value()), std::abs(eval_poly(d, z).value()), 1e-300});
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("tail_envelope: arithmetic") {
  CHECK(tail_envelope(37, 1.5, 16 * 1.5 * 1.5) == doctest::Approx(0.0));
  CHECK(tail_envelope(100, 1.0, 64.0) == doctest::Approx(50 * std::log(0.25)));
}

TEST_CASE("tail_envelope refuses lambda below 16") {
  // at r = 4 the plan has lambda = log 4, outside the range where the envelope is claimed
  CHECK_THROWS_AS(tail_envelope(make_truncation_plan(4.0).N0, 1.0, std::log(4.0)), ArgumentError);
  CHECK_THROWS_AS(tail_envelope(100, 0.5, 64.0), ArgumentError);
  CHECK_THROWS_AS(tail_envelope(100, 5.0, 64.0), ArgumentError);
}

TEST_CASE("tail_envelope bounds the tail on |z| = 2Br for most samples") {
  // r = 4 with lambda = 17 decoupled from log r, so the precondition holds and N = ceil(lambda r^2)
  const double r = 4.0, B = 1.0, lambda = 17.0;
  const int N = static_cast<int>(std::ceil(lambda * r * r));
  const double env = tail_envelope(N, B, lambda);
  RandomStream rng(5);
  int below = 0, total = 0;
  for (int s = 0; s < 1000; ++s) {
    const auto c = sample_coeffs(5 * N, rng);
    CoeffVector tail = c;
    for (int k = 0; k <= N; ++k) tail.xi[k] = 0.0;
    double worst = -INFINITY;
    for (int j = 0; j < 64; ++j) worst = std::max(worst, eval_poly(tail, std::polar(2 * B * r, 2 * oracle::kPi * j / 64)).log_abs);
    ++total;
    if (worst <= env) ++below;
  }
  CHECK(below >= 0.99 * total);
}

TEST_CASE("make_truncation_plan") {
  const auto p = make_truncation_plan(10.0, 4.0);
  CHECK(p.lambda == doctest::Approx(std::log(10.0)));
  CHECK(p.N0 == 231);
  CHECK(p.N1 == 461);
  CHECK(p.t == doctest::Approx(1e-4));
  CHECK(make_truncation_plan(std::exp(2.0)).lambda == doctest::Approx(2.0));
  const auto q = make_truncation_plan(20.0);
  CHECK(std::abs(static_cast<double>(q.N1) / q.N0 - 2.0) < 2.0 / q.N0);
  CHECK_THROWS_AS(make_truncation_plan(2.0), ArgumentError);
}

TEST_CASE("regularity_check: degree selection and failure rate") {
  const auto plan = make_truncation_plan(5.0);
  CoeffVector c;
  c.xi.assign(plan.N0 + 1, 0.0);
  c.xi[plan.N0] = 1.0;
  auto rep = regularity_check(c, plan);
  REQUIRE(rep.selected_degree.has_value());
  CHECK(*rep.selected_degree == plan.N0);

  CoeffVector tiny;
  tiny.xi.assign(plan.N1 + 1, std::exp(-2 * 25.0));
  rep = regularity_check(tiny, plan);
  CHECK_FALSE(rep.leading_bound);
  CHECK_FALSE(rep.selected_degree.has_value());

  RandomStream rng(7);
  int fails = 0;
  for (int i = 0; i < 10000; ++i)
    if (!regularity_check(sample_coeffs(plan.N1, rng), plan).all()) ++fails;
  CHECK(fails < 10);
}
