#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pantograph/errors.hpp"
#include "pantograph/series.hpp"

using namespace pantograph;

namespace {

const DelaySpec kExp({1.0}, {1.0});
const DelaySpec kHalf({0.5, 0.5}, {1.0, 0.5});

// 50-digit partial sums of the series at x = 1 for a = (1/2, 1/2), q = (1, 1/2).
constexpr double kHalfAtOne = 2.465386702684185572;

}  // namespace

TEST_CASE("DelaySpec validation") {
  CHECK_NOTHROW(DelaySpec({2.0}, {1.0}));
  CHECK_NOTHROW(DelaySpec({1.0, 1.0, 1.0}, {1.0, 0.5, 0.5}));  // duplicate ratios are fine
  CHECK_THROWS_AS(DelaySpec({}, {}), DomainError);
  CHECK_THROWS_AS(DelaySpec({1.0}, {0.9}), DomainError);
  CHECK_THROWS_AS(DelaySpec({1.0, 1.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(DelaySpec({1.0, 1.0}, {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(DelaySpec({1.0, NAN}, {1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(DelaySpec({1.0, 1.0}, {1.0, INFINITY}), DomainError);
  try {
    DelaySpec({0.5, 0.5}, {1.0, 1.0});
    FAIL("q_1 = 1 must be rejected");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("q[1]") != std::string::npos);
  }
}

TEST_CASE("coefficient_product examples") {
  CHECK(coefficient_product(kExp, 5) == 1.0);
  CHECK(coefficient_product(kHalf, 0) == 1.0);
  CHECK(coefficient_product(kHalf, 2) == 0.75);
  // 1 * 3/4 * 5/8 * 9/16 = 135/512
  CHECK(oracle::coefficient_product({0.5, 0.5}, {1.0, 0.5}, 4) == oracle::cpp_rational(135, 512));
  CHECK(coefficient_product(kHalf, 4) == 0.263671875);
}

TEST_CASE("coefficient recurrence matches exact rationals") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-24, 24);
  std::uniform_int_distribution<int> den(1, 15);
  for (int trial = 0; trial < 40; ++trial) {
    // Dyadic inputs keep the floating-point products short enough to compare.
    std::vector<double> a{num(rng) / 16.0};
    std::vector<double> q{1.0};
    const int n = trial % 4;
    for (int i = 0; i < n; ++i) {
      a.push_back(num(rng) / 16.0);
      q.push_back(den(rng) / 16.0);
    }
    const DelaySpec spec(a, q);
    CoefficientStream stream(spec);
    CHECK(stream.product() == 1.0);
    for (int m = 0; m < 12; ++m) {
      const double before = stream.product();
      const double factor = stream.factor();
      stream.advance();
      CHECK(stream.product() == before * factor);
      CHECK(stream.index() == static_cast<std::size_t>(m + 1));
      const double expected = oracle::coefficient_product(a, q, m + 1).convert_to<double>();
      CHECK(stream.product() == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("coefficient overflow names the index") {
  const DelaySpec big({1e200}, {1.0});
  try {
    coefficient_product(big, 3);
    FAIL("expected overflow");
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("m = 2") != std::string::npos);
  }
}

TEST_CASE("eval examples") {
  const auto e = eval(kExp, 1.0, 1e-12);
  CHECK(std::abs(e.value - std::numbers::e) <= e.tail_bound + 1e-15);
  CHECK(e.tail_bound <= 1e-12);
  CHECK(e.terms_used >= 1);

  const auto at0 = eval(kHalf, 0.0, 1e-12);
  CHECK(at0.value == 1.0);
  CHECK(at0.terms_used == 1);
  CHECK(at0.tail_bound == 0.0);

  CHECK(oracle::series({0.5, 0.5}, {1.0, 0.5}, 1.0).convert_to<double>() ==
        doctest::Approx(kHalfAtOne).epsilon(1e-16));
  const auto v = eval(kHalf, 1.0, 1e-12);
  CHECK(std::abs(v.value - kHalfAtOne) <= v.tail_bound + 1e-14);
  CHECK(std::abs(v.value - 2.465387) <= 1e-5);
}

TEST_CASE("eval agrees with 50-digit partial sums on random specs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xs(-4.0, 6.0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = oracle::random_spec(rng, 3, -1.5, 1.5);
    const DelaySpec spec(s.a, s.q);
    const double x = xs(rng);
    const auto v = eval(spec, x, 1e-13);
    const double ref = oracle::series(s.a, s.q, x).convert_to<double>();
    const double scale = std::exp(spec.abs_sum() * std::abs(x));
    CHECK(std::abs(v.value - ref) <= v.tail_bound + 1e-14 * scale);
  }
}

TEST_CASE("tolerance handling") {
  CHECK_THROWS_AS(eval(kHalf, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(eval(kHalf, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(eval(kHalf, NAN, 1e-12), DomainError);

  SeriesOptions tight;
  tight.max_terms = 5;
  try {
    eval(kHalf, 3.0, 1e-12, tight);
    FAIL("expected truncation");
  } catch (const TruncationError& e) {
    CHECK(e.achieved_tail() > 1e-12);
    CHECK(e.terms() == 5);
  }

  for (double tol : {1e-3, 1e-8, 1e-14}) {
    const auto v = eval(kHalf, 2.0, tol);
    CHECK(v.tail_bound <= tol);
    CHECK(std::isfinite(v.tail_bound));
  }
}

TEST_CASE("exponential tail bound is an upper bound") {
  for (double u : {0.5, 3.0, 10.0}) {
    for (std::size_t last : {12u, 20u, 40u}) {
      if (last + 2 <= u) continue;
      oracle::Big exact = 0;
      oracle::Big term = 1;
      for (int m = 1; m < 400; ++m) {
        term *= oracle::Big(u) / m;
        if (m > static_cast<int>(last)) exact += term;
      }
      CHECK(exponential_tail(u, last) >= exact.convert_to<double>());
      CHECK(exponential_tail(u, last) <= 2.0 * exact.convert_to<double>());
    }
  }
  CHECK(exponential_tail(0.0, 0) == 0.0);
  CHECK(std::isinf(exponential_tail(10.0, 3)));
}

TEST_CASE("single-term spec degenerates to the exponential") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a0 = coef(rng);
    const double x = xs(rng);
    const auto v = eval(DelaySpec({a0}, {1.0}), x, 1e-14);
    CHECK(std::abs(v.value - std::exp(a0 * x)) <= v.tail_bound + 1e-13 * std::exp(std::abs(a0 * x)));
  }
}

TEST_CASE("negative arguments are accepted") {
  const auto v = eval(kExp, -2.0, 1e-14);
  CHECK(v.value == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  const auto w = eval(kHalf, -1.5, 1e-14);
  CHECK(w.value == doctest::Approx(oracle::series({0.5, 0.5}, {1.0, 0.5}, -1.5).convert_to<double>())
                       .epsilon(1e-13));
}

TEST_CASE("eval_derivative examples") {
  const auto d3 = eval_derivative(kExp, 1.0, 3, 1e-12);
  CHECK(std::abs(d3.value - std::numbers::e) <= d3.tail_bound + 1e-14);

  CHECK(eval_derivative(kHalf, 0.0, 1, 1e-12).value == 1.0);

  const auto d1 = eval_derivative(kHalf, 1.0, 1, 1e-13);
  const double rhs = 0.5 * eval(kHalf, 1.0, 1e-13).value + 0.5 * eval(kHalf, 0.5, 1e-13).value;
  CHECK(std::abs(d1.value - rhs) <= 1e-9);
}

TEST_CASE("derivative of order zero is eval bit for bit") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(-5.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_spec(rng, 3, -2.0, 2.0);
    const DelaySpec spec(s.a, s.q);
    const double x = xs(rng);
    const auto a = eval(spec, x, 1e-12);
    const auto b = eval_derivative(spec, x, 0, 1e-12);
    CHECK(a.value == b.value);
    CHECK(a.terms_used == b.terms_used);
    CHECK(a.tail_bound == b.tail_bound);
  }
}

TEST_CASE("series satisfies the delay equation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> xs(0.0, 5.0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = oracle::random_spec(rng, 3, -1.5, 1.5);
    const DelaySpec spec(s.a, s.q);
    const double x = xs(rng);
    const auto d = eval_derivative(spec, x, 1, 1e-14);
    double rhs = 0.0;
    double tails = d.tail_bound;
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      const auto v = eval(spec, s.q[i] * x, 1e-14);
      rhs += s.a[i] * v.value;
      tails += std::abs(s.a[i]) * v.tail_bound;
    }
    CHECK(std::abs(d.value - rhs) <= tails + 1e-10);
  }
}

TEST_CASE("derivative matches a central difference") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> xs(-2.0, 3.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_spec(rng, 3, -1.0, 1.0);
    const DelaySpec spec(s.a, s.q);
    const double x = xs(rng);
    const auto d = eval_derivative(spec, x, 1, 1e-15);
    const double fd =
        (eval(spec, x + h, 1e-15).value - eval(spec, x - h, 1e-15).value) / (2.0 * h);
    CHECK(std::abs(d.value - fd) <= 1e-6 * (1.0 + std::abs(d.value)));
  }
}

TEST_CASE("eval_addition examples") {
  const auto single = eval_addition(kHalf, 0.0, 1.3, 0, 1e-12);
  CHECK(single.value == eval(kHalf, 1.3, 1e-12).value);

  const auto e2 = eval_addition(kExp, 1.0, 1.0, 30, 1e-14);
  CHECK(std::abs(e2.value - std::exp(2.0)) <= 1e-10);

  const auto split = eval_addition(kHalf, 0.4, 0.6, 25, 1e-14);
  CHECK(std::abs(split.value - eval(kHalf, 1.0, 1e-14).value) <= 1e-8);
  CHECK(split.tail_bound <= 1e-8);
}

TEST_CASE("addition theorem converges as outer terms grow") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = oracle::random_spec(rng, 3, -0.5, 0.5);
    const DelaySpec spec(s.a, s.q);
    const double x = xs(rng);
    const double y = xs(rng);
    const double target = eval(spec, x + y, 1e-15).value;
    double previous_bound = INFINITY;
    for (unsigned r : {2u, 5u, 10u, 20u, 30u}) {
      const auto v = eval_addition(spec, x, y, r, 1e-15);
      CHECK(std::abs(v.value - target) <= v.tail_bound + 1e-13);
      CHECK(v.tail_bound <= previous_bound);
      previous_bound = v.tail_bound;
    }
    CHECK(std::abs(eval_addition(spec, x, y, 30, 1e-15).value - target) <= 1e-8);
  }
}

TEST_CASE("eval_complex examples") {
  const auto euler = eval_complex(kExp, {0.0, std::numbers::pi}, 1e-14);
  CHECK(std::abs(euler.value.re + 1.0) <= 1e-12);
  CHECK(std::abs(euler.value.im) <= 1e-12);

  const auto real_axis = eval_complex(kHalf, {1.7, 0.0}, 1e-14);
  CHECK(real_axis.value.re == doctest::Approx(eval(kHalf, 1.7, 1e-14).value).epsilon(1e-14));
  CHECK(real_axis.value.im == 0.0);

  const auto at_i = eval_complex(kHalf, {0.0, 1.0}, 1e-14);
  const auto ref = oracle::series_complex({0.5, 0.5}, {1.0, 0.5}, 0.0, 1.0);
  CHECK(std::abs(at_i.value.re - ref.real().convert_to<double>()) <= 1e-10);
  CHECK(std::abs(at_i.value.im - ref.imag().convert_to<double>()) <= 1e-10);
  CHECK(std::hypot(at_i.value.re, at_i.value.im) <= std::numbers::e);
}

TEST_CASE("sandwich_bounds examples and hypothesis") {
  const auto [lo2, hi2] = sandwich_bounds(kExp, 2.0);
  CHECK(lo2 == doctest::Approx(std::exp(2.0)));
  CHECK(hi2 == doctest::Approx(std::exp(2.0)));

  const auto [lo, hi] = sandwich_bounds(kHalf, 1.0);
  CHECK(lo == doctest::Approx(1.648721).epsilon(1e-6));
  CHECK(hi == doctest::Approx(2.718282).epsilon(1e-6));
  CHECK(lo <= kHalfAtOne);
  CHECK(kHalfAtOne <= hi);

  CHECK_THROWS_AS(sandwich_bounds(DelaySpec({0.5, -0.1}, {1.0, 0.5}), 1.0), DomainError);
  CHECK_THROWS_AS(sandwich_bounds(kHalf, -1.0), DomainError);
}

TEST_CASE("sandwich holds for random nonnegative specs") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> xs(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_spec(rng, 3, 0.0, 1.0);
    const DelaySpec spec(s.a, s.q);
    const double x = xs(rng);
    const auto v = eval(spec, x, 1e-12);
    const auto [lo, hi] = sandwich_bounds(spec, x);
    const double eps = v.tail_bound + 1e-12 * hi;
    CHECK(lo - eps <= v.value);
    CHECK(v.value <= hi + eps);
  }
}

TEST_CASE("term magnitudes decrease past the crossover index") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> xs(-8.0, 8.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = oracle::random_spec(rng, 3, -2.0, 2.0);
    const DelaySpec spec(s.a, s.q);
    const double x = xs(rng);
    const std::size_t start = decreasing_from(spec, x);
    CoefficientStream stream(spec);
    double term = 1.0;  // x^m/m! (a;q)_m
    for (std::size_t m = 0; m < start + 60; ++m) {
      const double next = term * x / static_cast<double>(m + 1) * stream.factor();
      stream.advance();
      if (m >= start && term != 0.0 && next != 0.0) {
        CHECK(std::abs(next / term) < 1.0);
      }
      term = next;
    }
  }
}

TEST_CASE("eval_scaled multiplies by the initial value") {
  const auto v = eval_scaled(kHalf, -3.0, 1.0, 1e-12);
  CHECK(v.value == doctest::Approx(-3.0 * kHalfAtOne).epsilon(1e-13));
  CHECK(v.tail_bound <= 1e-12);
  CHECK(eval_scaled(kHalf, 0.0, 1.0, 1e-12).value == 0.0);
}
