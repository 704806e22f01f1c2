#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pantograph/errors.hpp"
#include "pantograph/fractional.hpp"

using namespace pantograph;

namespace {

const DelaySpec kHalf({0.5, 0.5}, {1.0, 0.5});

// E_{1/2}(1) = e erfc(-1), confirmed by 50-digit partial sums.
constexpr double kMlHalfAtOne = 5.008980080762283466;

}  // namespace

TEST_CASE("FractionalOrder validation") {
  CHECK_NOTHROW(FractionalOrder(0.5));
  CHECK_NOTHROW(FractionalOrder(1.7));
  CHECK_THROWS_AS(FractionalOrder(0.0), DomainError);
  CHECK_THROWS_AS(FractionalOrder(-0.5), DomainError);
  CHECK_THROWS_AS(FractionalOrder(NAN), DomainError);
}

TEST_CASE("log_gamma examples") {
  CHECK(log_gamma(1.0) == 0.0);
  CHECK(log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-15));
  CHECK(log_gamma(6.0) == doctest::Approx(std::log(120.0)).epsilon(1e-15));
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("log_gamma relative accuracy against 50-digit reference") {
  // Sample away from the zeros at 1 and 2, where relative error is meaningless.
  for (double x : {0.01, 0.1, 0.3, 0.5, 0.75, 1.5, 2.5, 3.3, 7.25, 12.5, 33.1, 101.0, 250.5}) {
    const double ref = boost::math::lgamma(oracle::Big(x)).convert_to<double>();
    CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::abs(ref));
  }
}

TEST_CASE("FracCoefficientStream") {
  const FracCoefficientStream stream(kHalf, FractionalOrder(0.5));
  CHECK(stream.product() == 1.0);
  FracCoefficientStream s(kHalf, FractionalOrder(0.5));
  for (int m = 0; m < 10; ++m) {
    double expected_factor = 0.5 + 0.5 * std::pow(0.5, 0.5 * m);
    CHECK(s.factor() == doctest::Approx(expected_factor).epsilon(1e-14));
    const double before = s.product();
    const double f = s.factor();
    s.advance();
    CHECK(s.product() == before * f);
  }
}

TEST_CASE("mittag_leffler examples") {
  const auto e = mittag_leffler(FractionalOrder(1.0), 1.0, 1e-14);
  CHECK(e.value == doctest::Approx(std::numbers::e).epsilon(1e-14));
  CHECK(mittag_leffler(FractionalOrder(1.0), 0.0, 1e-14).value == 1.0);
  CHECK(mittag_leffler(FractionalOrder(0.5), 0.0, 1e-14).value == 1.0);

  CHECK(oracle::mittag_leffler(0.5, 1.0).convert_to<double>() ==
        doctest::Approx(kMlHalfAtOne).epsilon(1e-15));
  CHECK(oracle::mittag_leffler_half_closed_form(1.0).convert_to<double>() ==
        doctest::Approx(kMlHalfAtOne).epsilon(1e-15));
  const auto half = mittag_leffler(FractionalOrder(0.5), 1.0, 1e-14);
  CHECK(std::abs(half.value - kMlHalfAtOne) <= 1e-12);
}

TEST_CASE("mittag_leffler matches 50-digit sums over the working range") {
  for (double alpha : {0.3, 0.5, 0.8, 1.3, 2.0}) {
    for (double x : {-3.0, -0.5, 0.25, 1.0, 2.5, 5.0}) {
      const auto v = mittag_leffler(FractionalOrder(alpha), x, 1e-14);
      const double ref = oracle::mittag_leffler(alpha, x).convert_to<double>();
      // Negative arguments cancel: rounding scales with the sum of |terms|.
      const double scale = oracle::mittag_leffler(alpha, std::abs(x)).convert_to<double>();
      CAPTURE(alpha);
      CAPTURE(x);
      CHECK(std::abs(v.value - ref) <= v.tail_bound + 1e-13 * scale);
    }
  }
  for (double x : {-2.0, 0.7, 3.0}) {
    const double ref = oracle::mittag_leffler_half_closed_form(x).convert_to<double>();
    CHECK(mittag_leffler(FractionalOrder(0.5), x, 1e-14).value ==
          doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("mittag_leffler truncation budget") {
  SeriesOptions tight;
  tight.max_terms = 4;
  CHECK_THROWS_AS(mittag_leffler(FractionalOrder(0.5), 3.0, 1e-12, tight), TruncationError);
}

TEST_CASE("eval_frac examples") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> xs(0.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = oracle::random_spec(rng, 3, -1.5, 1.5);
    const DelaySpec spec(s.a, s.q);
    const double x = xs(rng);
    const auto f = eval_frac(spec, FractionalOrder(1.0), x, 1e-13);
    const auto c = eval(spec, x, 1e-13);
    CHECK(std::abs(f.value - c.value) <= 1e-12 + f.tail_bound + c.tail_bound);
  }

  for (double a0 : {-1.2, 0.4, 1.5}) {
    for (double x : {0.3, 1.0, 2.2}) {
      const auto f = eval_frac(DelaySpec({a0}, {1.0}), FractionalOrder(0.5), x, 1e-13);
      const auto m = mittag_leffler(FractionalOrder(0.5), a0 * std::sqrt(x), 1e-13);
      CHECK(std::abs(f.value - m.value) <= f.tail_bound + m.tail_bound + 1e-12 * std::abs(m.value));
    }
  }

  const auto v = eval_frac(kHalf, FractionalOrder(0.5), 1.0, 1e-13);
  const double ref = oracle::frac_series({0.5, 0.5}, {1.0, 0.5}, 0.5, 1.0).convert_to<double>();
  CHECK(std::abs(v.value - ref) <= v.tail_bound + 1e-12);
  CHECK(v.value >= mittag_leffler(FractionalOrder(0.5), 0.5, 1e-13).value);
  CHECK(v.value <= mittag_leffler(FractionalOrder(0.5), 1.0, 1e-13).value);
}

TEST_CASE("eval_frac agrees with 50-digit sums") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> xs(0.0, 4.0);
  std::uniform_real_distribution<double> alphas(0.2, 1.8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_spec(rng, 3, -1.5, 1.5);
    const double alpha = alphas(rng);
    const double x = xs(rng);
    const auto v = eval_frac(DelaySpec(s.a, s.q), FractionalOrder(alpha), x, 1e-13);
    const double ref = oracle::frac_series(s.a, s.q, alpha, x).convert_to<double>();
    CHECK(std::abs(v.value - ref) <= v.tail_bound + 1e-12 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("eval_frac is continuous in alpha at one") {
  const auto at_one = eval_frac(kHalf, FractionalOrder(1.0), 2.0, 1e-14);
  const auto near = eval_frac(kHalf, FractionalOrder(1.0 - 1e-9), 2.0, 1e-14);
  CHECK(std::abs(at_one.value - near.value) <= 1e-7);
}

TEST_CASE("eval_frac edge cases") {
  for (double alpha : {0.1, 0.5, 0.9, 1.0, 1.5}) {
    const auto v = eval_frac(kHalf, FractionalOrder(alpha), 0.0, 1e-12);
    CHECK(v.value == 1.0);
    CHECK(v.tail_bound == 0.0);
  }
  CHECK_THROWS_AS(eval_frac(kHalf, FractionalOrder(0.5), -1.0, 1e-12), DomainError);
  CHECK_THROWS_AS(eval_frac(kHalf, FractionalOrder(0.5), 1.0, 0.0), DomainError);
}

TEST_CASE("fractional sandwich for nonnegative specs") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> xs(0.0, 3.0);
  for (double alpha : {0.4, 0.7, 1.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = oracle::random_spec(rng, 3, 0.0, 1.0);
      const DelaySpec spec(s.a, s.q);
      const FractionalOrder order(alpha);
      const double x = xs(rng);
      const double xa = std::pow(x, alpha);
      const auto v = eval_frac(spec, order, x, 1e-13);
      const auto lo = mittag_leffler(order, s.a[0] * xa, 1e-13);
      const auto hi = mittag_leffler(order, spec.sum() * xa, 1e-13);
      const double slack = v.tail_bound + lo.tail_bound + hi.tail_bound + 1e-10 * hi.value;
      CHECK(lo.value <= v.value + slack);
      CHECK(v.value <= hi.value + slack);
    }
  }
}

TEST_CASE("Caputo residual examples") {
  const DelaySpec exp_spec({1.0}, {1.0});
  CHECK(caputo_l1_residual(exp_spec, FractionalOrder(0.5), 1.0, 256) <= 0.02);

  for (double alpha : {0.3, 0.5, 0.8}) {
    CHECK(caputo_l1_residual(DelaySpec({0.0}, {1.0}), FractionalOrder(alpha), 1.0, 64) <= 1e-12);
  }

  CHECK_THROWS_AS(caputo_l1_residual(exp_spec, FractionalOrder(1.0), 1.0, 64), DomainError);
  CHECK_THROWS_AS(caputo_l1_residual(exp_spec, FractionalOrder(0.5), 1.0, 8), DomainError);
  CHECK_THROWS_AS(caputo_l1_residual(exp_spec, FractionalOrder(0.5), 0.0, 64), DomainError);
}

// y behaves like 1 + c x^alpha near the origin, which limits the L1 scheme
// to order min(2 - alpha, 1 + alpha) on [b/2, b]; for alpha >= 1/2 that is
// the smooth-solution rate 2 - alpha.
TEST_CASE("Caputo residual converges at the L1 rate") {
  const DelaySpec specs[] = {DelaySpec({1.0}, {1.0}), kHalf, DelaySpec({-0.5, 1.0}, {1.0, 0.3}),
                             DelaySpec({0.2, -0.4, 0.7}, {1.0, 0.8, 0.25})};
  for (const auto& spec : specs) {
    for (double alpha : {0.3, 0.5, 0.8}) {
      const FractionalOrder order(alpha);
      double previous = caputo_l1_residual(spec, order, 1.0, 64);
      for (int n : {128, 256}) {
        const double r = caputo_l1_residual(spec, order, 1.0, n);
        CAPTURE(alpha);
        CAPTURE(n);
        const double rate = std::min(2.0 - alpha, 1.0 + alpha);
        CHECK(previous / r >= std::pow(2.0, rate) * 0.7);
        CHECK(std::log2(previous / r) >= rate - 0.3);
        previous = r;
      }
    }
  }
}
