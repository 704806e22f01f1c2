#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "pantograph/delay_spec.hpp"

namespace pantograph {

/// A truncated series evaluation. `tail_bound` is a rigorous bound on the
/// magnitude of every term that was left out; floating-point rounding of the
/// retained terms is not included.
struct SeriesValue {
  double value = 0.0;
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
};

struct ComplexValue {
  double re = 0.0;
  double im = 0.0;
};

struct ComplexSeriesValue {
  ComplexValue value;
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
};

struct SeriesOptions {
  std::size_t max_terms = 10000;
};

/// Walks the products (a;q)_m = prod_{j<m} sum_i a_i q_i^{s j} for m = 0, 1, ...
/// with s = 1 for the classical function and s = alpha for the fractional one.
/// Each advance costs O(n). Single owner; not safe to share while advancing.
class CoefficientStream {
 public:
  explicit CoefficientStream(const DelaySpec& spec, double exponent_scale = 1.0);

  std::size_t index() const { return index_; }
  double product() const { return product_; }

  /// sum_i a_i q_i^{s m} for the current index m: the factor that the next
  /// advance multiplies into the product.
  double factor() const;

  /// Moves from m to m + 1. Throws RangeError naming m when the product
  /// stops being finite.
  void advance();

 private:
  std::vector<double> a_;
  std::vector<double> ratio_;   // q_i^s
  std::vector<double> powers_;  // q_i^{s m}
  std::size_t index_ = 0;
  double product_ = 1.0;
};

/// (a;q)_m. Returns 1 for m = 0.
double coefficient_product(const DelaySpec& spec, std::size_t m);

/// Bound on sum_{m > last} u^m / m! for u >= 0. Infinite when the geometric
/// majorant does not yet apply (last + 2 <= u).
double exponential_tail(double u, std::size_t last);

/// R(a;q;x) = sum_m x^m/m! (a;q)_m, summed until the tail bound <= tol.
SeriesValue eval(const DelaySpec& spec, double x, double tol, const SeriesOptions& options = {});

/// r-th derivative: sum_{m >= r} x^{m-r}/(m-r)! (a;q)_m. r = 0 is exactly eval.
SeriesValue eval_derivative(const DelaySpec& spec, double x, unsigned r, double tol,
                            const SeriesOptions& options = {});

/// sum_{r=0}^{outer_terms} x^r/r! R^{(r)}(y). The reported tail bound covers
/// both the inner truncations and the dropped outer terms.
SeriesValue eval_addition(const DelaySpec& spec, double x, double y, unsigned outer_terms,
                          double tol, const SeriesOptions& options = {});

/// The same series with a complex argument; re and im are the real and
/// imaginary parts of R(a;q;z).
ComplexSeriesValue eval_complex(const DelaySpec& spec, ComplexValue z, double tol,
                                const SeriesOptions& options = {});

/// Solution with initial value y(0) = y0. By linearity this is y0 * R.
SeriesValue eval_scaled(const DelaySpec& spec, double y0, double x, double tol,
                        const SeriesOptions& options = {});

/// (exp(a_0 x), exp((sum a_i) x)), the lower and upper envelopes of R for
/// nonnegative coefficients and x >= 0.
std::pair<double, double> sandwich_bounds(const DelaySpec& spec, double x);

/// Smallest m such that every later term ratio |t_{m+1}/t_m| is below one.
std::size_t decreasing_from(const DelaySpec& spec, double x);

}  // namespace pantograph
