#include "pantograph/series.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pantograph/compensated_sum.hpp"
#include "pantograph/errors.hpp"

namespace pantograph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw DomainError("tol must be a positive finite number");
  }
}

template <typename T>
struct Partial {
  T value{};
  std::size_t terms = 0;
  double tail = 0.0;
};

// Sums sum_{k>=0} x^k/k! (a;q)_{k+r}. Terms follow
//   t_0 = (a;q)_r,   t_k = t_{k-1} * x/k * factor(k-1+r),
// and |(a;q)_{k+r}| <= A^{k+r}, so the tail after index k is at most
// A^r * exponential_tail(A|x|, k).
template <typename T>
Partial<T> derivative_series(const DelaySpec& spec, T x, unsigned r, double tol,
                             const SeriesOptions& options) {
  check_tolerance(tol);
  const double abs_x = std::abs(x);
  if (!std::isfinite(abs_x)) {
    throw DomainError("x must be finite");
  }
  CoefficientStream stream(spec);
  for (unsigned j = 0; j < r; ++j) stream.advance();

  const double big_a = spec.abs_sum();
  const double u = big_a * abs_x;
  const double scale = std::pow(big_a, static_cast<double>(r));

  T term = T(stream.product());
  CompensatedSum<T> sum;
  sum += term;
  std::size_t k = 0;
  double tail = scale * exponential_tail(u, k);
  while (!(tail <= tol)) {
    if (k + 2 > options.max_terms) {
      throw TruncationError("tail bound " + std::to_string(tail) + " above tolerance after " +
                                std::to_string(k + 1) + " terms",
                            tail, k + 1);
    }
    ++k;
    term *= x / static_cast<double>(k) * stream.factor();
    stream.advance();
    if (!std::isfinite(std::abs(term))) {
      throw RangeError("series term " + std::to_string(k) + " is not finite");
    }
    sum += term;
    tail = scale * exponential_tail(u, k);
  }
  const T value = sum.value();
  if (!std::isfinite(std::abs(value))) {
    throw RangeError("series sum is not finite");
  }
  return {value, k + 1, tail};
}

}  // namespace

CoefficientStream::CoefficientStream(const DelaySpec& spec, double exponent_scale)
    : a_(spec.a().begin(), spec.a().end()), powers_(spec.size(), 1.0) {
  ratio_.reserve(spec.size());
  for (double q : spec.q()) {
    ratio_.push_back(exponent_scale == 1.0 ? q : std::pow(q, exponent_scale));
  }
}

double CoefficientStream::factor() const {
  double s = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) s += a_[i] * powers_[i];
  return s;
}

void CoefficientStream::advance() {
  product_ *= factor();
  if (!std::isfinite(product_)) {
    throw RangeError("coefficient product overflowed at m = " + std::to_string(index_ + 1));
  }
  for (std::size_t i = 0; i < powers_.size(); ++i) powers_[i] *= ratio_[i];
  ++index_;
}

double coefficient_product(const DelaySpec& spec, std::size_t m) {
  CoefficientStream stream(spec);
  while (stream.index() < m) stream.advance();
  return stream.product();
}

double exponential_tail(double u, std::size_t last) {
  if (u == 0.0) return 0.0;
  const double next = static_cast<double>(last) + 2.0;
  if (next <= u) return kInf;
  const double log_term = (next - 1.0) * std::log(u) - std::lgamma(next);
  return std::exp(log_term) / (1.0 - u / next);
}

SeriesValue eval(const DelaySpec& spec, double x, double tol, const SeriesOptions& options) {
  return eval_derivative(spec, x, 0, tol, options);
}

SeriesValue eval_derivative(const DelaySpec& spec, double x, unsigned r, double tol,
                            const SeriesOptions& options) {
  const auto p = derivative_series<double>(spec, x, r, tol, options);
  return {p.value, p.terms, p.tail};
}

SeriesValue eval_addition(const DelaySpec& spec, double x, double y, unsigned outer_terms,
                          double tol, const SeriesOptions& options) {
  check_tolerance(tol);
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("x and y must be finite");
  }
  CompensatedSum<double> sum;
  double tail = 0.0;
  double weight = 1.0;  // x^r / r!
  for (unsigned r = 0; r <= outer_terms; ++r) {
    if (r > 0) weight *= x / static_cast<double>(r);
    const auto inner = eval_derivative(spec, y, r, tol, options);
    sum += weight * inner.value;
    tail += std::abs(weight) * inner.tail_bound;
  }
  // |R^{(r)}(y)| <= A^r exp(A|y|), so the dropped outer terms are bounded by
  // exp(A|y|) times the exponential tail in A|x|.
  const double big_a = spec.abs_sum();
  tail += std::exp(big_a * std::abs(y)) * exponential_tail(big_a * std::abs(x), outer_terms);
  return {sum.value(), static_cast<std::size_t>(outer_terms) + 1, tail};
}

ComplexSeriesValue eval_complex(const DelaySpec& spec, ComplexValue z, double tol,
                                const SeriesOptions& options) {
  const auto p =
      derivative_series<std::complex<double>>(spec, std::complex<double>(z.re, z.im), 0, tol, options);
  return {{p.value.real(), p.value.imag()}, p.terms, p.tail};
}

SeriesValue eval_scaled(const DelaySpec& spec, double y0, double x, double tol,
                        const SeriesOptions& options) {
  if (!std::isfinite(y0)) {
    throw DomainError("initial value must be finite");
  }
  if (y0 == 0.0) return {0.0, 1, 0.0};
  auto v = eval(spec, x, tol / std::abs(y0), options);
  v.value *= y0;
  v.tail_bound *= std::abs(y0);
  return v;
}

std::pair<double, double> sandwich_bounds(const DelaySpec& spec, double x) {
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec.a()[i] < 0.0) {
      throw DomainError("a[" + std::to_string(i) + "] is negative; bounds need all a_i >= 0");
    }
  }
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("bounds need a finite x >= 0");
  }
  return {std::exp(spec.a()[0] * x), std::exp(spec.sum() * x)};
}

std::size_t decreasing_from(const DelaySpec& spec, double x) {
  const double u = spec.abs_sum() * std::abs(x);
  // |t_{m+1}/t_m| <= u/(m+1) < 1 as soon as m + 1 > u.
  return static_cast<std::size_t>(std::floor(u));
}

}  // namespace pantograph
