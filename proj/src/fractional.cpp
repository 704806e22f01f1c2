#include "pantograph/fractional.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pantograph/compensated_sum.hpp"
#include "pantograph/errors.hpp"

namespace pantograph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bound on sum_{m > last} base^m / Gamma(alpha m + 1). The term ratio
// base * Gamma(alpha m + 1) / Gamma(alpha m + alpha + 1) decreases in m
// (digamma is increasing), so a geometric series caps the tail once the
// first dropped ratio is below one.
double gamma_series_tail(double alpha, double base, std::size_t last) {
  if (base == 0.0) return 0.0;
  const double m = static_cast<double>(last) + 1.0;
  const double log_base = std::log(base);
  const double log_ratio =
      log_base + std::lgamma(alpha * m + 1.0) - std::lgamma(alpha * m + alpha + 1.0);
  if (log_ratio >= 0.0) return kInf;
  const double log_term = m * log_base - std::lgamma(alpha * m + 1.0);
  return std::exp(log_term) / (1.0 - std::exp(log_ratio));
}

// Sums sum_m c_m w^m / Gamma(alpha m + 1), where c_m comes from `stream`
// (or is 1 when stream is null). The magnitude |w|^m / Gamma(alpha m + 1) is
// assembled in log space and c_m is carried as mantissa * 2^exponent so
// neither factor overflows on its own.
SeriesValue gamma_series(double alpha, double w, CoefficientStream* stream, double majorant_base,
                         double tol, const SeriesOptions& options) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw DomainError("tol must be a positive finite number");
  }
  if (!std::isfinite(w)) {
    throw DomainError("argument must be finite");
  }
  const double log_w = w == 0.0 ? 0.0 : std::log(std::abs(w));
  double mantissa = 1.0;
  long exponent = 0;
  double sign = 1.0;

  CompensatedSum<double> sum(1.0);
  std::size_t m = 0;
  double tail = gamma_series_tail(alpha, majorant_base, m);
  while (!(tail <= tol)) {
    if (m + 2 > options.max_terms) {
      throw TruncationError("tail bound " + std::to_string(tail) + " above tolerance after " +
                                std::to_string(m + 1) + " terms",
                            tail, m + 1);
    }
    if (stream != nullptr) {
      mantissa *= stream->factor();
      stream->advance();
      int e = 0;
      mantissa = std::frexp(mantissa, &e);
      exponent += e;
    }
    ++m;
    if (w < 0.0) sign = -sign;
    const double md = static_cast<double>(m);
    double term = 0.0;
    if (mantissa != 0.0 && w != 0.0) {
      const double log_mag = md * log_w - std::lgamma(alpha * md + 1.0) +
                             static_cast<double>(exponent) * std::log(2.0);
      term = sign * mantissa * std::exp(log_mag);
    }
    if (!std::isfinite(term)) {
      throw RangeError("series term " + std::to_string(m) + " is not finite");
    }
    sum += term;
    tail = gamma_series_tail(alpha, majorant_base, m);
  }
  const double value = sum.value();
  if (!std::isfinite(value)) {
    throw RangeError("series sum is not finite");
  }
  return {value, m + 1, tail};
}

}  // namespace

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha = " + std::to_string(alpha) + " must be positive and finite");
  }
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma requires x > 0");
  }
  return std::lgamma(x);
}

SeriesValue mittag_leffler(FractionalOrder alpha, double x, double tol,
                           const SeriesOptions& options) {
  if (alpha.value() == 1.0) {
    // Gamma(m + 1) = m!: the exponential series, summed by the exact
    // factorial recurrence.
    return eval(DelaySpec({1.0}, {1.0}), x, tol, options);
  }
  return gamma_series(alpha.value(), x, nullptr, std::abs(x), tol, options);
}

SeriesValue eval_frac(const DelaySpec& spec, FractionalOrder alpha, double x, double tol,
                      const SeriesOptions& options) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("fractional series needs a finite x >= 0");
  }
  if (alpha.value() == 1.0) {
    return eval(spec, x, tol, options);
  }
  if (x == 0.0) {
    return {1.0, 1, 0.0};
  }
  const double w = std::exp(alpha.value() * std::log(x));
  FracCoefficientStream stream(spec, alpha);
  return gamma_series(alpha.value(), w, &stream, spec.abs_sum() * w, tol, options);
}

double caputo_l1_residual(const DelaySpec& spec, FractionalOrder alpha, double b, int nodes) {
  const double a = alpha.value();
  if (!(a < 1.0)) {
    throw DomainError("the L1 residual needs 0 < alpha < 1; use the ODE residual for alpha = 1");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw DomainError("b must be positive and finite");
  }
  if (nodes < 16) {
    throw DomainError("the residual grid needs N >= 16");
  }
  constexpr double kTol = 1e-15;
  const auto n = static_cast<std::size_t>(nodes);
  const double h = b / static_cast<double>(nodes);

  std::vector<double> y(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    y[k] = eval_frac(spec, alpha, h * static_cast<double>(k), kTol).value;
  }
  std::vector<double> weight(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double jd = static_cast<double>(j);
    weight[j] = std::pow(jd + 1.0, 1.0 - a) - std::pow(jd, 1.0 - a);
  }
  const double scale = 1.0 / (std::tgamma(2.0 - a) * std::pow(h, a));

  double worst = 0.0;
  for (std::size_t k = (n + 1) / 2; k <= n; ++k) {
    CompensatedSum<double> d;
    for (std::size_t j = 0; j < k; ++j) {
      d += weight[j] * (y[k - j] - y[k - j - 1]);
    }
    const double xk = h * static_cast<double>(k);
    CompensatedSum<double> rhs;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double yq = i == 0 ? y[k] : eval_frac(spec, alpha, spec.q()[i] * xk, kTol).value;
      rhs += spec.a()[i] * yq;
    }
    worst = std::max(worst, std::abs(scale * d.value() - rhs.value()));
  }
  return worst;
}

}  // namespace pantograph
