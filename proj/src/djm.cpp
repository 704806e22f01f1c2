#include "pantograph/djm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pantograph/errors.hpp"
#include "pantograph/series.hpp"

namespace pantograph {

namespace {

double sup_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

// f(t_k, S(q_0 t_k), ..., S(q_n t_k)) at every node.
std::vector<double> sample_rhs(const DelayRHS& rhs, const std::vector<double>& s, double y0,
                               int iteration) {
  const MonotoneCubic interp(rhs.b, s);
  const std::size_t n = s.size() - 1;
  const double h = rhs.b / static_cast<double>(n);
  std::vector<double> delayed(rhs.q.size());
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = h * static_cast<double>(k);
    for (std::size_t i = 0; i < rhs.q.size(); ++i) {
      delayed[i] = i == 0 ? s[k] : interp(rhs.q[i] * t);
      if (std::abs(delayed[i]) > rhs.delta[i] + std::abs(y0)) {
        throw EscapeError("iterate " + std::to_string(iteration) + " left the rectangle in slot " +
                              std::to_string(i) + " at x = " + std::to_string(t),
                          iteration);
      }
    }
    g[k] = rhs.f(t, delayed);
    if (!std::isfinite(g[k])) {
      throw RangeError("right-hand side is not finite at x = " + std::to_string(t));
    }
  }
  return g;
}

// Cumulative composite trapezoid rule starting from zero.
std::vector<double> cumulative_trapezoid(std::span<const double> g, double h) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t k = 1; k < g.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * h * (g[k - 1] + g[k]);
  }
  return out;
}

}  // namespace

double DelayRHS::lipschitz_sum() const {
  double s = 0.0;
  for (double l : lipschitz) s += l;
  return s;
}

void DelayRHS::validate() const {
  validate_ratios(q);
  if (!f) {
    throw DomainError("right-hand side has no function");
  }
  if (lipschitz.size() != q.size()) {
    throw DomainError("expected " + std::to_string(q.size()) + " Lipschitz constants, got " +
                      std::to_string(lipschitz.size()));
  }
  if (delta.size() != q.size()) {
    throw DomainError("expected " + std::to_string(q.size()) + " rectangle widths, got " +
                      std::to_string(delta.size()));
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(lipschitz[i] >= 0.0) || !std::isfinite(lipschitz[i])) {
      throw DomainError("L[" + std::to_string(i) + "] must be a finite value >= 0");
    }
    if (!(delta[i] > 0.0)) {
      throw DomainError("delta[" + std::to_string(i) + "] must be positive");
    }
  }
  if (!(bound_m > 0.0) || !std::isfinite(bound_m)) {
    throw DomainError("M must be positive and finite");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw DomainError("b must be positive and finite");
  }
}

DelayRHS linear_rhs(const DelaySpec& spec, double y0, double b) {
  DelayRHS rhs;
  rhs.q.assign(spec.q().begin(), spec.q().end());
  std::vector<double> a(spec.a().begin(), spec.a().end());
  rhs.f = [a](double, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * y[i];
    return s;
  };
  for (double ai : a) rhs.lipschitz.push_back(std::abs(ai));
  rhs.b = b;
  // |y| <= |y0| exp(A b); double it to leave room for quadrature error.
  const double reach = 2.0 * std::max(std::abs(y0), 1.0) * std::exp(spec.abs_sum() * b);
  rhs.delta.assign(a.size(), reach);
  rhs.bound_m = std::max(spec.abs_sum() * (std::abs(y0) + reach), 1e-300);
  return rhs;
}

GridSolution djm_iterate(const DelayRHS& rhs, double y0, const DjmOptions& options) {
  rhs.validate();
  if (options.intervals < 16) {
    throw DomainError("the grid needs N >= 16");
  }
  if (!(options.tol > 0.0)) {
    throw DomainError("tol must be positive");
  }
  if (options.max_iter < 1) {
    throw DomainError("max_iter must be at least 1");
  }
  const auto n = static_cast<std::size_t>(options.intervals);
  const double h = rhs.b / static_cast<double>(n);

  std::vector<double> s(n + 1, y0);
  if (options.initial_guess) {
    if (options.initial_guess->size() != n + 1) {
      throw DomainError("initial guess must have N + 1 values");
    }
    s = *options.initial_guess;
    s[0] = y0;
  }

  GridSolution out;
  out.b = rhs.b;

  // y_1 = y0 + int f(S_0) - S_0, which is int f(y0, ..., y0) for the
  // constant start.
  std::vector<double> g_prev = sample_rhs(rhs, s, y0, 0);
  std::vector<double> increment = cumulative_trapezoid(g_prev, h);
  for (std::size_t k = 0; k <= n; ++k) increment[k] += y0 - s[k];

  int m = 0;
  double norm = 0.0;
  for (;;) {
    for (std::size_t k = 0; k <= n; ++k) s[k] += increment[k];
    ++m;
    norm = sup_norm(increment);
    out.increment_norms.push_back(norm);
    if (norm <= options.tol || m >= options.max_iter) break;

    std::vector<double> g = sample_rhs(rhs, s, y0, m);
    std::vector<double> diff(n + 1);
    for (std::size_t k = 0; k <= n; ++k) diff[k] = g[k] - g_prev[k];
    increment = cumulative_trapezoid(diff, h);
    g_prev = std::move(g);
  }
  if (norm > options.tol) {
    throw ConvergenceError("no convergence after " + std::to_string(m) +
                               " iterations; last increment norm " + std::to_string(norm),
                           norm);
  }
  // The final iterate is accepted as is, so it still has to lie inside the
  // rectangle.
  sample_rhs(rhs, s, y0, m);

  out.values = std::move(s);
  out.iteration_count = m;
  out.certified_error = apriori_remainder(rhs, m);
  return out;
}

GridSolution djm_iterate(const DelayRHS& rhs, double y0, int intervals, int max_iter, double tol) {
  DjmOptions options;
  options.intervals = intervals;
  options.max_iter = max_iter;
  options.tol = tol;
  return djm_iterate(rhs, y0, options);
}

double djm_symbolic_linear_terms(const DelaySpec& spec, std::size_t m) {
  return coefficient_product(spec, m);
}

double apriori_bound(const DelayRHS& rhs, int m) {
  if (m < 1) {
    throw DomainError("the iterate bound starts at m = 1");
  }
  const double l = rhs.lipschitz_sum();
  double bound = rhs.bound_m * rhs.b;
  for (int j = 2; j <= m; ++j) bound *= l * rhs.b / static_cast<double>(j);
  return bound;
}

double apriori_remainder(const DelayRHS& rhs, int m) {
  const double lb = rhs.lipschitz_sum() * rhs.b;
  double term = apriori_bound(rhs, std::max(m, 1));
  if (m < 1) {
    return rhs.bound_m * (lb == 0.0 ? rhs.b : std::expm1(lb) / rhs.lipschitz_sum());
  }
  double sum = 0.0;
  for (int j = m + 1;; ++j) {
    term *= lb / static_cast<double>(j);
    sum += term;
    if (term == 0.0 || (j > lb && term <= 1e-17 * sum)) break;
  }
  return sum;
}

}  // namespace pantograph
