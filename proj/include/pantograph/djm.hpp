#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pantograph/delay_spec.hpp"
#include "pantograph/grid.hpp"

namespace pantograph {

/// Right-hand side of y'(x) = f(x, y(q_0 x), ..., y(q_n x)) together with the
/// constants of the existence theorem: Lipschitz constants L_i in each
/// delayed slot, a bound M on |f| over the rectangle, the interval length b
/// and the rectangle half-widths delta_i.
///
/// `f` receives the delayed values in q order. It must be safe to call
/// concurrently when several solves run in parallel.
struct DelayRHS {
  std::vector<double> q;
  std::function<double(double x, std::span<const double> delayed)> f;
  std::vector<double> lipschitz;
  double bound_m = 1.0;
  double b = 1.0;
  std::vector<double> delta;

  std::size_t delays() const { return q.size() - 1; }
  double lipschitz_sum() const;
  /// Throws DomainError when the fields are inconsistent.
  void validate() const;
};

/// f = sum_i a_i y_i on [0, b]. L_i = |a_i|; the rectangle is wide enough
/// for |y| <= |y0| exp(A b) and M is the matching bound on |f|.
DelayRHS linear_rhs(const DelaySpec& spec, double y0, double b);

struct DjmOptions {
  int intervals = 512;
  int max_iter = 200;
  double tol = 1e-10;
  /// Starting profile S_0 on the grid (N + 1 values, S_0(0) = y0). The
  /// constant y0 when absent.
  std::optional<std::vector<double>> initial_guess;
};

/// Successive approximation on the grid: S_0 = y0 and
///   y_{m+1}(x) = int_0^x [f(t, S_m(q t)) - f(t, S_{m-1}(q t))] dt,
///   S_{m+1} = S_m + y_{m+1},
/// with composite trapezoid quadrature and monotone cubic interpolation for
/// the off-grid arguments q_i t. Stops once the sup-norm of the latest
/// increment is at most tol.
///
/// Throws EscapeError when an iterate leaves the rectangle and
/// ConvergenceError when max_iter increments do not reach tol.
GridSolution djm_iterate(const DelayRHS& rhs, double y0, const DjmOptions& options);
GridSolution djm_iterate(const DelayRHS& rhs, double y0, int intervals, int max_iter, double tol);

/// Coefficient of x^m/m! in the m-th iterate of the linear equation; this is
/// the coefficient product (a;q)_m.
double djm_symbolic_linear_terms(const DelaySpec& spec, std::size_t m);

/// M (sum L_i)^{m-1} b^m / m!, the bound on |y_m| over [0, b].
double apriori_bound(const DelayRHS& rhs, int m);

/// sum_{j > m} apriori_bound(j): what the increments after y_m can add.
double apriori_remainder(const DelayRHS& rhs, int m);

}  // namespace pantograph
