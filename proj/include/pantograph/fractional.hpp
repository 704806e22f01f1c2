#pragma once

#include "pantograph/delay_spec.hpp"
#include "pantograph/series.hpp"

namespace pantograph {

/// Caputo order alpha > 0. Series evaluation accepts any positive order; the
/// L1 residual check only accepts 0 < alpha < 1.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

/// Walks (a;q)_{alpha,m} = prod_{j<m} sum_i a_i q_i^{alpha j}.
class FracCoefficientStream : public CoefficientStream {
 public:
  FracCoefficientStream(const DelaySpec& spec, FractionalOrder alpha)
      : CoefficientStream(spec, alpha.value()) {}
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// E_alpha(x) = sum_m x^m / Gamma(alpha m + 1). For x < 0 the terms cancel
/// and the rounding error grows like eps * E_alpha(|x|).
SeriesValue mittag_leffler(FractionalOrder alpha, double x, double tol,
                           const SeriesOptions& options = {});

/// R_alpha(a;q;x) = sum_m x^{alpha m}/Gamma(alpha m + 1) (a;q)_{alpha,m} for
/// x >= 0. The tail is bounded by the tail of E_alpha(A x^alpha) with
/// A = sum |a_i|.
SeriesValue eval_frac(const DelaySpec& spec, FractionalOrder alpha, double x, double tol,
                      const SeriesOptions& options = {});

/// Largest |D^alpha y(x_k) - sum_i a_i y(q_i x_k)| over the grid nodes
/// x_k = k b / N with x_k >= b/2, where y = R_alpha, D^alpha is the L1
/// discretisation of the Caputo derivative and y(q_i x_k) comes from the
/// series. Nodes close to the origin are excluded: y behaves like x^alpha
/// there and the L1 scheme has an O(1) consistency error at the first nodes.
double caputo_l1_residual(const DelaySpec& spec, FractionalOrder alpha, double b, int nodes);

}  // namespace pantograph
