#pragma once

#include <span>
#include <vector>

#include "pantograph/delay_spec.hpp"
#include "pantograph/djm.hpp"
#include "pantograph/grid.hpp"

namespace pantograph {

/// Accepted steps (x_k, y_k, y'_k) of a marching solve with cubic Hermite
/// dense output between them.
class History {
 public:
  struct Node {
    double x;
    double y;
    double slope;
  };

  explicit History(double step) : step_(step) {}

  void push(Node node) { nodes_.push_back(node); }
  const std::vector<Node>& nodes() const { return nodes_; }
  double last_x() const { return nodes_.back().x; }

  /// Dense output at s in [0, last_x()]. Throws DomainError for any s past
  /// the last accepted node: delayed arguments never need extrapolation.
  double lookup(double s) const;

  /// Continuation of the last interval's Hermite cubic to s > last_x().
  /// Used only for delayed arguments that fall inside the step in progress.
  double extrapolate(double s) const;

 private:
  double step_;
  std::vector<Node> nodes_;
};

/// Fixed-step classical RK4 for y' = sum_i a_i y(q_i x), y(0) = 1, on [0, b].
/// b must be an integer multiple of h and h <= b/16.
GridSolution integrate(const DelaySpec& spec, double b, double h);

/// The same scheme for a general right-hand side; only rhs.q, rhs.f and
/// rhs.b are used.
GridSolution integrate(const DelayRHS& rhs, double y0, double h);

/// log2(|y_h(b) - R(b)| / |y_{h/2}(b) - R(b)|) with h = b/16. +infinity when
/// either error is exactly zero.
double convergence_order(const DelaySpec& spec, double b);

}  // namespace pantograph
