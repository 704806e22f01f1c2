#pragma once

#include <span>
#include <vector>

namespace pantograph {

/// Shape-preserving cubic Hermite interpolant on a uniform grid over [0, b]
/// (Fritsch-Carlson style slopes). Exact at the nodes and never overshoots
/// the data between two nodes, so bounds on the node values carry over.
class MonotoneCubic {
 public:
  MonotoneCubic(double b, std::span<const double> values);

  /// Value at x in [0, b]. Throws DomainError outside the grid.
  double operator()(double x) const;

 private:
  double b_;
  double h_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Samples of a solution on the uniform grid x_k = k b / N, k = 0..N.
struct GridSolution {
  double b = 0.0;
  std::vector<double> values;
  /// Successive-approximation increments computed (DJM) or steps taken (RK4).
  int iteration_count = 0;
  /// DJM: the a-priori remainder beyond the last increment. Zero for the
  /// marching integrator, which carries no certificate.
  double certified_error = 0.0;
  /// DJM: sup-norm of every increment y_1, y_2, ... on the grid.
  std::vector<double> increment_norms;

  int intervals() const { return static_cast<int>(values.size()) - 1; }
  double step() const { return b / intervals(); }
  double node(int k) const { return step() * k; }

  /// Monotone cubic interpolation of the node values.
  double at(double x) const;
};

}  // namespace pantograph
