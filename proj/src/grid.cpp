#include "pantograph/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pantograph/errors.hpp"

namespace pantograph {

namespace {

// Three-point end slope, clipped so the end interval stays monotone.
double end_slope(double d0, double d1) {
  double s = (3.0 * d0 - d1) / 2.0;
  if (s * d0 <= 0.0) return 0.0;
  if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) return 3.0 * d0;
  return s;
}

}  // namespace

MonotoneCubic::MonotoneCubic(double b, std::span<const double> values)
    : b_(b), values_(values.begin(), values.end()) {
  if (values_.size() < 2 || !(b > 0.0)) {
    throw DomainError("interpolation needs at least two nodes on a positive interval");
  }
  const std::size_t n = values_.size() - 1;
  h_ = b_ / static_cast<double>(n);
  std::vector<double> secant(n);
  for (std::size_t k = 0; k < n; ++k) secant[k] = (values_[k + 1] - values_[k]) / h_;

  slopes_.assign(n + 1, 0.0);
  if (n == 1) {
    slopes_[0] = slopes_[1] = secant[0];
    return;
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double d0 = secant[k - 1];
    const double d1 = secant[k];
    if (d0 * d1 > 0.0) {
      // Harmonic mean on a uniform grid.
      slopes_[k] = 2.0 * d0 * d1 / (d0 + d1);
    }
  }
  slopes_[0] = end_slope(secant[0], secant[1]);
  slopes_[n] = end_slope(secant[n - 1], secant[n - 2]);
}

double MonotoneCubic::operator()(double x) const {
  if (!(x >= 0.0 && x <= b_ * (1.0 + 1e-14))) {
    throw DomainError("interpolation point " + std::to_string(x) + " outside [0, " +
                      std::to_string(b_) + "]");
  }
  const std::size_t n = values_.size() - 1;
  const double pos = x / h_;
  auto k = static_cast<std::size_t>(pos);
  if (k >= n) k = n - 1;
  const double s = pos - static_cast<double>(k);
  if (s == 0.0) return values_[k];
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * values_[k] + h10 * h_ * slopes_[k] + h01 * values_[k + 1] +
         h11 * h_ * slopes_[k + 1];
}

double GridSolution::at(double x) const {
  return MonotoneCubic(b, values)(x);
}

}  // namespace pantograph
