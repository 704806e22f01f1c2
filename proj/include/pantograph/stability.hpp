#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pantograph/delay_spec.hpp"

namespace pantograph {

/// Constant delays tau_i* = tau_i(x0) obtained by freezing the proportional
/// delays tau_i(x) = (1 - q_i) x at x0. tau[0] is always 0.
struct FrozenDelays {
  std::vector<double> tau;
  std::vector<double> a;
  double x0 = 0.0;

  /// Throws DomainError unless tau and a have equal length, tau[0] == 0 and
  /// every entry is finite with tau_i >= 0.
  void validate() const;
};

FrozenDelays frozen_from_spec(const DelaySpec& spec, double x0);

/// h(lambda) = lambda - sum_i a_i exp(-lambda tau_i).
std::complex<double> char_fn(const FrozenDelays& fd, std::complex<double> lambda);

/// h'(lambda) = 1 + sum_i a_i tau_i exp(-lambda tau_i).
std::complex<double> char_fn_derivative(const FrozenDelays& fd, std::complex<double> lambda);

/// Closed rectangle re in [re_min, re_max], im in [-im_half, im_half].
struct Window {
  double re_min = -5.0;
  double re_max = 2.0;
  double im_half = 40.0;

  bool contains(std::complex<double> z) const {
    return z.real() >= re_min && z.real() <= re_max && std::abs(z.imag()) <= im_half;
  }
};

enum class Verdict { kStableOnFiniteInterval, kUnstable, kInconclusive };

std::string to_string(Verdict verdict);

struct StabilityReport {
  std::vector<std::complex<double>> roots;  ///< sorted by decreasing real part
  /// Largest real part among the roots, -infinity when none were found.
  double max_real_part = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  Window window;
  /// Zeros inside the window by the argument principle; -1 when the boundary
  /// winding number could not be resolved.
  int zero_count = -1;
  /// True when re_max and im_half both reach sum |a_i|, so that every root
  /// with a nonnegative real part lies inside the window.
  bool window_certified = false;
  double x0 = 0.0;
};

/// Multi-start Newton from a grid x grid lattice of starting points, roots
/// deduplicated within 1e-8, cross-checked against the argument-principle
/// count. The verdict is stable only when the count matches, every root has a
/// negative real part and the window is certified; a count mismatch gives
/// inconclusive.
StabilityReport find_roots(const FrozenDelays& fd, const Window& window, int grid = 64);

}  // namespace pantograph
