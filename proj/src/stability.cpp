#include "pantograph/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pantograph/errors.hpp"

namespace pantograph {

namespace {

using cplx = std::complex<double>;

constexpr double kDedup = 1e-8;
constexpr int kNewtonIterations = 80;

bool residual_ok(const FrozenDelays& fd, cplx z) {
  return std::abs(char_fn(fd, z)) <= 1e-9 * (1.0 + std::abs(z));
}

// Returns false when the iteration wanders off or stalls.
bool newton(const FrozenDelays& fd, cplx& z, double escape_radius) {
  for (int it = 0; it < kNewtonIterations; ++it) {
    const cplx d = char_fn_derivative(fd, z);
    if (d == 0.0) return false;
    const cplx step = char_fn(fd, z) / d;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > escape_radius) {
      return false;
    }
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
  }
  return residual_ok(fd, z);
}

void add_root(std::vector<cplx>& roots, cplx z) {
  for (const cplx& r : roots) {
    if (std::abs(r - z) <= kDedup * (1.0 + std::abs(z))) return;
  }
  roots.push_back(z);
}

// Phase change of h along the straight segment [za, zb], bisecting until
// each piece turns by less than a quarter turn and the halves agree with the
// whole. Sets `failed` if h vanishes on the path or the depth runs out.
double phase_change(const FrozenDelays& fd, cplx za, cplx ha, cplx zb, cplx hb, int depth,
                    bool& failed) {
  if (failed) return 0.0;
  const double whole = std::arg(hb / ha);
  const cplx zm = 0.5 * (za + zb);
  const cplx hm = char_fn(fd, zm);
  if (std::abs(hm) <= 1e-13 * (1.0 + std::abs(zm))) {
    failed = true;
    return 0.0;
  }
  const double left = std::arg(hm / ha);
  const double right = std::arg(hb / hm);
  if (std::abs(whole) < std::numbers::pi / 4.0 && std::abs(left + right - whole) < 1e-9) {
    return whole;
  }
  if (depth == 0) {
    failed = true;
    return 0.0;
  }
  return phase_change(fd, za, ha, zm, hm, depth - 1, failed) +
         phase_change(fd, zm, hm, zb, hb, depth - 1, failed);
}

int winding_count(const FrozenDelays& fd, const Window& w) {
  const cplx corners[] = {{w.re_min, -w.im_half},
                          {w.re_max, -w.im_half},
                          {w.re_max, w.im_half},
                          {w.re_min, w.im_half}};
  constexpr int kPieces = 512;
  bool failed = false;
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx from = corners[e];
    const cplx to = corners[(e + 1) % 4];
    cplx z0 = from;
    cplx h0 = char_fn(fd, z0);
    if (std::abs(h0) <= 1e-13 * (1.0 + std::abs(z0))) return -1;
    for (int p = 1; p <= kPieces; ++p) {
      const cplx z1 = from + (to - from) * (static_cast<double>(p) / kPieces);
      const cplx h1 = char_fn(fd, z1);
      if (std::abs(h1) <= 1e-13 * (1.0 + std::abs(z1))) return -1;
      total += phase_change(fd, z0, h0, z1, h1, 40, failed);
      if (failed) return -1;
      z0 = z1;
      h0 = h1;
    }
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.05 || rounded < 0.0) return -1;
  return static_cast<int>(rounded);
}

}  // namespace

void FrozenDelays::validate() const {
  if (tau.empty() || tau.size() != a.size()) {
    throw DomainError("tau and a must have the same non-zero length");
  }
  if (tau[0] != 0.0) {
    throw DomainError("tau[0] must be 0");
  }
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (!std::isfinite(tau[i]) || tau[i] < 0.0) {
      throw DomainError("tau[" + std::to_string(i) + "] must be finite and >= 0");
    }
    if (!std::isfinite(a[i])) {
      throw DomainError("a[" + std::to_string(i) + "] is not finite");
    }
  }
}

FrozenDelays frozen_from_spec(const DelaySpec& spec, double x0) {
  if (!(x0 >= 0.0) || !std::isfinite(x0)) {
    throw DomainError("x0 must be finite and >= 0");
  }
  FrozenDelays fd;
  fd.a.assign(spec.a().begin(), spec.a().end());
  for (double q : spec.q()) fd.tau.push_back((1.0 - q) * x0);
  fd.x0 = x0;
  return fd;
}

std::complex<double> char_fn(const FrozenDelays& fd, std::complex<double> lambda) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < fd.a.size(); ++i) {
    s += fd.a[i] * (fd.tau[i] == 0.0 ? cplx(1.0) : std::exp(-lambda * fd.tau[i]));
  }
  return lambda - s;
}

std::complex<double> char_fn_derivative(const FrozenDelays& fd, std::complex<double> lambda) {
  cplx s = 1.0;
  for (std::size_t i = 0; i < fd.a.size(); ++i) {
    if (fd.tau[i] != 0.0) s += fd.a[i] * fd.tau[i] * std::exp(-lambda * fd.tau[i]);
  }
  return s;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kStableOnFiniteInterval:
      return "stable-on-finite-interval";
    case Verdict::kUnstable:
      return "unstable";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

StabilityReport find_roots(const FrozenDelays& fd, const Window& window, int grid) {
  fd.validate();
  if (!std::isfinite(window.re_min) || !std::isfinite(window.re_max) ||
      !std::isfinite(window.im_half) || !(window.re_min < window.re_max) ||
      !(window.im_half > 0.0)) {
    throw DomainError("window needs finite bounds with re_min < re_max and im_half > 0");
  }
  if (grid < 8) {
    throw DomainError("the Newton lattice needs grid >= 8");
  }

  const double escape = 10.0 * (std::abs(window.re_min) + std::abs(window.re_max) +
                                window.im_half + 1.0);
  std::vector<cplx> found;
  const double dre = (window.re_max - window.re_min) / grid;
  const double dim = 2.0 * window.im_half / grid;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      cplx z(window.re_min + (i + 0.5) * dre, -window.im_half + (j + 0.5) * dim);
      if (newton(fd, z, escape) && window.contains(z)) add_root(found, z);
    }
  }
  // Real coefficients: polish each conjugate too, so pairs are complete.
  const std::size_t primary = found.size();
  for (std::size_t k = 0; k < primary; ++k) {
    cplx z = std::conj(found[k]);
    if (newton(fd, z, escape) && window.contains(z)) add_root(found, z);
  }
  std::sort(found.begin(), found.end(), [](cplx l, cplx r) {
    return l.real() != r.real() ? l.real() > r.real() : l.imag() < r.imag();
  });

  StabilityReport report;
  report.window = window;
  report.x0 = fd.x0;
  report.roots = found;
  report.max_real_part =
      found.empty() ? -std::numeric_limits<double>::infinity() : found.front().real();
  report.zero_count = winding_count(fd, window);

  double abs_sum = 0.0;
  for (double ai : fd.a) abs_sum += std::abs(ai);
  // For Re(lambda) >= 0, |lambda| = |sum a_i e^{-lambda tau_i}| <= sum |a_i|.
  report.window_certified =
      window.re_max >= abs_sum && window.im_half >= abs_sum && window.re_min < 0.0;

  if (report.zero_count < 0 || static_cast<std::size_t>(report.zero_count) != found.size()) {
    report.verdict = Verdict::kInconclusive;
  } else if (report.max_real_part >= 0.0) {
    report.verdict = Verdict::kUnstable;
  } else if (report.window_certified) {
    report.verdict = Verdict::kStableOnFiniteInterval;
  } else {
    report.verdict = Verdict::kInconclusive;
  }
  return report;
}

}  // namespace pantograph
