#include "pantograph/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pantograph/errors.hpp"
#include "pantograph/series.hpp"

namespace pantograph {

namespace {

double hermite(const History::Node& left, const History::Node& right, double s) {
  const double h = right.x - left.x;
  const double t = (s - left.x) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * left.y + (t3 - 2.0 * t2 + t) * h * left.slope +
         (-2.0 * t3 + 3.0 * t2) * right.y + (t3 - t2) * h * right.slope;
}

class Marcher {
 public:
  Marcher(const DelayRHS& rhs, double y0, double h)
      : rhs_(rhs), h_(h), history_(h), delayed_(rhs.q.size(), y0) {
    // At x = 0 every slot sees y(0).
    history_.push({0.0, y0, rhs_.f(0.0, delayed_)});
  }

  GridSolution run(int steps) {
    GridSolution out;
    out.b = rhs_.b;
    out.values.reserve(static_cast<std::size_t>(steps) + 1);
    out.values.push_back(history_.nodes().front().y);
    for (int k = 0; k < steps; ++k) {
      const History::Node next = step(k);
      if (!std::isfinite(next.y) || !std::isfinite(next.slope)) {
        throw BlowUpError("solution became non-finite after x = " +
                              std::to_string(history_.last_x()),
                          history_.last_x());
      }
      history_.push(next);
      out.values.push_back(next.y);
    }
    out.iteration_count = steps;
    return out;
  }

 private:
  // Delayed value y(s) for s = q_i t. Inside the step in progress it comes
  // from `trial` when a tentative end node exists, otherwise from the
  // previous interval's cubic (or the initial slope on the first step).
  double delayed_value(double s, const History::Node* trial) const {
    if (s <= history_.last_x()) return history_.lookup(s);
    if (trial != nullptr) return hermite(history_.nodes().back(), *trial, s);
    if (history_.nodes().size() >= 2) return history_.extrapolate(s);
    const auto& first = history_.nodes().back();
    return first.y + (s - first.x) * first.slope;
  }

  double slope(double t, double y, const History::Node* trial) {
    delayed_[0] = y;
    for (std::size_t i = 1; i < rhs_.q.size(); ++i) {
      delayed_[i] = delayed_value(rhs_.q[i] * t, trial);
    }
    return rhs_.f(t, delayed_);
  }

  History::Node rk4(const History::Node& start, const History::Node* trial) {
    const double x = start.x;
    const double y = start.y;
    const double k1 = start.slope;
    const double k2 = slope(x + 0.5 * h_, y + 0.5 * h_ * k1, trial);
    const double k3 = slope(x + 0.5 * h_, y + 0.5 * h_ * k2, trial);
    const double k4 = slope(x + h_, y + h_ * k3, trial);
    History::Node end{x + h_, y + h_ / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), k4};
    // The end slope may itself look back into this step.
    for (int pass = 0; pass < 2; ++pass) end.slope = slope(end.x, end.y, &end);
    return end;
  }

  History::Node step(int k) {
    const History::Node start = history_.nodes().back();
    History::Node end = rk4(start, nullptr);
    // On the first step the only history is a single point, so the delayed
    // values inside the step are refined against the tentative end node.
    const int refinements = k == 0 ? 3 : 0;
    for (int pass = 0; pass < refinements; ++pass) end = rk4(start, &end);
    return end;
  }

  const DelayRHS& rhs_;
  double h_;
  History history_;
  std::vector<double> delayed_;
};

int step_count(double b, double h) {
  if (!(h > 0.0) || !(b > 0.0) || !std::isfinite(b)) {
    throw DomainError("b and h must be positive and finite");
  }
  const double ratio = b / h;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * ratio) {
    throw DomainError("b must be an integer multiple of h");
  }
  if (steps < 16.0) {
    throw DomainError("h must not exceed b/16");
  }
  return static_cast<int>(steps);
}

}  // namespace

double History::lookup(double s) const {
  const double last = nodes_.back().x;
  if (s > last) {
    throw DomainError("dense output requested at " + std::to_string(s) +
                      " beyond the last accepted node " + std::to_string(last));
  }
  if (s < 0.0) {
    throw DomainError("dense output requested at negative x");
  }
  auto k = static_cast<std::size_t>(s / step_);
  if (k + 1 >= nodes_.size()) {
    if (nodes_.size() == 1) return nodes_.front().y;
    k = nodes_.size() - 2;
  }
  const auto& left = nodes_[k];
  if (s == left.x) return left.y;
  return hermite(left, nodes_[k + 1], s);
}

double History::extrapolate(double s) const {
  if (nodes_.size() < 2) {
    throw DomainError("extrapolation needs two accepted nodes");
  }
  return hermite(nodes_[nodes_.size() - 2], nodes_.back(), s);
}

GridSolution integrate(const DelayRHS& rhs, double y0, double h) {
  validate_ratios(rhs.q);
  if (!rhs.f) {
    throw DomainError("right-hand side has no function");
  }
  const int steps = step_count(rhs.b, h);
  Marcher marcher(rhs, y0, rhs.b / steps);
  return marcher.run(steps);
}

GridSolution integrate(const DelaySpec& spec, double b, double h) {
  DelayRHS rhs = linear_rhs(spec, 1.0, b);
  return integrate(rhs, 1.0, h);
}

double convergence_order(const DelaySpec& spec, double b) {
  const double reference = eval(spec, b, 1e-16).value;
  const double coarse = std::abs(integrate(spec, b, b / 16.0).values.back() - reference);
  const double fine = std::abs(integrate(spec, b, b / 32.0).values.back() - reference);
  if (coarse == 0.0 || fine == 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(coarse / fine);
}

}  // namespace pantograph
