#pragma once

#include <cmath>

namespace pantograph {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays accurate
/// when an added term is larger in magnitude than the running sum, which
/// happens routinely in alternating series.
template <typename T>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(T initial) : sum_(initial) {}

  CompensatedSum& operator+=(T value) {
    const T t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  T value() const { return sum_ + compensation_; }

 private:
  T sum_{};
  T compensation_{};
};

}  // namespace pantograph
