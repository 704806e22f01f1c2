#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pantograph {

/// Base for every failure raised by the library. The CLI maps the concrete
/// subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the mathematical inputs does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An intermediate quantity overflowed or became non-finite.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The requested tail tolerance could not be met within the term budget.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double achieved_tail, std::size_t terms)
      : Error(what), achieved_tail_(achieved_tail), terms_(terms) {}

  double achieved_tail() const noexcept { return achieved_tail_; }
  std::size_t terms() const noexcept { return terms_; }

 private:
  double achieved_tail_;
  std::size_t terms_;
};

/// Successive approximation did not settle within the iteration budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_increment)
      : Error(what), last_increment_(last_increment) {}

  double last_increment() const noexcept { return last_increment_; }

 private:
  double last_increment_;
};

/// An iterate left the rectangle on which the Lipschitz hypothesis holds.
class EscapeError : public Error {
 public:
  EscapeError(const std::string& what, int iteration)
      : Error(what), iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// The marching integrator produced a non-finite state.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double last_good_x)
      : Error(what), last_good_x_(last_good_x) {}

  double last_good_x() const noexcept { return last_good_x_; }

 private:
  double last_good_x_;
};

}  // namespace pantograph
