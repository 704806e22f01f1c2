#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "pantograph/errors.hpp"

namespace pantograph {

/// Syntax error in a right-hand-side expression; `position` is the 0-based
/// offset of the offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Scalar right-hand side over the symbols x and y0, y1, ... (the delayed
/// values y(q_i x)). Supports + - * / ^, unary minus, parentheses and the
/// functions sin, cos and exp. `^` is right associative and binds tighter
/// than unary minus.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double operator()(double x, std::span<const double> y) const;

  /// Largest i such that y_i appears, or -1 when no y symbol is used.
  int max_slot() const { return max_slot_; }

  struct Node;

 private:
  explicit Expression(std::shared_ptr<const Node> root, int max_slot)
      : root_(std::move(root)), max_slot_(max_slot) {}

  std::shared_ptr<const Node> root_;
  int max_slot_;
};

}  // namespace pantograph
