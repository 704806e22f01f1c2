#include "pantograph/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <vector>

namespace pantograph {

struct Expression::Node {
  enum class Kind { kNumber, kX, kSlot, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos, kExp };

  Kind kind;
  double number = 0.0;
  std::size_t slot = 0;
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;

  double eval(double x, std::span<const double> y) const {
    switch (kind) {
      case Kind::kNumber: return number;
      case Kind::kX: return x;
      case Kind::kSlot: return y[slot];
      case Kind::kAdd: return lhs->eval(x, y) + rhs->eval(x, y);
      case Kind::kSub: return lhs->eval(x, y) - rhs->eval(x, y);
      case Kind::kMul: return lhs->eval(x, y) * rhs->eval(x, y);
      case Kind::kDiv: return lhs->eval(x, y) / rhs->eval(x, y);
      case Kind::kPow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
      case Kind::kNeg: return -lhs->eval(x, y);
      case Kind::kSin: return std::sin(lhs->eval(x, y));
      case Kind::kCos: return std::cos(lhs->eval(x, y));
      case Kind::kExp: return std::exp(lhs->eval(x, y));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using Kind = Node::Kind;
using NodePtr = std::unique_ptr<Node>;

NodePtr leaf(Kind kind) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  return n;
}

NodePtr unary(Kind kind, NodePtr operand) {
  auto n = leaf(kind);
  n->lhs = std::move(operand);
  return n;
}

NodePtr binary(Kind kind, NodePtr l, NodePtr r) {
  auto n = leaf(kind);
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ < text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return root;
  }

  int max_slot() const { return max_slot_; }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) {
        n = binary(Kind::kAdd, std::move(n), term());
      } else if (accept('-')) {
        n = binary(Kind::kSub, std::move(n), term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = signed_factor();
    for (;;) {
      if (accept('*')) {
        n = binary(Kind::kMul, std::move(n), signed_factor());
      } else if (accept('/')) {
        n = binary(Kind::kDiv, std::move(n), signed_factor());
      } else {
        return n;
      }
    }
  }

  NodePtr signed_factor() {
    if (accept('-')) return unary(Kind::kNeg, signed_factor());
    if (accept('+')) return signed_factor();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Kind::kPow, std::move(base), signed_factor());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of expression", pos_);
    }
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return symbol();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const auto [end, ec] = std::from_chars(first, text_.data() + text_.size(), value);
    if (ec != std::errc()) {
      throw ParseError("malformed number", start);
    }
    pos_ += static_cast<std::size_t>(end - first);
    auto n = leaf(Kind::kNumber);
    n->number = value;
    return n;
  }

  NodePtr symbol() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return leaf(Kind::kX);
    if (name.size() > 1 && name[0] == 'y') {
      std::size_t slot = 0;
      const auto [end, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), slot);
      if (ec == std::errc() && end == name.data() + name.size()) {
        auto n = leaf(Kind::kSlot);
        n->slot = slot;
        max_slot_ = std::max(max_slot_, static_cast<int>(slot));
        return n;
      }
    }
    Kind fn;
    if (name == "sin") {
      fn = Kind::kSin;
    } else if (name == "cos") {
      fn = Kind::kCos;
    } else if (name == "exp") {
      fn = Kind::kExp;
    } else {
      throw ParseError("unknown symbol '" + std::string(name) + "'", start);
    }
    expect('(');
    NodePtr arg = expr();
    expect(')');
    return unary(fn, std::move(arg));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int max_slot_ = -1;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser parser(text);
  NodePtr root = parser.parse();
  return Expression(std::shared_ptr<const Node>(std::move(root)), parser.max_slot());
}

double Expression::operator()(double x, std::span<const double> y) const {
  return root_->eval(x, y);
}

}  // namespace pantograph
