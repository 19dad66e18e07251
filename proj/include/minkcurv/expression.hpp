#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace minkcurv {

// Value, gradient and Hessian of a scalar function of (x, y).
struct Jet2 {
  double v = 0;
  double dx = 0, dy = 0;
  double dxx = 0, dxy = 0, dyy = 0;
};

// Arithmetic expression in x and y: + - * / ^, unary minus, parentheses,
// numbers, the constant pi, and sin cos exp sqrt. Evaluation carries exact
// first and second derivatives (forward mode).
class Expression {
 public:
  static Expression parse(std::string_view text);

  double eval(double x, double y) const { return eval_jet(x, y).v; }
  Jet2 eval_jet(double x, double y) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace minkcurv
