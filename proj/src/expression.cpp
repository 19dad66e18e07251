#include "minkcurv/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "minkcurv/types.hpp"

namespace minkcurv {

struct Expression::Node {
  enum class Op { Const, X, Y, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt } op;
  double value = 0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = value;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::InvalidInput,
                "expression '" + std::string(s_) + "': " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = make(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::Pow, {base, unary()});
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return make(Op::Const, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view name = s_.substr(start, pos_ - start);
      if (name == "x") return make(Op::X);
      if (name == "y") return make(Op::Y);
      if (name == "pi") return make(Op::Const, {}, std::numbers::pi);
      Op fn;
      if (name == "sin") fn = Op::Sin;
      else if (name == "cos") fn = Op::Cos;
      else if (name == "exp") fn = Op::Exp;
      else if (name == "sqrt") fn = Op::Sqrt;
      else fail("unknown identifier '" + std::string(name) + "'");
      if (!accept('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(fn, {arg});
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

Jet2 chain(const Jet2& a, double f, double f1, double f2) {
  Jet2 r;
  r.v = f;
  r.dx = f1 * a.dx;
  r.dy = f1 * a.dy;
  r.dxx = f2 * a.dx * a.dx + f1 * a.dxx;
  r.dxy = f2 * a.dx * a.dy + f1 * a.dxy;
  r.dyy = f2 * a.dy * a.dy + f1 * a.dyy;
  return r;
}

Jet2 mul(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v * b.v;
  r.dx = a.dx * b.v + a.v * b.dx;
  r.dy = a.dy * b.v + a.v * b.dy;
  r.dxx = a.dxx * b.v + 2 * a.dx * b.dx + a.v * b.dxx;
  r.dxy = a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy;
  r.dyy = a.dyy * b.v + 2 * a.dy * b.dy + a.v * b.dyy;
  return r;
}

bool is_constant(const Jet2& a) {
  return a.dx == 0 && a.dy == 0 && a.dxx == 0 && a.dxy == 0 && a.dyy == 0;
}

Jet2 eval_node(const Expression::Node& n, double x, double y) {
  switch (n.op) {
    case Op::Const: return Jet2{n.value};
    case Op::X: return Jet2{x, 1, 0};
    case Op::Y: return Jet2{y, 0, 1};
    case Op::Neg: {
      Jet2 a = eval_node(*n.args[0], x, y);
      return Jet2{-a.v, -a.dx, -a.dy, -a.dxx, -a.dxy, -a.dyy};
    }
    case Op::Add:
    case Op::Sub: {
      const Jet2 a = eval_node(*n.args[0], x, y), b = eval_node(*n.args[1], x, y);
      const double s = n.op == Op::Add ? 1.0 : -1.0;
      return Jet2{a.v + s * b.v, a.dx + s * b.dx, a.dy + s * b.dy,
                  a.dxx + s * b.dxx, a.dxy + s * b.dxy, a.dyy + s * b.dyy};
    }
    case Op::Mul: return mul(eval_node(*n.args[0], x, y), eval_node(*n.args[1], x, y));
    case Op::Div: {
      const Jet2 b = eval_node(*n.args[1], x, y);
      const Jet2 inv = chain(b, 1 / b.v, -1 / (b.v * b.v), 2 / (b.v * b.v * b.v));
      return mul(eval_node(*n.args[0], x, y), inv);
    }
    case Op::Pow: {
      const Jet2 a = eval_node(*n.args[0], x, y), b = eval_node(*n.args[1], x, y);
      if (is_constant(b)) {
        const double c = b.v;
        if (c == 0) return Jet2{1};
        if (c == 1) return a;
        if (c == 2) return mul(a, a);
        return chain(a, std::pow(a.v, c), c * std::pow(a.v, c - 1), c * (c - 1) * std::pow(a.v, c - 2));
      }
      // a^b = exp(b log a)
      const Jet2 la = chain(a, std::log(a.v), 1 / a.v, -1 / (a.v * a.v));
      const Jet2 e = mul(b, la);
      const double ev = std::exp(e.v);
      return chain(e, ev, ev, ev);
    }
    case Op::Sin: {
      const Jet2 a = eval_node(*n.args[0], x, y);
      return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v));
    }
    case Op::Cos: {
      const Jet2 a = eval_node(*n.args[0], x, y);
      return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
    }
    case Op::Exp: {
      const Jet2 a = eval_node(*n.args[0], x, y);
      const double e = std::exp(a.v);
      return chain(a, e, e, e);
    }
    case Op::Sqrt: {
      const Jet2 a = eval_node(*n.args[0], x, y);
      const double s = std::sqrt(a.v);
      return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
    }
  }
  return Jet2{};
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = std::string(text);
  return e;
}

Jet2 Expression::eval_jet(double x, double y) const { return eval_node(*root_, x, y); }

}  // namespace minkcurv
