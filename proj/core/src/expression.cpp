#include <cctype>
#include <cmath>
#include <memory>

#include "peaks/errors.hpp"
#include "peaks/potential.hpp"

// Recursive-descent parser for the small arithmetic grammar used to supply
// user potentials:  expr := term (('+'|'-') term)*, term := factor (('*'|'/')
// factor)*, factor := unary ('^' factor)?, primary := number | x1|x2|x3 |
// fn '(' expr ')' | '(' expr ')', fn in {sin, cos, exp, sqrt}.

namespace peaks {

namespace {

struct Node {
  enum Kind { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt } kind;
  double num = 0.0;
  int var = 0;
  std::shared_ptr<Node> a, b;

  double eval(const Point3& x) const {
    switch (kind) {
      case Num: return num;
      case Var: return x[var];
      case Add: return a->eval(x) + b->eval(x);
      case Sub: return a->eval(x) - b->eval(x);
      case Mul: return a->eval(x) * b->eval(x);
      case Div: return a->eval(x) / b->eval(x);
      case Pow: return std::pow(a->eval(x), b->eval(x));
      case Neg: return -a->eval(x);
      case Sin: return std::sin(a->eval(x));
      case Cos: return std::cos(a->eval(x));
      case Exp: return std::exp(a->eval(x));
      case Sqrt: return std::sqrt(a->eval(x));
    }
    return 0.0;
  }
};

using NodePtr = std::shared_ptr<Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  const std::string& text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ConfigError("Q.expr: " + what + " at position " + std::to_string(pos_) +
                      " in \"" + text_ + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (eat('+')) {
        e = make(Node::Add, e, term());
      } else if (eat('-')) {
        e = make(Node::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  NodePtr term() {
    NodePtr e = factor();
    for (;;) {
      if (eat('*')) {
        e = make(Node::Mul, e, factor());
      } else if (eat('/')) {
        e = make(Node::Div, e, factor());
      } else {
        return e;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    if (eat('^')) return make(Node::Pow, base, factor());  // right-associative
    return base;
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Neg, unary());
    if (eat('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos_ += used;
      auto n = make(Node::Num);
      n->num = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      const std::string id = text_.substr(pos_, end - pos_);
      pos_ = end;
      if (id == "x1" || id == "x2" || id == "x3") {
        auto n = make(Node::Var);
        n->var = id[1] - '1';
        return n;
      }
      Node::Kind fn;
      if (id == "sin") {
        fn = Node::Sin;
      } else if (id == "cos") {
        fn = Node::Cos;
      } else if (id == "exp") {
        fn = Node::Exp;
      } else if (id == "sqrt") {
        fn = Node::Sqrt;
      } else {
        fail("unknown identifier '" + id + "'");
      }
      if (!eat('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!eat(')')) fail("expected ')'");
      return make(fn, arg);
    }
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

PotentialModel make_expression_model(const std::string& expr, int t, double h, double h1,
                                     double lambda, double sigma, double delta) {
  if (t < 1 || t > 3) throw ConfigError("Q.t must lie in {1,2,3}");
  if (!(h >= 2.0)) throw ConfigError("Q.h must be >= 2");
  if (!(h1 >= h)) throw ConfigError("Q.h1 must be >= Q.h");
  if (!(lambda > 0.0)) throw ConfigError("Q.lambda must be positive");
  if (!(sigma > 0.0)) throw ConfigError("Q.sigma must be positive");
  if (!(delta > 0.0)) throw ConfigError("Q.delta must be positive");
  NodePtr ast = Parser(expr).parse();
  PotentialModel m;
  m.name = "expr:" + expr;
  m.eval = [ast](const Point3& x) { return ast->eval(x); };
  m.t = t;
  m.h = h;
  m.h1 = h1;
  m.lambda = lambda;
  m.sigma = sigma;
  m.delta = delta;
  m.Q0 = ast->eval({0.0, 0.0, 0.0});
  if (!(m.Q0 > 0.0)) throw ConfigError("Q.expr must be positive at the origin");
  // A sampled proxy for the sup bound, enough for diagnostics.
  double sup = m.Q0;
  for (int i = -4; i <= 4; ++i)
    for (int j = -4; j <= 4; ++j)
      for (int k = -4; k <= 4; ++k)
        sup = std::max(sup, std::fabs(ast->eval({delta * i / 4.0, delta * j / 4.0,
                                                 delta * k / 4.0})));
  m.sup_bound = sup;
  return m;
}

}  // namespace peaks
