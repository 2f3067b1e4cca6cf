#include "dspin/expression.hpp"

#include <cctype>
#include <cmath>
#include <map>

namespace dspin {

namespace {

struct Node {
  virtual ~Node() = default;
  virtual double eval(double t) const = 0;
};
using NodePtr = std::unique_ptr<Node>;

struct Const : Node {
  double v;
  explicit Const(double x) : v(x) {}
  double eval(double) const override { return v; }
};

struct Var : Node {
  double eval(double t) const override { return t; }
};

struct Unary : Node {
  double (*fn)(double);
  NodePtr arg;
  Unary(double (*f)(double), NodePtr a) : fn(f), arg(std::move(a)) {}
  double eval(double t) const override { return fn(arg->eval(t)); }
};

struct Binary : Node {
  char op;
  NodePtr lhs, rhs;
  Binary(char o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
  double eval(double t) const override {
    const double a = lhs->eval(t), b = rhs->eval(t);
    switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default: return std::pow(a, b);
    }
  }
};

double neg(double x) { return -x; }

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size())
      fail(Errc::config_invalid,
           "expression: unexpected token '" + s_.substr(pos_, 8) + "'");
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = std::make_unique<Binary>('+', std::move(lhs), term());
      else if (accept('-'))
        lhs = std::make_unique<Binary>('-', std::move(lhs), term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = std::make_unique<Binary>('*', std::move(lhs), factor());
      else if (accept('/'))
        lhs = std::make_unique<Binary>('/', std::move(lhs), factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    if (accept('^')) return std::make_unique<Binary>('^', std::move(base), factor());
    return base;
  }

  NodePtr unary() {
    if (accept('-')) return std::make_unique<Unary>(&neg, unary());
    if (accept('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail(Errc::config_invalid, "expression: unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail(Errc::config_invalid, "expression: missing ')'");
      return e;
    }
    fail(Errc::config_invalid, std::string("expression: unexpected character '") + c + "'");
  }

  NodePtr number() {
    std::size_t used = 0;
    const double v = std::stod(s_.substr(pos_), &used);
    pos_ += used;
    return std::make_unique<Const>(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "t" || name == "phi") return std::make_unique<Var>();
    if (name == "pi") return std::make_unique<Const>(kPi);
    if (name == "e") return std::make_unique<Const>(std::exp(1.0));

    static const std::map<std::string, double (*)(double)> fns = {
        {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},  {"asin", std::asin},
        {"acos", std::acos}, {"atan", std::atan}, {"sinh", std::sinh}, {"cosh", std::cosh},
        {"tanh", std::tanh}, {"exp", std::exp},   {"log", std::log},  {"sqrt", std::sqrt},
        {"abs", std::fabs}};
    const auto it = fns.find(name);
    if (it == fns.end())
      fail(Errc::config_invalid, "expression: unknown identifier '" + name + "'");
    if (!accept('(')) fail(Errc::config_invalid, "expression: '" + name + "' needs '('");
    NodePtr a = expr();
    if (!accept(')')) fail(Errc::config_invalid, "expression: missing ')'");
    return std::make_unique<Unary>(it->second, std::move(a));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

} // namespace

std::function<double(double)> compile_expression(const std::string& text) {
  Parser p(text);
  std::shared_ptr<Node> root(p.parse().release());
  return [root](double t) { return root->eval(t); };
}

std::shared_ptr<CurveOnSurface> make_expression_curve(
    std::shared_ptr<const SurfacePatch> surface, const std::string& u_expr,
    const std::string& v_expr, double t0, double t1, bool closed, int n_samples) {
  auto fu = compile_expression(u_expr);
  auto fv = compile_expression(v_expr);
  auto surf = surface;
  CurveOnSurface::Closures cl;
  cl.chart_point = [fu, fv](double t) { return Vec2(fu(t), fv(t)); };
  cl.position = [fu, fv, surf](double t) { return surf->point(fu(t), fv(t)); };
  return std::make_shared<CurveOnSurface>(surface, std::move(cl), t0, t1, closed, n_samples);
}

} // namespace dspin
