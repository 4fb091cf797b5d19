#include "minforge/expr.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <utility>

namespace minforge {

namespace {

using detail::ExprNode;
using detail::NodePtr;

NodePtr make_node(ExprNode n) {
  return std::make_shared<const ExprNode>(std::move(n));
}

int node_arity(const ExprNode& n) {
  int m = n.kind == NodeKind::Var ? n.var + 1 : 0;
  for (const auto& c : n.children) m = std::max(m, node_arity(*c));
  return m;
}

bool is_const(const NodePtr& n) { return n->kind == NodeKind::Const; }

}  // namespace

HoloExpr::HoloExpr()
    : root_(make_node({.kind = NodeKind::Const, .scalar = Complex{0.0, 0.0}})),
      arity_(0) {}

HoloExpr HoloExpr::var(int index) {
  if (index < 0) throw std::invalid_argument("variable index must be >= 0");
  return {make_node({.kind = NodeKind::Var, .var = index}), index + 1};
}

HoloExpr HoloExpr::constant(Complex value) {
  return {make_node({.kind = NodeKind::Const, .scalar = value}), 0};
}

HoloExpr HoloExpr::sum(std::vector<HoloExpr> terms) {
  std::vector<NodePtr> kids;
  int arity = 0;
  bool all_const = true;
  Complex folded{0.0, 0.0};
  for (auto& t : terms) {
    arity = std::max(arity, t.arity_);
    if (t.root_->kind == NodeKind::Sum) {
      for (const auto& c : t.root_->children) {
        kids.push_back(c);
        all_const = all_const && is_const(c);
        if (is_const(c)) folded += c->scalar;
      }
    } else {
      all_const = all_const && is_const(t.root_);
      if (is_const(t.root_)) folded += t.root_->scalar;
      kids.push_back(std::move(t.root_));
    }
  }
  if (kids.empty()) return constant({0.0, 0.0});
  if (all_const) return constant(folded);
  if (kids.size() == 1) return {std::move(kids.front()), arity};
  return {make_node({.kind = NodeKind::Sum, .children = std::move(kids)}),
          arity};
}

HoloExpr HoloExpr::product(std::vector<HoloExpr> factors) {
  std::vector<NodePtr> kids;
  Complex coeff{1.0, 0.0};
  int arity = 0;
  for (auto& f : factors) {
    arity = std::max(arity, f.arity_);
    NodePtr n = std::move(f.root_);
    if (n->kind == NodeKind::ScalarMul) {
      coeff *= n->scalar;
      n = n->children.front();
    }
    if (n->kind == NodeKind::Const) {
      coeff *= n->scalar;
    } else if (n->kind == NodeKind::Product) {
      for (const auto& c : n->children) kids.push_back(c);
    } else {
      kids.push_back(std::move(n));
    }
  }
  HoloExpr core = [&]() -> HoloExpr {
    if (kids.empty()) return constant({1.0, 0.0});
    if (kids.size() == 1) return {std::move(kids.front()), arity};
    return {make_node({.kind = NodeKind::Product, .children = std::move(kids)}),
            arity};
  }();
  return scalar_mul(coeff, std::move(core));
}

HoloExpr HoloExpr::quotient(HoloExpr numerator, HoloExpr denominator) {
  int arity = std::max(numerator.arity_, denominator.arity_);
  return {make_node({.kind = NodeKind::Quotient,
                     .children = {std::move(numerator.root_),
                                  std::move(denominator.root_)}}),
          arity};
}

HoloExpr HoloExpr::real_pow(HoloExpr base, double exponent) {
  if (!std::isfinite(exponent))
    throw std::invalid_argument("RealPow exponent must be finite");
  if (exponent == 1.0) return base;
  if (exponent == 0.0) return constant({1.0, 0.0});
  int arity = base.arity_;
  return {make_node({.kind = NodeKind::RealPow,
                     .exponent = exponent,
                     .children = {std::move(base.root_)}}),
          arity};
}

HoloExpr HoloExpr::exp(HoloExpr arg) {
  int arity = arg.arity_;
  return {make_node({.kind = NodeKind::Exp, .children = {std::move(arg.root_)}}),
          arity};
}

HoloExpr HoloExpr::log(HoloExpr arg) {
  int arity = arg.arity_;
  return {make_node({.kind = NodeKind::Log, .children = {std::move(arg.root_)}}),
          arity};
}

HoloExpr HoloExpr::sin(HoloExpr arg) {
  int arity = arg.arity_;
  return {make_node({.kind = NodeKind::Sin, .children = {std::move(arg.root_)}}),
          arity};
}

HoloExpr HoloExpr::scalar_mul(Complex factor, HoloExpr arg) {
  if (factor == Complex{1.0, 0.0}) return arg;
  if (arg.root_->kind == NodeKind::Const)
    return constant(factor * arg.root_->scalar);
  if (arg.root_->kind == NodeKind::ScalarMul) {
    Complex merged = factor * arg.root_->scalar;
    HoloExpr inner{arg.root_->children.front(), arg.arity_};
    return scalar_mul(merged, std::move(inner));
  }
  if (factor == Complex{0.0, 0.0}) return constant({0.0, 0.0});
  int arity = arg.arity_;
  return {make_node({.kind = NodeKind::ScalarMul,
                     .scalar = factor,
                     .children = {std::move(arg.root_)}}),
          arity};
}

HoloExpr HoloExpr::with_arity(int m) const {
  if (m < arity_)
    throw std::invalid_argument("with_arity cannot shrink below used variables");
  return {root_, m};
}

namespace {

NodePtr shift_node(const NodePtr& n, int offset) {
  if (n->kind == NodeKind::Var) {
    ExprNode out = *n;
    out.var += offset;
    return make_node(std::move(out));
  }
  if (n->children.empty()) return n;
  ExprNode out = *n;
  for (auto& c : out.children) c = shift_node(c, offset);
  return make_node(std::move(out));
}

}  // namespace

HoloExpr HoloExpr::shifted(int offset) const {
  if (offset == 0) return *this;
  return {shift_node(root_, offset), arity_ + offset};
}

namespace {

bool node_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  if (a.scalar != b.scalar || a.exponent != b.exponent || a.var != b.var)
    return false;
  if (a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!node_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

}  // namespace

bool operator==(const HoloExpr& a, const HoloExpr& b) {
  return a.arity_ == b.arity_ && node_equal(*a.root_, *b.root_);
}

std::string repr_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

// Printer. Parenthesization is chosen so the parser rebuilds the exact tree.
std::string render(const ExprNode& n);

std::string render_const(const Complex& c) {
  if (c.imag() == 0.0) return repr_double(c.real());
  if (c.real() == 0.0) {
    if (c.imag() == 1.0) return "i";
    if (c.imag() == -1.0) return "-i";
    return repr_double(c.imag()) + "i";
  }
  std::string s = "(" + repr_double(c.real());
  if (c.imag() == 1.0)
    s += "+i";
  else if (c.imag() == -1.0)
    s += "-i";
  else if (c.imag() > 0.0 || std::isnan(c.imag()))
    s += "+" + repr_double(c.imag()) + "i";
  else
    s += repr_double(c.imag()) + "i";
  return s + ")";
}

// Atom in the grammar sense: safe to use unparenthesized anywhere.
// Mixed constants render as "(a+bi)" and carry their own parens.
bool renders_atomic(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Var:
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Sin:
      return true;
    case NodeKind::Const: {
      const Complex& c = n.scalar;
      if (c.imag() == 0.0) return c.real() >= 0.0;
      if (c.real() == 0.0) return c.imag() > 0.0;
      return true;
    }
    default:
      return false;
  }
}

std::string render_pow_base(const ExprNode& n) {
  if (renders_atomic(n)) return render(n);
  return "(" + render(n) + ")";
}

// Child position inside a '*' chain: sums, quotients and non-atomic
// constants would re-associate, so they get parens.
std::string render_mul_child(const ExprNode& n) {
  if (renders_atomic(n) || n.kind == NodeKind::RealPow) return render(n);
  return "(" + render(n) + ")";
}

std::string render(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Var:
      return "z" + std::to_string(n.var + 1);
    case NodeKind::Const:
      return render_const(n.scalar);
    case NodeKind::Sum: {
      std::string s;
      for (size_t i = 0; i < n.children.size(); ++i) {
        std::string part = render(*n.children[i]);
        if (i == 0) {
          s = std::move(part);
        } else if (!part.empty() && part[0] == '-') {
          s += " - " + part.substr(1);
        } else {
          s += " + " + part;
        }
      }
      return s;
    }
    case NodeKind::Product: {
      std::string s;
      for (size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += " * ";
        s += render_mul_child(*n.children[i]);
      }
      return s;
    }
    case NodeKind::Quotient: {
      const ExprNode& num = *n.children[0];
      const ExprNode& den = *n.children[1];
      std::string lhs = (num.kind == NodeKind::Sum) ? "(" + render(num) + ")"
                                                    : render(num);
      std::string rhs = (renders_atomic(den) || den.kind == NodeKind::RealPow)
                            ? render(den)
                            : "(" + render(den) + ")";
      return lhs + " / " + rhs;
    }
    case NodeKind::RealPow:
      return render_pow_base(*n.children[0]) + "^" + repr_double(n.exponent);
    case NodeKind::Exp:
      return "exp(" + render(*n.children[0]) + ")";
    case NodeKind::Log:
      return "log(" + render(*n.children[0]) + ")";
    case NodeKind::Sin:
      return "sin(" + render(*n.children[0]) + ")";
    case NodeKind::ScalarMul: {
      const Complex& c = n.scalar;
      const ExprNode& body = *n.children[0];
      // A Product body fuses into the same '*' chain as the coefficient.
      std::string rhs = body.kind == NodeKind::Product
                            ? render(body)
                            : render_mul_child(body);
      if (c == Complex{-1.0, 0.0}) return "-" + rhs;
      return render_const(c) + " * " + rhs;
    }
  }
  return {};
}

}  // namespace

std::string to_string(const HoloExpr& expr) { return render(expr.root()); }

}  // namespace minforge
