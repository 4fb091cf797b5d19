#include "minforge/jet.hpp"

#include <cmath>

namespace minforge {

std::string DomainError::describe(DomainFault f) {
  switch (f) {
    case DomainFault::DivisionByZero: return "division by zero";
    case DomainFault::LogOfZero: return "log of zero";
    case DomainFault::PowOfZeroNegativeExponent:
      return "power of zero with non-positive-integer exponent";
    case DomainFault::NonFinite: return "non-finite value";
  }
  return "domain error";
}

namespace {

using detail::ExprNode;

std::string path_string(const std::vector<int>& path) {
  if (path.empty()) return "/";
  std::string s;
  for (int i : path) s += "/" + std::to_string(i);
  return s;
}

struct Evaluator {
  std::span<const Complex> z;
  double sing_threshold;  // absolute: sing_radius * (1 + |z|)
  std::vector<int> path;

  [[noreturn]] void fail(DomainFault fault) {
    throw DomainError(fault, path_string(path));
  }

  // out := out + s * a  elementwise over the full jet
  static void axpy(Jet2& out, const Complex& s, const Jet2& a) {
    out.value += s * a.value;
    for (int i = 0; i < out.dim; ++i) out.grad[i] += s * a.grad[i];
    for (size_t i = 0; i < out.hess.size(); ++i) out.hess[i] += s * a.hess[i];
  }

  // Product rule: (uv)'' = u''v + u'v' + v'u' + uv''.
  static Jet2 mul(const Jet2& u, const Jet2& v) {
    Jet2 r(u.dim);
    r.value = u.value * v.value;
    for (int i = 0; i < u.dim; ++i)
      r.grad[i] = u.grad[i] * v.value + u.value * v.grad[i];
    for (int i = 0; i < u.dim; ++i)
      for (int j = 0; j <= i; ++j) {
        Complex hij = u.h(i, j) * v.value + u.grad[i] * v.grad[j] +
                      u.grad[j] * v.grad[i] + u.value * v.h(i, j);
        r.h(i, j) = hij;
        r.h(j, i) = hij;
      }
    return r;
  }

  // Chain rule for a scalar map w = f(u): w' = c1 u', w'' = c1 u'' + c2 u' u'.
  static Jet2 compose(const Jet2& u, Complex value, Complex c1, Complex c2) {
    Jet2 r(u.dim);
    r.value = value;
    for (int i = 0; i < u.dim; ++i) r.grad[i] = c1 * u.grad[i];
    for (int i = 0; i < u.dim; ++i)
      for (int j = 0; j <= i; ++j) {
        Complex hij = c1 * u.h(i, j) + c2 * u.grad[i] * u.grad[j];
        r.h(i, j) = hij;
        r.h(j, i) = hij;
      }
    return r;
  }

  Jet2 reciprocal(const Jet2& u) {
    if (std::abs(u.value) <= sing_threshold) fail(DomainFault::DivisionByZero);
    Complex inv = 1.0 / u.value;
    // (1/u)' = -u'/u^2, (1/u)'' = -u''/u^2 + 2 u'u'/u^3
    return compose(u, inv, -inv * inv, 2.0 * inv * inv * inv);
  }

  static Complex ipow(Complex base, long n) {
    // n >= 0
    Complex acc{1.0, 0.0};
    Complex b = base;
    for (long k = n; k > 0; k >>= 1) {
      if (k & 1) acc *= b;
      if (k > 1) b *= b;
    }
    return acc;
  }

  Jet2 real_power(const Jet2& u, double r) {
    double rounded = std::nearbyint(r);
    if (r == rounded && std::abs(rounded) <= 64.0) {
      long n = static_cast<long>(rounded);
      if (n >= 2) {
        // Entire for n >= 0; u == 0 is fine.
        Complex vm2 = ipow(u.value, n - 2);
        Complex vm1 = vm2 * u.value;
        return compose(u, vm1 * u.value, double(n) * vm1,
                       double(n) * double(n - 1) * vm2);
      }
      // Negative integer exponents: pole at u == 0, but still cut-free.
      if (std::abs(u.value) <= sing_threshold)
        fail(DomainFault::DivisionByZero);
      Complex inv = 1.0 / u.value;
      Complex v = ipow(inv, -n);
      return compose(u, v, double(n) * v * inv,
                     double(n) * double(n - 1) * v * inv * inv);
    }
    // Fractional exponent: principal branch through exp(r log u).
    if (std::abs(u.value) <= sing_threshold)
      fail(DomainFault::PowOfZeroNegativeExponent);
    Complex inv = 1.0 / u.value;
    Complex v = std::exp(r * std::log(u.value));
    return compose(u, v, r * v * inv, r * (r - 1.0) * v * inv * inv);
  }

  Jet2 eval(const ExprNode& n) {
    const int m = static_cast<int>(z.size());
    switch (n.kind) {
      case NodeKind::Var: {
        Jet2 r(m);
        r.value = z[n.var];
        r.grad[n.var] = {1.0, 0.0};
        return r;
      }
      case NodeKind::Const: {
        Jet2 r(m);
        r.value = n.scalar;
        return r;
      }
      case NodeKind::Sum: {
        Jet2 r(m);
        for (size_t i = 0; i < n.children.size(); ++i) {
          path.push_back(static_cast<int>(i));
          Jet2 c = eval(*n.children[i]);
          path.pop_back();
          axpy(r, {1.0, 0.0}, c);
        }
        check_value(r);
        return r;
      }
      case NodeKind::Product: {
        path.push_back(0);
        Jet2 r = eval(*n.children[0]);
        path.pop_back();
        for (size_t i = 1; i < n.children.size(); ++i) {
          path.push_back(static_cast<int>(i));
          Jet2 c = eval(*n.children[i]);
          path.pop_back();
          r = mul(r, c);
        }
        check_value(r);
        return r;
      }
      case NodeKind::Quotient: {
        path.push_back(0);
        Jet2 num = eval(*n.children[0]);
        path.pop_back();
        path.push_back(1);
        Jet2 den = eval(*n.children[1]);
        path.pop_back();
        Jet2 r = mul(num, reciprocal(den));
        check_value(r);
        return r;
      }
      case NodeKind::RealPow: {
        path.push_back(0);
        Jet2 base = eval(*n.children[0]);
        path.pop_back();
        Jet2 r = real_power(base, n.exponent);
        check_value(r);
        return r;
      }
      case NodeKind::Exp: {
        path.push_back(0);
        Jet2 u = eval(*n.children[0]);
        path.pop_back();
        Complex v = std::exp(u.value);
        Jet2 r = compose(u, v, v, v);
        check_value(r);
        return r;
      }
      case NodeKind::Log: {
        path.push_back(0);
        Jet2 u = eval(*n.children[0]);
        path.pop_back();
        if (std::abs(u.value) <= sing_threshold) fail(DomainFault::LogOfZero);
        Complex inv = 1.0 / u.value;
        Jet2 r = compose(u, std::log(u.value), inv, -inv * inv);
        check_value(r);
        return r;
      }
      case NodeKind::Sin: {
        path.push_back(0);
        Jet2 u = eval(*n.children[0]);
        path.pop_back();
        Complex s = std::sin(u.value);
        Complex c = std::cos(u.value);
        Jet2 r = compose(u, s, c, -s);
        check_value(r);
        return r;
      }
      case NodeKind::ScalarMul: {
        path.push_back(0);
        Jet2 u = eval(*n.children[0]);
        path.pop_back();
        Jet2 r(m);
        axpy(r, n.scalar, u);
        check_value(r);
        return r;
      }
    }
    throw std::logic_error("unreachable node kind");
  }

  void check_value(const Jet2& r) {
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
      fail(DomainFault::NonFinite);
  }
};

double point_scale(std::span<const Complex> z) {
  double mx = 0.0;
  for (const Complex& c : z) mx = std::max(mx, std::abs(c));
  return 1.0 + mx;
}

}  // namespace

Jet2 eval_jet2(const HoloExpr& expr, std::span<const Complex> z,
               const EvalOptions& opts) {
  if (static_cast<int>(z.size()) != expr.arity())
    throw std::invalid_argument("point dimension does not match arity");
  Evaluator ev{z, opts.sing_radius * point_scale(z), {}};
  Jet2 jet = ev.eval(expr.root());
  for (const Complex& g : jet.grad)
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
      throw DomainError(DomainFault::NonFinite, "/");
  for (const Complex& h : jet.hess)
    if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
      throw DomainError(DomainFault::NonFinite, "/");
  return jet;
}

RealParts real_parts_jet(const Jet2& jet) {
  const int m = jet.dim;
  RealParts out;
  out.value = jet.value.real();
  out.grad.assign(2 * static_cast<size_t>(m), 0.0);
  out.hess.assign(4 * static_cast<size_t>(m) * m, 0.0);
  auto H = [&](int a, int b) -> double& {
    return out.hess[static_cast<size_t>(a) * 2 * m + b];
  };
  for (int k = 0; k < m; ++k) {
    out.grad[2 * k] = jet.grad[k].real();
    out.grad[2 * k + 1] = -jet.grad[k].imag();
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Complex& hij = jet.h(i, j);
      H(2 * i, 2 * j) = hij.real();
      H(2 * i, 2 * j + 1) = -hij.imag();
      H(2 * i + 1, 2 * j) = -hij.imag();
      H(2 * i + 1, 2 * j + 1) = -hij.real();
    }
  return out;
}

RealParts real_parts_jet(const HoloExpr& expr, std::span<const Complex> z,
                         const EvalOptions& opts) {
  return real_parts_jet(eval_jet2(expr, z, opts));
}

namespace {

struct Prober {
  std::span<const Complex> z;
  double sing_threshold;
  double cut_margin;
  SingularityFlags flags;

  Complex value(const ExprNode& n) {
    switch (n.kind) {
      case NodeKind::Var:
        return z[n.var];
      case NodeKind::Const:
        return n.scalar;
      case NodeKind::Sum: {
        Complex s{0.0, 0.0};
        for (const auto& c : n.children) s += value(*c);
        return s;
      }
      case NodeKind::Product: {
        Complex p{1.0, 0.0};
        for (const auto& c : n.children) p *= value(*c);
        return p;
      }
      case NodeKind::Quotient: {
        Complex num = value(*n.children[0]);
        Complex den = value(*n.children[1]);
        if (std::abs(den) <= sing_threshold) flags.near_pole = true;
        return num / den;
      }
      case NodeKind::RealPow: {
        Complex u = value(*n.children[0]);
        double r = n.exponent;
        bool integral = r == std::nearbyint(r) && std::abs(r) <= 64.0;
        if (integral) {
          if (r < 0.0 && std::abs(u) <= sing_threshold) flags.near_pole = true;
        } else {
          check_branch(u);
        }
        return std::pow(u, Complex(r, 0.0));
      }
      case NodeKind::Exp:
        return std::exp(value(*n.children[0]));
      case NodeKind::Log: {
        Complex u = value(*n.children[0]);
        check_branch(u);
        return std::log(u);
      }
      case NodeKind::Sin:
        return std::sin(value(*n.children[0]));
      case NodeKind::ScalarMul:
        return n.scalar * value(*n.children[0]);
    }
    return {0.0, 0.0};
  }

  void check_branch(const Complex& u) {
    if (std::abs(u) <= sing_threshold) flags.near_branch_point = true;
    if (u.real() <= 0.0 && std::abs(u.imag()) <= cut_margin * (1.0 + std::abs(u)))
      flags.near_cut = true;
  }
};

}  // namespace

SingularityFlags probe_singularities(const HoloExpr& expr,
                                     std::span<const Complex> z,
                                     double sing_radius, double cut_margin) {
  if (static_cast<int>(z.size()) != expr.arity())
    throw std::invalid_argument("point dimension does not match arity");
  Prober p{z, sing_radius * point_scale(z), cut_margin, {}};
  Complex v = p.value(expr.root());
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    p.flags.near_pole = true;
  return p.flags;
}

double grad_norm_sq(const Jet2& jet) {
  double s = 0.0;
  for (const Complex& g : jet.grad) s += std::norm(g);
  return s;
}

}  // namespace minforge
