#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace minforge {

using Complex = std::complex<double>;

/// Node grammar of the expression trees. Every node denotes a holomorphic
/// function of the variables z1..zm that appear below it.
enum class NodeKind {
  Var,        // z_k
  Const,      // complex literal
  Sum,        // c1 + c2 + ... (n-ary, flattened)
  Product,    // c1 * c2 * ... (n-ary, flattened, scalars folded out)
  Quotient,   // numerator / denominator
  RealPow,    // base ^ r, r a real literal (principal branch off integers)
  Exp,
  Log,        // principal branch, cut on (-inf, 0]
  Sin,
  ScalarMul,  // c * child, c a complex scalar
};

namespace detail {

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  Complex scalar{};   // Const value / ScalarMul factor
  double exponent{};  // RealPow
  int var{};          // Var index (0-based)
  std::vector<NodePtr> children;
};

}  // namespace detail

/// Immutable tree describing a holomorphic function C^m -> C.
///
/// Trees are built through the static constructors below, which keep them in
/// a canonical form: sums and products are flattened, scalar factors are
/// folded into a single leading ScalarMul, and trivial wrappers (x^1, 1*x,
/// empty sums) collapse. The printer and parser are exact inverses on
/// canonical trees.
class HoloExpr {
 public:
  /// Default-constructed expression is the constant 0 with arity 0.
  HoloExpr();

  static HoloExpr var(int index);
  static HoloExpr constant(Complex value);
  static HoloExpr sum(std::vector<HoloExpr> terms);
  static HoloExpr product(std::vector<HoloExpr> factors);
  static HoloExpr quotient(HoloExpr numerator, HoloExpr denominator);
  static HoloExpr real_pow(HoloExpr base, double exponent);
  static HoloExpr exp(HoloExpr arg);
  static HoloExpr log(HoloExpr arg);
  static HoloExpr sin(HoloExpr arg);
  static HoloExpr scalar_mul(Complex factor, HoloExpr arg);

  /// Number of complex variables (max var index + 1, unless widened).
  int arity() const { return arity_; }

  /// Same tree viewed as a function of m >= arity() variables.
  HoloExpr with_arity(int m) const;

  /// Same tree with every variable index shifted up by `offset`.
  HoloExpr shifted(int offset) const;

  const detail::ExprNode& root() const { return *root_; }
  const detail::NodePtr& root_ptr() const { return root_; }

  /// Structural equality (same shape, bit-equal scalars and exponents).
  friend bool operator==(const HoloExpr& a, const HoloExpr& b);

 private:
  HoloExpr(detail::NodePtr root, int arity)
      : root_(std::move(root)), arity_(arity) {}

  detail::NodePtr root_;
  int arity_ = 0;
};

/// Canonical mini-language rendering; parse_expr(to_string(e)) == e.
std::string to_string(const HoloExpr& expr);

/// Shortest decimal rendering of a double that reparses to the same bits.
std::string repr_double(double x);

}  // namespace minforge
