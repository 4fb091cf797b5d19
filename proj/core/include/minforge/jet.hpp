#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "minforge/expr.hpp"

namespace minforge {

/// Value, complex gradient and complex Hessian of a holomorphic function at
/// a point of C^m. The Hessian is symmetric by construction.
struct Jet2 {
  explicit Jet2(int m)
      : dim(m), value{0.0, 0.0}, grad(m), hess(static_cast<size_t>(m) * m) {}

  int dim;
  Complex value;
  std::vector<Complex> grad;
  std::vector<Complex> hess;  // row-major m*m

  Complex& h(int i, int j) { return hess[static_cast<size_t>(i) * dim + j]; }
  const Complex& h(int i, int j) const {
    return hess[static_cast<size_t>(i) * dim + j];
  }
};

enum class DomainFault {
  DivisionByZero,
  LogOfZero,
  PowOfZeroNegativeExponent,
  NonFinite,
};

/// Raised when an evaluation point sits within the singularity radius of a
/// pole or branch point of some node, or the jet overflows.
class DomainError : public std::runtime_error {
 public:
  DomainError(DomainFault fault, std::string node_path)
      : std::runtime_error(describe(fault) + " at node " + node_path),
        fault_(fault),
        node_path_(std::move(node_path)) {}

  DomainFault fault() const { return fault_; }
  const std::string& node_path() const { return node_path_; }

 private:
  static std::string describe(DomainFault f);
  DomainFault fault_;
  std::string node_path_;
};

struct EvalOptions {
  /// Pole / branch-point rejection radius, relative to 1 + |z|.
  double sing_radius = 1e-9;
};

/// Forward 2-jet propagation through the node grammar. Log and RealPow use
/// the principal branch (argument in (-pi, pi]); integer RealPow exponents
/// are evaluated by repeated multiplication and have no branch cut.
///
/// Requires z.size() == expr.arity(). Throws DomainError near poles and
/// branch points (radius EvalOptions::sing_radius relative to 1 + |z|).
Jet2 eval_jet2(const HoloExpr& expr, std::span<const Complex> z,
               const EvalOptions& opts = {});

/// Real 2-jet of Re h over R^{2m} with coordinates (x1, y1, ..., xm, ym).
struct RealParts {
  double value = 0.0;
  std::vector<double> grad;  // 2m
  std::vector<double> hess;  // (2m)^2 row-major
};

/// Converts the complex jet via the Cauchy-Riemann identities:
///   d/dx_k Re h =  Re h'_k,      d/dy_k Re h = -Im h'_k,
///   d2/dx_i dx_j Re h =  Re h''_ij,
///   d2/dx_i dy_j Re h = -Im h''_ij,
///   d2/dy_i dy_j Re h = -Re h''_ij.
RealParts real_parts_jet(const HoloExpr& expr, std::span<const Complex> z,
                         const EvalOptions& opts = {});
RealParts real_parts_jet(const Jet2& jet);

/// Proximity report used by samplers to discard bad points up front.
struct SingularityFlags {
  bool near_pole = false;        // Quotient denominator or negative power ~ 0
  bool near_branch_point = false;  // Log / fractional RealPow argument ~ 0
  bool near_cut = false;         // Log / fractional RealPow argument close to
                                 // the cut {Re <= 0, Im = 0}
  bool any() const { return near_pole || near_branch_point || near_cut; }
};

/// Value-only sweep of the tree recording how close z comes to poles,
/// branch points and principal-branch cuts. Never throws on proximity.
SingularityFlags probe_singularities(const HoloExpr& expr,
                                     std::span<const Complex> z,
                                     double sing_radius = 1e-6,
                                     double cut_margin = 1e-3);

/// Sum of |h'_k|^2; equals |D Re h|^2 = |D Im h|^2 for holomorphic h.
double grad_norm_sq(const Jet2& jet);

}  // namespace minforge
