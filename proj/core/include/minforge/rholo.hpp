#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minforge/expr.hpp"
#include "minforge/jet.hpp"

namespace minforge {

/// S(z) = sum_{i,j} conj(h''_ij) h'_i h'_j. A holomorphic h belongs to the
/// class T^m exactly when S(z) = mu(z) h(z) for some real-valued mu.
Complex s_form(const HoloExpr& expr, std::span<const Complex> z,
               const EvalOptions& opts = {});
Complex s_form(const Jet2& jet);

/// mu extraction at a point. mu is real iff Im(S * conj(h)) vanishes; the
/// realness residual is |Im(S conj h)| / (|S||h| + eps) and always lies in
/// [0, 1]. Points with |h| under the degeneracy floor carry no mu.
struct MuEval {
  Complex h;
  Complex s;
  double residual = 0.0;
  std::optional<double> mu;
  bool degenerate = false;
};

MuEval mu_eval(const HoloExpr& expr, std::span<const Complex> z,
               double degeneracy_floor_rel = 1e-8, const EvalOptions& opts = {});

class RealnessViolation : public std::runtime_error {
 public:
  explicit RealnessViolation(double residual)
      : std::runtime_error("S(z) is not a real multiple of h(z), residual " +
                           repr_double(residual)),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class DegenerateSample : public std::runtime_error {
 public:
  DegenerateSample() : std::runtime_error("|h| below the degeneracy floor") {}
};

/// Strict variant: returns mu, throws RealnessViolation above tol and
/// DegenerateSample when |h| is under the floor.
double mu_at(const HoloExpr& expr, std::span<const Complex> z,
             double tol = 1e-8, const EvalOptions& opts = {});

enum class Verdict { Certified, Rejected, Inconclusive };

std::string to_string(Verdict v);

/// Closed-form shape detected in the sampled mu values, when any.
struct MuProfile {
  enum class Kind { Zero, Constant, NormQuadratic, SampledOnly };
  Kind kind = Kind::SampledOnly;
  double coeff = 0.0;  // Constant: mu == coeff; NormQuadratic: mu == coeff*sum|z_i|^2
};

struct RholoSample {
  std::vector<Complex> z;
  Complex s;
  double residual = 0.0;
  std::optional<double> mu;
  bool degenerate = false;
};

struct RholoOptions {
  int n_samples = 200;
  std::uint64_t seed = 12345;
  double tol = 1e-8;
  double cut_margin = 1e-3;        // branch-cut avoidance for the sampler
  double degeneracy_floor_rel = 1e-8;
  int max_draw_factor = 50;        // give up after n_samples * factor draws
};

struct RholoCertificate {
  std::string expr_text;
  int arity = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int n_samples = 0;
  Verdict verdict = Verdict::Inconclusive;
  MuProfile mu_profile;
  std::vector<RholoSample> samples;
  int rejected_draws = 0;  // points discarded by the pole/cut pre-filter
};

/// Samples seeded complex Gaussian points, rejects those near poles or
/// branch cuts, and aggregates mu realness into a verdict:
///   certified    - every non-degenerate sample has residual <= tol and
///                  degenerate samples have |S| compatible with S = mu h;
///   rejected     - some clean sample has residual > 10 tol, or a degenerate
///                  sample has |S| far from zero;
///   inconclusive - only marginal or degenerate violations were seen.
/// Deterministic for a fixed seed and options.
RholoCertificate certify_rholo(const HoloExpr& expr, const RholoOptions& opts = {});

/// Canonical JSON rendering (stable key order, shortest-round-trip numbers).
std::string certificate_json(const RholoCertificate& cert);

// --- closure combinators -------------------------------------------------

/// c * h^r. Membership in T^m is preserved for any complex c != 0, real r.
HoloExpr power(const HoloExpr& h, double r, Complex c);

/// h(z) * g(w) over C^{m+n}; g's variables are reindexed after h's. The mu
/// of the product is mu|g|^2 + nu|h|^2 + 2 |D_z h|^2 |D_w g|^2.
HoloExpr product(const HoloExpr& h, const HoloExpr& g);

/// h(z) / g(w) over C^{m+n}, composed as product(h, power(g, -1, 1)).
HoloExpr quotient(const HoloExpr& h, const HoloExpr& g);

/// i e^{z_{m+1}} h(z). The zero set of its real part is the graph
/// x_{2m+1} = arg h(z) up to a reflection.
HoloExpr arg_lift(const HoloExpr& h);

/// c z_1^{p_1} ... z_m^{p_m}. Re = 0 is a minimal (in general singularly
/// immersed) algebraic cone; gcd(p_1..p_m) = 1 is the customary
/// normalization, check with lawson_exponents_coprime.
HoloExpr lawson_cone(std::span<const int> exponents, Complex c);

bool lawson_exponents_coprime(std::span<const int> exponents);

}  // namespace minforge
