#include "minforge/rholo.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "minforge/rng.hpp"

#include "json.hpp"

namespace minforge {

Complex s_form(const Jet2& jet) {
  Complex s{0.0, 0.0};
  const int m = jet.dim;
  for (int i = 0; i < m; ++i) {
    // diagonal
    s += std::conj(jet.h(i, i)) * jet.grad[i] * jet.grad[i];
    // off-diagonal pairs, Hessian is symmetric
    for (int j = 0; j < i; ++j)
      s += 2.0 * std::conj(jet.h(i, j)) * jet.grad[i] * jet.grad[j];
  }
  return s;
}

Complex s_form(const HoloExpr& expr, std::span<const Complex> z,
               const EvalOptions& opts) {
  return s_form(eval_jet2(expr, z, opts));
}

namespace {

double hess_frobenius(const Jet2& jet) {
  double s = 0.0;
  for (const Complex& h : jet.hess) s += std::norm(h);
  return std::sqrt(s);
}

double jet_scale(const Jet2& jet, std::span<const Complex> z) {
  double zn = 0.0;
  for (const Complex& c : z) zn = std::max(zn, std::abs(c));
  double r = 1.0 + zn;
  return std::sqrt(grad_norm_sq(jet)) * r + hess_frobenius(jet) * r * r;
}

constexpr double kTinyDenominator = std::numeric_limits<double>::min();

}  // namespace

MuEval mu_eval(const HoloExpr& expr, std::span<const Complex> z,
               double degeneracy_floor_rel, const EvalOptions& opts) {
  Jet2 jet = eval_jet2(expr, z, opts);
  MuEval out;
  out.h = jet.value;
  out.s = s_form(jet);
  Complex s_hbar = out.s * std::conj(out.h);
  out.residual = std::abs(s_hbar.imag()) /
                 (std::abs(out.s) * std::abs(out.h) + kTinyDenominator);
  double floor = degeneracy_floor_rel * jet_scale(jet, z);
  if (std::abs(out.h) < floor) {
    out.degenerate = true;
  } else {
    out.mu = s_hbar.real() / std::norm(out.h);
  }
  return out;
}

double mu_at(const HoloExpr& expr, std::span<const Complex> z, double tol,
             const EvalOptions& opts) {
  MuEval e = mu_eval(expr, z, 1e-8, opts);
  if (e.degenerate) throw DegenerateSample();
  if (e.residual > tol) throw RealnessViolation(e.residual);
  return *e.mu;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::Rejected: return "rejected";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

MuProfile classify_mu(const std::vector<RholoSample>& samples) {
  std::vector<double> mu;
  std::vector<double> zsq;
  for (const auto& s : samples) {
    if (!s.mu) continue;
    double n2 = 0.0;
    for (const Complex& c : s.z) n2 += std::norm(c);
    mu.push_back(*s.mu);
    zsq.push_back(n2);
  }
  MuProfile p;
  if (mu.empty()) return p;

  bool all_zero = true;
  for (double v : mu)
    if (std::abs(v) > 1e-12) { all_zero = false; break; }
  if (all_zero) {
    p.kind = MuProfile::Kind::Zero;
    return p;
  }

  double mean = std::accumulate(mu.begin(), mu.end(), 0.0) / double(mu.size());
  bool constant = true;
  for (double v : mu)
    if (std::abs(v - mean) > 1e-9 * std::max(1e-300, std::abs(mean))) {
      constant = false;
      break;
    }
  if (constant) {
    p.kind = MuProfile::Kind::Constant;
    p.coeff = mean;
    return p;
  }

  bool quadratic = true;
  double csum = 0.0;
  int n = 0;
  for (size_t i = 0; i < mu.size(); ++i) {
    if (zsq[i] < 1e-12) continue;
    csum += mu[i] / zsq[i];
    ++n;
  }
  if (n == 0) return p;
  double c = csum / double(n);
  for (size_t i = 0; i < mu.size(); ++i) {
    if (zsq[i] < 1e-12) continue;
    if (std::abs(mu[i] - c * zsq[i]) > 1e-9 * std::abs(c * zsq[i])) {
      quadratic = false;
      break;
    }
  }
  if (quadratic && c != 0.0) {
    p.kind = MuProfile::Kind::NormQuadratic;
    p.coeff = c;
  }
  return p;
}

}  // namespace

RholoCertificate certify_rholo(const HoloExpr& expr, const RholoOptions& opts) {
  if (opts.n_samples < 1)
    throw std::invalid_argument("certify_rholo needs n_samples >= 1");
  RholoCertificate cert;
  cert.expr_text = to_string(expr);
  cert.arity = expr.arity();
  cert.seed = opts.seed;
  cert.tol = opts.tol;
  cert.n_samples = opts.n_samples;

  const int m = expr.arity();
  SampleRng rng(opts.seed);
  std::vector<Complex> z(static_cast<size_t>(std::max(m, 1)));

  long max_draws = static_cast<long>(opts.n_samples) * opts.max_draw_factor;
  long draws = 0;
  while (static_cast<int>(cert.samples.size()) < opts.n_samples &&
         draws < max_draws) {
    ++draws;
    for (int i = 0; i < m; ++i) z[i] = rng.gaussian_complex();
    std::span<const Complex> pt(z.data(), static_cast<size_t>(m));
    SingularityFlags flags =
        probe_singularities(expr, pt, 10.0 * 1e-9, opts.cut_margin);
    if (flags.any()) {
      ++cert.rejected_draws;
      continue;
    }
    RholoSample sample;
    sample.z.assign(pt.begin(), pt.end());
    try {
      MuEval e = mu_eval(expr, pt, opts.degeneracy_floor_rel);
      sample.s = e.s;
      sample.residual = e.residual;
      sample.mu = e.mu;
      sample.degenerate = e.degenerate;
    } catch (const DomainError&) {
      ++cert.rejected_draws;
      continue;
    }
    cert.samples.push_back(std::move(sample));
  }

  // Verdict aggregation. Certification demands residual <= tol on every
  // sample. Rejection needs a violation that cannot be blamed on degeneracy:
  // residual > 10 tol at a point where |h| and |S| are both above the floor.
  // Degenerate samples (h ~ 0) skip the realness vote, but S = mu h forces
  // S ~ 0 there, so an order-one |S| at such a point also rejects.
  bool any_violation = false;
  bool strong_clean_violation = false;
  bool degenerate_s_breach = false;

  for (const auto& s : cert.samples) {
    if (s.residual > opts.tol) any_violation = true;
    if (s.degenerate) {
      Jet2 jet = eval_jet2(expr, s.z);
      double s_scale =
          hess_frobenius(jet) * grad_norm_sq(jet) + kTinyDenominator;
      if (std::abs(s.s) > std::sqrt(opts.tol) * s_scale)
        degenerate_s_breach = true;
      continue;
    }
    if (s.residual > 10.0 * opts.tol) {
      Jet2 jet = eval_jet2(expr, s.z);
      double s_scale =
          hess_frobenius(jet) * grad_norm_sq(jet) + kTinyDenominator;
      if (std::abs(s.s) >= opts.degeneracy_floor_rel * s_scale)
        strong_clean_violation = true;
    }
  }

  if (strong_clean_violation || degenerate_s_breach)
    cert.verdict = Verdict::Rejected;
  else if (any_violation || cert.samples.empty())
    cert.verdict = Verdict::Inconclusive;
  else
    cert.verdict = Verdict::Certified;

  if (cert.verdict == Verdict::Certified)
    cert.mu_profile = classify_mu(cert.samples);
  return cert;
}

namespace {

nlohmann::ordered_json complex_json(const Complex& c) {
  return nlohmann::ordered_json::array({c.real(), c.imag()});
}

}  // namespace

std::string certificate_json(const RholoCertificate& cert) {
  nlohmann::ordered_json j;
  j["expr"] = cert.expr_text;
  j["arity"] = cert.arity;
  j["seed"] = cert.seed;
  j["tol"] = cert.tol;
  j["n_samples"] = cert.n_samples;
  j["verdict"] = to_string(cert.verdict);
  nlohmann::ordered_json prof;
  switch (cert.mu_profile.kind) {
    case MuProfile::Kind::Zero:
      prof["kind"] = "zero";
      break;
    case MuProfile::Kind::Constant:
      prof["kind"] = "constant";
      prof["coeff"] = cert.mu_profile.coeff;
      break;
    case MuProfile::Kind::NormQuadratic:
      prof["kind"] = "norm-quadratic";
      prof["coeff"] = cert.mu_profile.coeff;
      break;
    case MuProfile::Kind::SampledOnly:
      prof["kind"] = "sampled-only";
      break;
  }
  j["mu_profile"] = prof;
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (const auto& s : cert.samples) {
    nlohmann::ordered_json js;
    nlohmann::ordered_json zv = nlohmann::ordered_json::array();
    for (const Complex& c : s.z) zv.push_back(complex_json(c));
    js["z"] = zv;
    js["S"] = complex_json(s.s);
    if (s.mu)
      js["mu"] = *s.mu;
    else
      js["mu"] = nullptr;
    js["residual"] = s.residual;
    js["degenerate"] = s.degenerate;
    samples.push_back(js);
  }
  j["samples"] = samples;
  j["rejected_draws"] = cert.rejected_draws;
  return j.dump(2);
}

HoloExpr power(const HoloExpr& h, double r, Complex c) {
  if (c == Complex{0.0, 0.0})
    throw std::invalid_argument("power: scalar must be nonzero");
  return HoloExpr::scalar_mul(c, HoloExpr::real_pow(h, r));
}

HoloExpr product(const HoloExpr& h, const HoloExpr& g) {
  HoloExpr shifted = g.shifted(h.arity());
  return HoloExpr::product({h.with_arity(shifted.arity()), std::move(shifted)});
}

HoloExpr quotient(const HoloExpr& h, const HoloExpr& g) {
  return product(h, power(g, -1.0, {1.0, 0.0}));
}

HoloExpr arg_lift(const HoloExpr& h) {
  HoloExpr lift = HoloExpr::exp(HoloExpr::var(h.arity()));
  return HoloExpr::scalar_mul(
      {0.0, 1.0}, HoloExpr::product({h.with_arity(h.arity() + 1), std::move(lift)}));
}

HoloExpr lawson_cone(std::span<const int> exponents, Complex c) {
  if (exponents.empty())
    throw std::invalid_argument("lawson_cone needs at least one exponent");
  std::vector<HoloExpr> factors;
  factors.reserve(exponents.size());
  for (size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 1)
      throw std::invalid_argument("lawson_cone exponents must be positive");
    factors.push_back(
        HoloExpr::real_pow(HoloExpr::var(static_cast<int>(i)), exponents[i]));
  }
  return HoloExpr::scalar_mul(c, HoloExpr::product(std::move(factors)));
}

bool lawson_exponents_coprime(std::span<const int> exponents) {
  int g = 0;
  for (int p : exponents) g = std::gcd(g, p);
  return g == 1;
}

}  // namespace minforge
