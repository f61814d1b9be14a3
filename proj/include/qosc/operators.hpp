#ifndef QOSC_OPERATORS_HPP
#define QOSC_OPERATORS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qosc/analytic.hpp"
#include "qosc/params.hpp"

namespace qosc {

/// Everything needed to realize the ladder operators pointwise:
/// parameters, the Gaussian coefficients of f, and the phase constant a0.
/// The part-function maps are built once at construction.
class LadderContext {
 public:
  LadderContext(DeformationParams params, GaussianSuperposition coeffs, double a0 = 0.0)
      : params_(params), coeffs_(std::move(coeffs)), a0_(a0) {
    if (coeffs_.scale() != params_.s)
      throw std::domain_error("LadderContext: superposition scale must equal params.s");
    f_ = superposition_map(coeffs_);
    g_ = part_g_map(params_);
    h_ = part_h_map(params_, a0_);
  }

  const DeformationParams& params() const { return params_; }
  const GaussianSuperposition& coeffs() const { return coeffs_; }
  double a0() const { return a0_; }

  const AnalyticMap& f() const { return f_; }
  const AnalyticMap& g() const { return g_; }
  const AnalyticMap& h() const { return h_; }

  /// exp(sign * i * h) as a map.
  AnalyticMap phase(int sign) const {
    return exp_of(cplx(0.0, static_cast<double>(sign)), h_,
                  sign > 0 ? "e^{ih}" : "e^{-ih}");
  }

  /// Replace a part-function map (verification fault injection and the
  /// redundancy-invariance check). Scale must stay consistent.
  LadderContext with_g(AnalyticMap g) const {
    LadderContext out(*this);
    out.g_ = std::move(g);
    return out;
  }
  LadderContext with_f(AnalyticMap f) const {
    LadderContext out(*this);
    out.f_ = std::move(f);
    return out;
  }
  LadderContext with_h(AnalyticMap h) const {
    LadderContext out(*this);
    out.h_ = std::move(h);
    return out;
  }

 private:
  DeformationParams params_;
  GaussianSuperposition coeffs_;
  double a0_;
  AnalyticMap f_, g_, h_;
};

namespace detail {

/// Nearest zero of cos(s x) on the real axis: pi (2k+1) / (2s).
inline double nearest_g_zero(double s, double x_re) {
  const double spacing = std::numbers::pi / s;
  const double k = std::round((x_re - 0.5 * spacing) / spacing);
  return (k + 0.5) * spacing;
}

/// Builds numerator(z) / den(z), where den carries the zeros of g, with the
/// near-lattice guard for the dubna family. Within 1e-6 of a zero of g the
/// numerator is probed at the lattice point itself: if it does not vanish
/// there the composite has a genuine pole and evaluation throws; if it
/// cancels (as it does on Hilbert-space members) the ratio is formed
/// normally.
inline AnalyticMap over_den(const AnalyticMap& num, const AnalyticMap& den,
                            const LadderContext& ctx, double scale_hint,
                            std::string tag) {
  const auto p = ctx.params();
  if (p.kind == OscillatorKind::macfarlane)
    return (num / den).retagged(std::move(tag));
  const double s = p.s;
  auto eval = [num, den, s, scale_hint](const cplx& z) {
    const double xstar = nearest_g_zero(s, z.real());
    if (std::abs(z - cplx(xstar, 0.0)) < 1e-6) {
      const cplx witness = num(cplx(xstar, 0.0));
      if (std::abs(witness) > 1e-8 * std::max(scale_hint, 1.0))
        throw pole_error("ladder operator: pole of the composite at x = " +
                             std::to_string(xstar),
                         cplx(xstar, 0.0));
    }
    return num(z) / den(z);
  };
  auto conj_eval = [num, den, s, scale_hint](const cplx& z) {
    const double xstar = nearest_g_zero(s, z.real());
    if (std::abs(z - cplx(xstar, 0.0)) < 1e-6) {
      const cplx witness = num.conj_at(cplx(xstar, 0.0));
      if (std::abs(witness) > 1e-8 * std::max(scale_hint, 1.0))
        throw pole_error("ladder operator: pole of the composite at x = " +
                             std::to_string(xstar),
                         cplx(xstar, 0.0));
    }
    return num.conj_at(z) / den.conj_at(z);
  };
  return AnalyticMap::with_conjugate(std::move(eval), std::move(conj_eval), std::move(tag));
}

/// Rough magnitude of psi/(fg)-type inner values near the lattice, used to
/// normalize the pole witness. One evaluation at a fixed off-lattice point.
inline double witness_scale(const AnalyticMap& num, double s) {
  const double x0 = 0.25 * std::numbers::pi / s;  // halfway into the first cell
  const double v = std::abs(num(cplx(x0, 0.0)));
  return std::isfinite(v) ? v : 1.0;
}

}  // namespace detail

/// Lowering operator: A psi = (f/g) e^{-ih} D[psi/(f g)];
/// evaluation at a zero of g is guarded on the composite f D[psi/(fg)].
inline AnalyticMap apply_lowering(const LadderContext& ctx, const AnalyticMap& psi) {
  const auto& p = ctx.params();
  const AnalyticMap inner =
      detail::over_den(psi, ctx.f() * ctx.g(), ctx, detail::witness_scale(psi, p.s),
                       "psi/(fg)");
  const AnalyticMap num = ctx.f() * q_derivative(inner, p);
  return (ctx.phase(-1) *
          detail::over_den(num, ctx.g(), ctx, detail::witness_scale(num, p.s), "A.num"))
      .retagged("A(" + psi.tag() + ")");
}

/// Raising operator: A^dag psi = -(1/(f g)) D[(f/g) e^{ih} psi].
inline AnalyticMap apply_raising(const LadderContext& ctx, const AnalyticMap& psi) {
  const auto& p = ctx.params();
  const AnalyticMap fpsi = ctx.f() * ctx.phase(+1) * psi;
  const AnalyticMap arg = detail::over_den(fpsi, ctx.g(), ctx,
                                           detail::witness_scale(fpsi, p.s),
                                           "(f/g)e^{ih}psi");
  const AnalyticMap num = cplx(-1.0) * q_derivative(arg, p);
  return detail::over_den(num, ctx.f() * ctx.g(), ctx, detail::witness_scale(num, p.s),
                          "Adag(" + psi.tag() + ")");
}

/// Hamiltonian action: H_q psi = (1/2)(q A A^dag + q^{-1} A^dag A) psi.
inline AnalyticMap apply_hamiltonian(const LadderContext& ctx, const AnalyticMap& psi) {
  const double q = ctx.params().q;
  return (cplx(0.5 * q) * apply_lowering(ctx, apply_raising(ctx, psi)) +
          cplx(0.5 / q) * apply_raising(ctx, apply_lowering(ctx, psi)))
      .retagged("H(" + psi.tag() + ")");
}

/// Default probe set: 11 Chebyshev-spaced points on [lo, hi], nudged off the
/// dubna singular lattice.
inline std::vector<double> default_probes(const DeformationParams& p, double lo = -2.0,
                                          double hi = 2.0, int count = 11) {
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    double x = 0.5 * (lo + hi) +
               0.5 * (hi - lo) * std::cos(k * std::numbers::pi / (count - 1));
    if (p.kind == OscillatorKind::dubna) {
      while (std::abs(x - detail::nearest_g_zero(p.s, x)) < 1e-2 * p.s) x += 2.5e-2 * p.s;
    }
    out.push_back(x);
  }
  return out;
}

/// Max over probes of |(q A A^dag - q^{-1} A^dag A) phi - phi| / max(1, |phi|).
inline double mutator_residual(const LadderContext& ctx, const AnalyticMap& phi,
                               const std::vector<double>& probes) {
  if (probes.empty()) throw std::domain_error("mutator_residual: empty probe list");
  const double q = ctx.params().q;
  const AnalyticMap lhs = cplx(q) * apply_lowering(ctx, apply_raising(ctx, phi)) -
                          cplx(1.0 / q) * apply_raising(ctx, apply_lowering(ctx, phi));
  double worst = 0.0;
  for (double x : probes) {
    const cplx z(x, 0.0);
    const cplx pv = phi(z);
    worst = std::max(worst, std::abs(lhs(z) - pv) / std::max(1.0, std::abs(pv)));
  }
  return worst;
}

/// Dubna-family operator T psi = (1/(2g(x))) [(psi/g)(x + is) + (psi/g)(x - is)].
inline AnalyticMap apply_T(const LadderContext& ctx, const AnalyticMap& psi) {
  const auto& p = ctx.params();
  if (p.kind != OscillatorKind::dubna)
    throw std::domain_error("apply_T: T is defined for dubna-type parameters");
  const AnalyticMap over_g = psi / ctx.g();
  const AnalyticMap num = cplx(0.5) *
                          (shift(over_g, cplx(0.0, p.s)) + shift(over_g, cplx(0.0, -p.s)));
  return detail::over_den(num, ctx.g(), ctx, detail::witness_scale(num, p.s),
                          "T(" + psi.tag() + ")");
}

namespace detail {

inline double max_normalized_residual(const AnalyticMap& lhs, const AnalyticMap& rhs,
                                      const std::vector<double>& probes) {
  if (probes.empty()) throw std::domain_error("residual: empty probe list");
  double worst = 0.0;
  for (double x : probes) {
    const cplx z(x, 0.0);
    const cplx a = lhs(z), b = rhs(z);
    worst = std::max(worst,
                     std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}));
  }
  return worst;
}

}  // namespace detail

/// Residual of T^2 = s^2 q^{-1} (A^dag A + q/(1 - q^2)) applied to psi.
inline double T_bilinear_residual(const LadderContext& ctx, const AnalyticMap& psi,
                                  const std::vector<double>& probes) {
  const auto& p = ctx.params();
  if (p.kind != OscillatorKind::dubna)
    throw std::domain_error("T_bilinear_residual: defined for dubna-type parameters");
  const double s = p.s, q = p.q;
  const AnalyticMap lhs = apply_T(ctx, apply_T(ctx, psi));
  const AnalyticMap rhs =
      cplx(s * s / q) * apply_raising(ctx, apply_lowering(ctx, psi)) +
      cplx(s * s / q * q / (1.0 - q * q)) * psi;
  return detail::max_normalized_residual(lhs, rhs, probes);
}

/// Residual of T = (s/(2 sin sx)) [q^{-1/2} e^{ih} A + q^{1/2} e^{-ih} A^dag]
/// applied to psi; probes must avoid zeros of sin(sx).
inline double T_linear_residual(const LadderContext& ctx, const AnalyticMap& psi,
                                const std::vector<double>& probes) {
  const auto& p = ctx.params();
  if (p.kind != OscillatorKind::dubna)
    throw std::domain_error("T_linear_residual: defined for dubna-type parameters");
  if (probes.empty()) throw std::domain_error("T_linear_residual: empty probe list");
  const double s = p.s, q = p.q;
  const AnalyticMap T = apply_T(ctx, psi);
  const AnalyticMap comb = cplx(1.0 / std::sqrt(q)) * ctx.phase(+1) * apply_lowering(ctx, psi) +
                           cplx(std::sqrt(q)) * ctx.phase(-1) * apply_raising(ctx, psi);
  double worst = 0.0;
  for (double x : probes) {
    const double sn = std::sin(s * x);
    if (std::abs(sn) < 1e-9)
      throw std::domain_error("T_linear_residual: probe at a zero of sin(sx): x = " +
                              std::to_string(x));
    const cplx z(x, 0.0);
    const cplx a = T(z);
    const cplx b = s / (2.0 * sn) * comb(z);
    worst = std::max(worst,
                     std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}));
  }
  return worst;
}

}  // namespace qosc

#endif  // QOSC_OPERATORS_HPP
