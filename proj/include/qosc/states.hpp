#ifndef QOSC_STATES_HPP
#define QOSC_STATES_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qosc/analytic.hpp"
#include "qosc/hermite.hpp"
#include "qosc/operators.hpp"
#include "qosc/params.hpp"
#include "qosc/quadrature.hpp"

namespace qosc {

/// Aperiodic structure: one coefficient-weighted superposition on the whole
/// line, integration over a truncated interval that contains every Gaussian
/// center with at least 8 units of tail.
struct Aperiodic {
  GaussianSuperposition coeffs;
};

/// Periodic structure: the single-Gaussian construction on the cell
/// I_m = [(2m-1) pi/s, (2m+1) pi/s], realized as the lattice translate of
/// the m = 0 cell (all part-functions except f are 2 pi/s-periodic and the
/// eigenfunction phases are invariant under the translation).
struct Periodic {
  int cell_index = 0;
};

using GlobalStructure = std::variant<Aperiodic, Periodic>;

struct OscillatorModel {
  DeformationParams params;
  GlobalStructure structure;
  double a0 = 0.0;

  OscillatorModel(DeformationParams p, GlobalStructure st, double a0_ = 0.0)
      : params(p), structure(std::move(st)), a0(a0_) {
    if (const auto* ap = std::get_if<Aperiodic>(&structure)) {
      if (ap->coeffs.scale() != params.s)
        throw std::domain_error("OscillatorModel: superposition scale must equal params.s");
    }
  }
};

namespace detail {

inline const Aperiodic* aperiodic(const OscillatorModel& m) {
  return std::get_if<Aperiodic>(&m.structure);
}

inline double cell_offset(const OscillatorModel& m) {
  if (const auto* pe = std::get_if<Periodic>(&m.structure))
    return 2.0 * pe->cell_index * std::numbers::pi / m.params.s;
  return 0.0;
}

/// The ladder context for the model, in the m = 0 frame for periodic models.
inline LadderContext model_context(const OscillatorModel& m) {
  if (const auto* ap = aperiodic(m)) return LadderContext(m.params, ap->coeffs, m.a0);
  return LadderContext(m.params, GaussianSuperposition({{0, 1.0}}, m.params.s), m.a0);
}

}  // namespace detail

/// Default integration domain for the model: [-L, L] with L = 2 pi M / s + 8
/// for the aperiodic structure (Gaussian tails below e^{-32}), the single
/// cell I_m for the periodic one.
inline QuadratureSpec default_quadrature(const OscillatorModel& m, double rel_tol = 1e-12) {
  QuadratureSpec spec;
  spec.rel_tol = rel_tol;
  if (const auto* ap = detail::aperiodic(m)) {
    const double L = 2.0 * std::numbers::pi * ap->coeffs.max_abs_index() / m.params.s + 8.0;
    spec.lower = -L;
    spec.upper = L;
  } else {
    const auto* pe = std::get_if<Periodic>(&m.structure);
    const double s = m.params.s;
    spec.lower = (2.0 * pe->cell_index - 1.0) * std::numbers::pi / s;
    spec.upper = (2.0 * pe->cell_index + 1.0) * std::numbers::pi / s;
  }
  return spec;
}

/// Inner product over [lower, upper]: integral of conj(phi) * chi, with the
/// formal conjugate channel (g pairs with g to the signed weight g^2).
inline cplx inner_product(const AnalyticMap& phi, const AnalyticMap& chi,
                          const QuadratureSpec& spec) {
  const AnalyticMap integrand = phi.conjugate() * chi;
  return integrate(integrand, spec);
}

struct GroundState {
  AnalyticMap psi0;
  double k0;
};

/// psi_0 = K_0 f g with K_0 = [ integral of f^2 g^2 over the model domain ]^(-1/2).
/// For periodic models the norm integral runs over the m = 0 cell, whose
/// value every cell shares by translation.
inline GroundState ground_state(const OscillatorModel& m) {
  const LadderContext ctx = detail::model_context(m);
  OscillatorModel frame0 = m;
  if (!detail::aperiodic(m)) frame0 = OscillatorModel(m.params, Periodic{0}, m.a0);
  const QuadratureSpec spec = default_quadrature(frame0);
  const AnalyticMap w = ctx.f() * ctx.f() * ctx.g() * ctx.g();
  const cplx nrm = integrate(w, spec);
  if (!(nrm.real() > 0.0))
    throw std::domain_error(
        "ground_state: norm integral is not positive (pathological coefficient set)");
  const double k0 = 1.0 / std::sqrt(nrm.real());
  AnalyticMap psi0 = (cplx(k0) * ctx.f() * ctx.g()).retagged("psi0");
  const double off = detail::cell_offset(m);
  if (off != 0.0) psi0 = shift(psi0, -off).retagged("psi0");
  return {psi0, k0};
}

/// Closed-form eigenfunction
///   psi_n = K_0 f g s^n exp{i n [h + (s+t) x]}
///           prod_{m=0}^{n-1} {e^{(s+t)^2} (1 - e^{-2 s^2 (m+1)})}^{-1/2}
///           H_n(x; e^{-s^2}).
inline AnalyticMap eigenfunction(const OscillatorModel& m, int n) {
  if (n < 0) throw std::domain_error("eigenfunction: level index must be >= 0");
  const LadderContext ctx = detail::model_context(m);
  const GroundState gs0 = ground_state(m);  // m = 0 frame K0 equals any cell's K0
  const auto& p = m.params;
  const double st = p.s + p.t;
  double pref = std::pow(p.s, n);
  for (int k = 0; k < n; ++k)
    pref /= std::sqrt(std::exp(st * st) * -std::expm1(-2.0 * p.s * p.s * (k + 1)));
  const AnalyticMap phase = exp_of(
      cplx(0.0, static_cast<double>(n)),
      ctx.h() + AnalyticMap::from_analytic([st](const cplx& z) { return st * z; }, "(s+t)x"),
      "phase");
  AnalyticMap psi =
      (cplx(gs0.k0 * pref) * ctx.f() * ctx.g() * phase * hermite_map(n, p))
          .retagged("psi" + std::to_string(n));
  const double off = detail::cell_offset(m);
  if (off != 0.0) psi = shift(psi, -off).retagged("psi" + std::to_string(n));
  return psi;
}

/// Independent oracle: psi_n = N_n (A^dag)^n psi_0 by repeated raising.
/// Each level doubles the shifted evaluations per point, hence the guard.
inline AnalyticMap eigenfunction_via_ladder(const OscillatorModel& m, int n,
                                            bool allow_expensive = false) {
  if (n < 0) throw std::domain_error("eigenfunction_via_ladder: level index must be >= 0");
  if (n > 8 && !allow_expensive)
    throw std::domain_error(
        "eigenfunction_via_ladder: n > 8 costs 2^n evaluations per point; "
        "pass allow_expensive to override");
  const LadderContext ctx = detail::model_context(m);
  AnalyticMap psi = ground_state(m).psi0;
  const double off = detail::cell_offset(m);
  if (off != 0.0) psi = shift(psi, off);  // back to the m = 0 frame
  for (int k = 0; k < n; ++k) psi = apply_raising(ctx, psi);
  psi = cplx(normalization(n, m.params)) * psi;
  if (off != 0.0) psi = shift(psi, -off);
  return psi.retagged("ladder_psi" + std::to_string(n));
}

/// Gram matrix G[a][b] = <psi_a, psi_b>; Hermitian within quadrature error.
inline std::vector<std::vector<cplx>> gram_matrix(const OscillatorModel& m, int n_max,
                                                  const QuadratureSpec& spec,
                                                  bool allow_large = false) {
  if (n_max < 0) throw std::domain_error("gram_matrix: n_max must be >= 0");
  if (n_max > 6 && !allow_large)
    throw std::domain_error("gram_matrix: n_max > 6 (pass allow_large to override)");
  std::vector<AnalyticMap> psis;
  psis.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) psis.push_back(eigenfunction(m, n));
  std::vector<std::vector<cplx>> G(n_max + 1, std::vector<cplx>(n_max + 1));
  for (int a = 0; a <= n_max; ++a)
    for (int b = 0; b <= n_max; ++b) {
      try {
        G[a][b] = inner_product(psis[a], psis[b], spec);
      } catch (const convergence_error& e) {
        throw convergence_error("gram_matrix: entry (" + std::to_string(a) + ", " +
                                    std::to_string(b) + "): " + e.what(),
                                e.best_estimate(), e.error_bound());
      }
    }
  return G;
}

namespace detail {

/// Inner product that tolerates integrands which are pure roundoff noise
/// (A psi_0 is a numerical zero): when the refinement budget runs out with
/// the error bound already below accept_abs, the best estimate stands.
inline cplx inner_product_or_noise(const AnalyticMap& phi, const AnalyticMap& chi,
                                   const QuadratureSpec& spec, double accept_abs) {
  try {
    return inner_product(phi, chi, spec);
  } catch (const convergence_error& e) {
    if (e.error_bound() <= accept_abs) return e.best_estimate();
    throw;
  }
}

}  // namespace detail

/// |<phi, A^dag chi> - <A phi, chi>| / max(1, |<phi, A^dag chi>|).
inline double adjointness_residual(const OscillatorModel& m, const AnalyticMap& phi,
                                   const AnalyticMap& chi, const QuadratureSpec& spec) {
  const LadderContext ctx = detail::model_context(m);
  const double off = detail::cell_offset(m);
  AnalyticMap ph = phi, ch = chi;
  if (off != 0.0) {
    ph = shift(ph, off);
    ch = shift(ch, off);
  }
  QuadratureSpec frame = spec;
  frame.lower -= off;
  frame.upper -= off;
  const cplx lhs = detail::inner_product_or_noise(ph, apply_raising(ctx, ch), frame, 1e-9);
  const cplx rhs = detail::inner_product_or_noise(apply_lowering(ctx, ph), ch, frame,
                                                  1e-9 * std::max(1.0, std::abs(lhs)));
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

/// Max over probes of |H_q psi_n - E_n psi_n| normalized by the scale of
/// psi_n on the probe set.
inline double eigen_residual(const OscillatorModel& m, int n,
                             const std::vector<double>& probes) {
  if (n < 0 || n > 6)
    throw std::domain_error("eigen_residual: level index must be in [0, 6]");
  if (probes.empty()) throw std::domain_error("eigen_residual: empty probe list");
  const LadderContext ctx = detail::model_context(m);
  const double off = detail::cell_offset(m);
  AnalyticMap psi = eigenfunction(m, n);
  if (off != 0.0) psi = shift(psi, off);
  const AnalyticMap H = apply_hamiltonian(ctx, psi);
  const double En = energy(n, m.params);
  double worst = 0.0, scale = 0.0;
  for (double x : probes) {
    const cplx z(x, 0.0);
    const cplx pv = psi(z);
    scale = std::max(scale, std::abs(pv));
    worst = std::max(worst, std::abs(H(z) - En * pv));
  }
  if (scale == 0.0) return worst;
  return worst / scale;
}

}  // namespace qosc

#endif  // QOSC_STATES_HPP
