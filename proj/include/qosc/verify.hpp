#ifndef QOSC_VERIFY_HPP
#define QOSC_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qosc/analytic.hpp"
#include "qosc/hermite.hpp"
#include "qosc/operators.hpp"
#include "qosc/params.hpp"
#include "qosc/textio.hpp"

namespace qosc {

/// Outcome of one checked identity over a probe set.
struct ResidualReport {
  std::string name;
  double max_residual = 0.0;
  int probe_count = 0;
  cplx worst_probe = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string warning;

  static ResidualReport make(std::string name, double max_residual, int probe_count,
                             cplx worst_probe, double tolerance, std::string warning = "") {
    return {std::move(name), max_residual,          probe_count,
            worst_probe,     tolerance,             max_residual <= tolerance,
            std::move(warning)};
  }
};

inline nlohmann::json to_json(const ResidualReport& r) {
  return nlohmann::json{
      {"name", r.name},
      {"max_residual", fmt17(r.max_residual)},
      {"probe_count", r.probe_count},
      {"worst_probe", {{"re", fmt17(r.worst_probe.real())}, {"im", fmt17(r.worst_probe.imag())}}},
      {"tolerance", fmt17(r.tolerance)},
      {"passed", r.passed},
      {"warning", r.warning}};
}

inline ResidualReport report_from_json(const nlohmann::json& j) {
  ResidualReport r;
  r.name = j.at("name").get<std::string>();
  r.max_residual = parse_double(j.at("max_residual").get<std::string>());
  r.probe_count = j.at("probe_count").get<int>();
  r.worst_probe = cplx(parse_double(j.at("worst_probe").at("re").get<std::string>()),
                       parse_double(j.at("worst_probe").at("im").get<std::string>()));
  r.tolerance = parse_double(j.at("tolerance").get<std::string>());
  r.passed = j.at("passed").get<bool>();
  r.warning = j.value("warning", "");
  return r;
}

namespace detail {

/// |L - R| / max(1, |L|, |R|).
inline double nresid(const cplx& L, const cplx& R) {
  return std::abs(L - R) / std::max({1.0, std::abs(L), std::abs(R)});
}

struct ResidualTracker {
  double worst = 0.0;
  cplx at = 0.0;
  int count = 0;
  void feed(double r, const cplx& z) {
    ++count;
    if (r > worst) {
      worst = r;
      at = z;
    }
  }
};

/// Portable seeded uniforms: mt19937 output mapped through its high 24 bits.
inline std::vector<double> seeded_uniform(std::uint32_t seed, int count, double lo, double hi) {
  std::mt19937 gen(seed);
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k)
    out.push_back(lo + (hi - lo) * ((gen() >> 8) / 16777216.0));
  return out;
}

}  // namespace detail

/// Probe set for residual suites: 11 Chebyshev points plus 10 fixed seeded
/// points on [lo, hi], nudged outside radius 1e-2 * s of the singular lattice.
inline std::vector<double> verification_probes(const DeformationParams& p, double lo = -2.0,
                                               double hi = 2.0) {
  std::vector<double> out = default_probes(p, lo, hi, 11);
  for (double x : detail::seeded_uniform(0x51ab5eedu, 10, lo, hi)) {
    if (p.kind == OscillatorKind::dubna) {
      while (std::abs(x - detail::nearest_g_zero(p.s, x)) < 1e-2 * p.s) x += 2.5e-2 * p.s;
    }
    out.push_back(x);
  }
  return out;
}

/// 1% style perturbations of the part-functions, for negative controls and
/// the CLI fault hook. Identity values leave the construction exact.
struct PartFunctionFault {
  double g_scale = 1.0;  // multiplies g
  double h_tilt = 0.0;   // adds tilt * x to h
  double f_width = 1.0;  // scales the Gaussian exponent of every component

  bool any() const { return g_scale != 1.0 || h_tilt != 0.0 || f_width != 1.0; }
};

inline LadderContext faulted_context(const DeformationParams& p,
                                     const GaussianSuperposition& coeffs, double a0,
                                     const PartFunctionFault& fault) {
  LadderContext ctx(p, coeffs, a0);
  if (fault.g_scale != 1.0) ctx = ctx.with_g(cplx(fault.g_scale) * ctx.g());
  if (fault.h_tilt != 0.0)
    ctx = ctx.with_h(ctx.h() + cplx(fault.h_tilt) * AnalyticMap::coordinate());
  if (fault.f_width != 1.0) {
    const double w = fault.f_width;
    ctx = ctx.with_f(AnalyticMap::from_analytic(
        [coeffs, w](const cplx& z) {
          cplx out = 0.0;
          for (const auto& [m, c] : coeffs.coefficients()) {
            const cplx d = z - coeffs.center(m);
            out += c * std::exp(-0.5 * w * d * d);
          }
          return out;
        },
        "f"));
  }
  return ctx;
}

// ---------------------------------------------------------------------------
// Defining-condition suites
// ---------------------------------------------------------------------------

/// The three macfarlane-family conditions on (f, g, h):
///   1. (q - 1/q) / (s^2 g^4) = 1
///   2. f(x-is)/(f g^2) + f/(f(x-is) g(x-is)^2)
///        = q^{-2} [f/(f(x-is) g^2) + f(x-is)/(f g(x-is)^2)] e^{i[h - h(x-is)]}
///   3. f^2 f(x-2is)^2 = q^{-2} f(x-is)^4 e^{i[h - h(x-2is)]}
/// All shifted values are computed before any ratio is formed.
inline std::vector<ResidualReport> macfarlane_condition_residuals(
    const LadderContext& ctx, const std::vector<double>& probes, double tolerance = 1e-9) {
  const auto& p = ctx.params();
  if (p.kind != OscillatorKind::macfarlane)
    throw std::domain_error("macfarlane_condition_residuals: context is not macfarlane-type");
  const double s = p.s, q = p.q;
  const AnalyticMap &f = ctx.f(), &g = ctx.g(), &h = ctx.h();
  detail::ResidualTracker t1, t2, t3;
  for (double xr : probes) {
    const cplx x(xr, 0.0);
    const cplx xm = x - cplx(0.0, s), xm2 = x - cplx(0.0, 2.0 * s);
    const cplx f0 = f(x), f1 = f(xm), f2 = f(xm2);
    const cplx g0 = g(x), g1 = g(xm);
    const cplx h0 = h(x), h1 = h(xm), h2 = h(xm2);
    t1.feed(detail::nresid((q - 1.0 / q) / (s * s * g0 * g0 * g0 * g0), 1.0), x);
    {
      const cplx L = f1 / (f0 * g0 * g0) + f0 / (f1 * g1 * g1);
      const cplx R = (f0 / (f1 * g0 * g0) + f1 / (f0 * g1 * g1)) / (q * q) *
                     std::exp(cplx(0.0, 1.0) * (h0 - h1));
      t2.feed(detail::nresid(L, R), x);
    }
    {
      const cplx L = f0 * f0 * f2 * f2;
      const cplx R = f1 * f1 * f1 * f1 / (q * q) * std::exp(cplx(0.0, 1.0) * (h0 - h2));
      t3.feed(detail::nresid(L, R), x);
    }
  }
  return {ResidualReport::make("macfarlane.g-constant", t1.worst, t1.count, t1.at, tolerance),
          ResidualReport::make("macfarlane.mixed-shift", t2.worst, t2.count, t2.at, tolerance),
          ResidualReport::make("macfarlane.f-double-shift", t3.worst, t3.count, t3.at, tolerance)};
}

/// The dubna-family conditions: two shifted-f/h relations, the raw
/// mutator-constant relation (with -4 s^2 g^2 on the right), and the
/// nonlinear g-equation in terms of F (with +4 s^2 g^2 g_-^2 g_+^2; the
/// s^2 follows from the raw relation and the known solution).
inline std::vector<ResidualReport> dubna_condition_residuals(
    const LadderContext& ctx, const std::vector<double>& probes, double tolerance = 1e-9) {
  const auto& p = ctx.params();
  if (p.kind != OscillatorKind::dubna)
    throw std::domain_error("dubna_condition_residuals: context is not dubna-type");
  const double s = p.s, q = p.q;
  const AnalyticMap &f = ctx.f(), &g = ctx.g(), &h = ctx.h();
  detail::ResidualTracker t1, t2, t3, t4;
  for (double xr : probes) {
    const cplx x(xr, 0.0);
    const cplx xp = x + cplx(0.0, s), xp2 = x + cplx(0.0, 2.0 * s);
    const cplx xm = x - cplx(0.0, s), xm2 = x - cplx(0.0, 2.0 * s);
    const cplx f0 = f(x), fp = f(xp), fp2 = f(xp2), fm = f(xm), fm2 = f(xm2);
    const cplx g0 = g(x), gp = g(xp), gm = g(xm);
    const cplx h0 = h(x), hp2 = h(xp2), hm2 = h(xm2);
    {
      const cplx L = (fp2 / fp) * (fp2 / fp);
      const cplx R = (fp / f0) * (fp / f0) / (q * q) * std::exp(cplx(0.0, 1.0) * (h0 - hp2));
      t1.feed(detail::nresid(L, R), x);
    }
    {
      const cplx L = (f0 / fm) * (f0 / fm);
      const cplx R = (fm / fm2) * (fm / fm2) / (q * q) * std::exp(cplx(0.0, 1.0) * (h0 - hm2));
      t2.feed(detail::nresid(L, R), x);
    }
    const cplx gp2 = gp * gp, gm2v = gm * gm, g02 = g0 * g0;
    {
      const cplx rp = f0 / fp, rm = f0 / fm;
      const cplx L = q * (rp * rp / gp2 + rm * rm / gm2v) -
                     (1.0 / q) * (1.0 / (rp * rp) / gp2 + 1.0 / (rm * rm) / gm2v);
      const cplx R = -4.0 * s * s * g02;
      t3.feed(detail::nresid(L, R), x);
    }
    {
      const cplx F = (fp / f0) * (fp / f0);
      const cplx L = F * (q * q * q * gp2 - gm2v / q) -
                     (gp2 / (q * q * q) - q * gm2v) / F;
      const cplx R = -4.0 * s * s * g02 * gm2v * gp2;
      t4.feed(detail::nresid(L, R), x);
    }
  }
  return {ResidualReport::make("dubna.shift-up", t1.worst, t1.count, t1.at, tolerance),
          ResidualReport::make("dubna.shift-down", t2.worst, t2.count, t2.at, tolerance),
          ResidualReport::make("dubna.mutator-constant", t3.worst, t3.count, t3.at, tolerance),
          ResidualReport::make("dubna.g-nonlinear", t4.worst, t4.count, t4.at, tolerance)};
}

// ---------------------------------------------------------------------------
// The xi/eta ansatz for g^2 and its simultaneous difference equations
// ---------------------------------------------------------------------------

/// xi(z) = eta(z) = (1/2)((1/q - q)/s^2)^{1/2} G(z) with q = e^{-s^2}:
/// the solution family of the g^2 ansatz g^2 = xi e^{-isz} + eta e^{isz}.
inline std::pair<cplx, cplx> xi_eta_solution(double s, const RedundantFactorSpec& spec,
                                             const cplx& z) {
  if (!(s > 0.0)) throw std::domain_error("xi_eta_solution: s must be positive");
  const double q = std::exp(-s * s);
  const cplx v = 0.5 * std::sqrt((1.0 / q - q) / (s * s)) * redundant_factor(spec, s, z);
  return {v, v};
}

/// Residuals of the four simultaneous difference equations satisfied by
/// (xi, eta): the xi-only equation, the two mixed ones, and the eta-only one.
inline std::vector<ResidualReport> appendix_system_residuals(
    double s, const RedundantFactorSpec& spec, const std::vector<double>& probes,
    double tolerance = 1e-9) {
  if (probes.empty()) throw std::domain_error("appendix_system_residuals: empty probe list");
  const double q = std::exp(-s * s);
  detail::ResidualTracker t1, t2, t3, t4;
  for (double xr : probes) {
    const cplx x(xr, 0.0);
    const cplx x0v = xi_eta_solution(s, spec, x).first;
    const cplx xp = xi_eta_solution(s, spec, x + cplx(0.0, s)).first;
    const cplx xm = xi_eta_solution(s, spec, x - cplx(0.0, s)).first;
    const cplx e0 = x0v, ep = xp, em = xm;  // xi = eta
    const double c = -4.0 * s * s;
    t1.feed(detail::nresid((q * q * xp - xm) / q, c * x0v * xm * xp), x);
    t2.feed(detail::nresid(q * (q * q * xp - xm / (q * q * q * q)),
                           c * (x0v * em * ep + q * q * e0 * xm * ep + e0 * em * xp / (q * q))),
            x);
    t3.feed(detail::nresid((q * q * q * q * ep - em / (q * q)) / q,
                           c * (e0 * xm * xp + q * q * x0v * xm * ep + x0v * em * xp / (q * q))),
            x);
    t4.feed(detail::nresid(q * (em - ep / (q * q)), c * e0 * em * ep), x);
  }
  return {ResidualReport::make("appendix.xi", t1.worst, t1.count, t1.at, tolerance),
          ResidualReport::make("appendix.mixed-xi", t2.worst, t2.count, t2.at, tolerance),
          ResidualReport::make("appendix.mixed-eta", t3.worst, t3.count, t3.at, tolerance),
          ResidualReport::make("appendix.eta", t4.worst, t4.count, t4.at, tolerance)};
}

/// Probe set for the appendix suite: avoids the coth pole at the origin and
/// therefore every pole of the +-is-shifted factors as well.
inline std::vector<double> appendix_probes() {
  return {0.37, 0.91, -1.23, 1.77, -0.55, 2.3, -2.1, 1.13, 0.71, -0.89};
}

/// Max |G(x) G(x + is) - 1| over probes; the function-level identity behind
/// the redundancy of G in the ladder operators. Non-integer exponents carry a
/// branch-ambiguity warning.
inline ResidualReport ginv_residual(const RedundantFactorSpec& spec, double s,
                                    const std::vector<double>& probes,
                                    double tolerance = 1e-10) {
  if (probes.empty()) throw std::domain_error("ginv_residual: empty probe list");
  detail::ResidualTracker t;
  for (double xr : probes) {
    const cplx x(xr, 0.0);
    const cplx prod =
        redundant_factor(spec, s, x) * redundant_factor(spec, s, x + cplx(0.0, s));
    t.feed(std::abs(prod - 1.0), x);
  }
  std::string warning;
  if (!spec.integer_exponents())
    warning = "non-integer exponents: principal-branch powers make the product branch-dependent";
  return ResidualReport::make("ginv", t.worst, t.count, t.at, tolerance, std::move(warning));
}

// ---------------------------------------------------------------------------
// Classical limit
// ---------------------------------------------------------------------------

/// Fits the convergence exponent of deviations from the non-deformed
/// oscillator along a decreasing s sequence: q(s) -> 1 and E_n -> n + 1/2
/// for both families, H_n -> the classical Hermite polynomial at t = -s
/// (the t = 0 family keeps an O(s) imaginary part, so only its q and E
/// deviations are rate-2). Passes when every fitted exponent is within
/// tolerance of 2 and deviations decrease monotonically.
inline ResidualReport classical_limit_report(const std::vector<double>& s_sequence,
                                             int n_max, double tolerance = 0.2) {
  if (s_sequence.size() < 2)
    throw std::domain_error("classical_limit_report: need at least two s values");
  for (std::size_t i = 0; i < s_sequence.size(); ++i) {
    if (!(s_sequence[i] > 0.0))
      throw std::domain_error("classical_limit_report: s values must be positive");
    if (i > 0 && !(s_sequence[i] < s_sequence[i - 1]))
      throw std::domain_error("classical_limit_report: s values must decrease");
  }
  if (n_max < 1) throw std::domain_error("classical_limit_report: n_max must be >= 1");

  struct Track {
    std::string label;
    std::vector<double> devs;
  };
  std::vector<Track> tracks;
  for (OscillatorKind kind : {OscillatorKind::macfarlane, OscillatorKind::dubna}) {
    Track tq{std::string("q-") + kind_name(kind), {}};
    for (double s : s_sequence) tq.devs.push_back(std::abs(make_params(s, kind).q - 1.0));
    tracks.push_back(tq);
    for (int n = 1; n <= n_max; ++n) {
      Track te{std::string("E") + std::to_string(n) + "-" + kind_name(kind), {}};
      for (double s : s_sequence)
        te.devs.push_back(std::abs(energy(n, make_params(s, kind)) - (n + 0.5)));
      tracks.push_back(te);
    }
  }
  const double xs[] = {0.5, 1.0, 2.0};
  for (int n = 1; n <= n_max; ++n) {
    Track th{"H" + std::to_string(n) + "-dubna", {}};
    for (double s : s_sequence) {
      const auto p = make_params(s, OscillatorKind::dubna);
      double d = 0.0;
      for (double x : xs)
        d = std::max(d, std::abs(hermite_recursion_eval(n, cplx(x, 0.0), p) -
                                 classical_hermite(n, x)));
      th.devs.push_back(d);
    }
    tracks.push_back(th);
  }

  double worst = 0.0;
  std::string worst_label;
  std::string table;
  bool monotone = true;
  for (const auto& tr : tracks) {
    for (std::size_t i = 1; i < tr.devs.size(); ++i)
      if (!(tr.devs[i] < tr.devs[i - 1])) monotone = false;
    // least-squares slope of log(dev) against log(s)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int N = static_cast<int>(s_sequence.size());
    for (int i = 0; i < N; ++i) {
      const double lx = std::log(s_sequence[i]);
      const double ly = std::log(tr.devs[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    const double dev = std::abs(slope - 2.0);
    table += tr.label + ": exponent " + fmt17(slope) + "\n";
    if (dev > worst) {
      worst = dev;
      worst_label = tr.label;
    }
  }
  std::string warning;
  if (worst > tolerance || !monotone)
    warning = (monotone ? "" : std::string("non-monotone deviations\n")) + table;
  ResidualReport r = ResidualReport::make("classical-limit", worst,
                                          static_cast<int>(tracks.size()),
                                          cplx(s_sequence.back(), 0.0), tolerance,
                                          std::move(warning));
  if (!monotone) r.passed = false;
  return r;
}

}  // namespace qosc

#endif  // QOSC_VERIFY_HPP
