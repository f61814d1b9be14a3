#ifndef QOSC_PARAMS_HPP
#define QOSC_PARAMS_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qosc {

enum class OscillatorKind { macfarlane, dubna };

inline const char* kind_name(OscillatorKind k) {
  return k == OscillatorKind::macfarlane ? "macfarlane" : "dubna";
}

/// Deformation parameters (s, t, q, kind).
///
/// The two admissible families are t = 0 (macfarlane, q = exp(s^2) >= 1) and
/// t = -s (dubna, q = exp(-s^2) <= 1); in both, q = exp(s^2 + t^2 + 3st).
/// q is computed once at construction and stored.
struct DeformationParams {
  double s;
  double t;
  double q;
  OscillatorKind kind;

  double log_q() const { return std::log(q); }
};

namespace detail {

inline DeformationParams params_from(double s, OscillatorKind kind) {
  const double t = kind == OscillatorKind::macfarlane ? 0.0 : -s;
  return DeformationParams{s, t, std::exp(s * s + t * t + 3.0 * s * t), kind};
}

}  // namespace detail

/// Guarded constructor: requires 0 < s <= 1.5 so that exp(+-s^2) powers and
/// the Gaussian cell width 2*pi/s stay in comfortable double range.
inline DeformationParams make_params(double s, OscillatorKind kind) {
  if (!(s > 0.0) || !(s <= 1.5))
    throw std::domain_error("make_params: s must lie in (0, 1.5], got " +
                            std::to_string(s) +
                            " (use make_params_unguarded to exceed the guard)");
  return detail::params_from(s, kind);
}

/// Unguarded constructor: any s > 0. The caller owns the overflow risk.
inline DeformationParams make_params_unguarded(double s, OscillatorKind kind) {
  if (!(s > 0.0)) throw std::domain_error("make_params_unguarded: s must be positive");
  return detail::params_from(s, kind);
}

struct SpectrumEntry {
  int n;
  double energy;
};

/// Energy level E_n = (1 - q^(-2n))/(q^2 - 1) + 1/2, via expm1 so the q -> 1
/// limit (E_n = n + 1/2) is reached smoothly.
inline double energy(int n, const DeformationParams& p) {
  if (n < 0) throw std::domain_error("energy: level index must be >= 0");
  const double L = p.log_q();
  if (L == 0.0) return n + 0.5;
  const double e = -2.0 * n * L;  // exponent of q^(-2n)
  if (e > 709.0)
    throw std::range_error("energy: q^(-2n) overflows double range at n = " +
                           std::to_string(n));
  return -std::expm1(e) / std::expm1(2.0 * L) + 0.5;
}

/// Independent oracle for energy(): iterates
///   q (E_n - C) = q^(-1) (E_{n-1} - C),  C = (q + 1/q) / (2 (q - 1/q)),
/// from E_0 = 1/2.
inline double energy_via_recursion(int n, const DeformationParams& p) {
  if (n < 0) throw std::domain_error("energy_via_recursion: level index must be >= 0");
  if (p.q == 1.0)
    throw std::domain_error("energy_via_recursion: singular at q = 1; use limit form");
  const double q = p.q;
  const double C = 0.5 * (q + 1.0 / q) / (q - 1.0 / q);
  double E = 0.5;
  const double r = 1.0 / (q * q);
  for (int m = 0; m < n; ++m) E = C + r * (E - C);
  return E;
}

/// Ratio (E_{n+1} - E_n)/(E_n - E_{n-1}). Adjacent spacings have the closed
/// form E_n - E_{n-1} = q^(-2n), which is what gets evaluated; subtracting
/// energies loses the spacing below one ulp of E_n long before q^(-2n)
/// underflows.
inline double spacing_ratio(int n, const DeformationParams& p) {
  if (n < 1) throw std::domain_error("spacing_ratio: requires n >= 1");
  const double L = p.log_q();
  const double d0 = std::exp(-2.0 * n * L);
  const double d1 = std::exp(-2.0 * (n + 1) * L);
  if (d0 == 0.0 || d1 == 0.0)
    throw std::range_error("spacing_ratio: spacing below machine resolution at n = " +
                           std::to_string(n));
  if (!std::isfinite(d0) || !std::isfinite(d1))
    throw std::range_error("spacing_ratio: spacing exceeds double range at n = " +
                           std::to_string(n));
  return d1 / d0;
}

/// N_n = prod_{m=1..n} sqrt((q - 1/q)/(1 - q^(-2m))); empty product for n = 0.
inline double normalization(int n, const DeformationParams& p) {
  if (n < 0) throw std::domain_error("normalization: level index must be >= 0");
  if (p.q == 1.0) throw std::domain_error("normalization: singular at q = 1");
  const double q = p.q;
  const double num = q - 1.0 / q;
  double out = 1.0;
  for (int m = 1; m <= n; ++m) {
    const double den = -std::expm1(-2.0 * m * p.log_q());  // 1 - q^(-2m)
    const double radicand = num / den;
    if (!(radicand > 0.0))
      throw std::logic_error("normalization: non-positive radicand (internal inconsistency)");
    out *= std::sqrt(radicand);
  }
  return out;
}

/// q-binomial [n m]_z as the cancelled product
///   prod_{j=1..m} (1 - z^(2(n-m+j)))/(1 - z^(2j)).
/// z = 1 is admitted and returns the limit, the classical binomial.
inline double q_binomial(int n, int m, double z) {
  if (n < 0 || m < 0 || m > n)
    throw std::domain_error("q_binomial: requires 0 <= m <= n");
  if (!(z > 0.0) || !(z <= 1.0))
    throw std::domain_error("q_binomial: z must lie in (0, 1]");
  double out = 1.0;
  if (z == 1.0) {
    for (int j = 1; j <= m; ++j) out *= static_cast<double>(n - m + j) / j;
    return out;
  }
  for (int j = 1; j <= m; ++j)
    out *= -std::expm1(2.0 * (n - m + j) * std::log(z)) /
           -std::expm1(2.0 * j * std::log(z));
  return out;
}

/// Spectrum bounds 1/2 <= E_n < 1/2 + 1/(q^2 - 1) for the macfarlane family.
/// q^2 - 1 is evaluated as expm1(2 log q), the same expression energy()
/// saturates against, so the bound is an upper bound in floating point too.
inline std::pair<double, double> macfarlane_bounds(const DeformationParams& p) {
  if (p.kind != OscillatorKind::macfarlane || !(p.q > 1.0))
    throw std::domain_error("macfarlane_bounds: no upper bound exists for dubna parameters");
  return {0.5, 0.5 + 1.0 / std::expm1(2.0 * p.log_q())};
}

inline std::vector<SpectrumEntry> spectrum(const DeformationParams& p, int n_max) {
  std::vector<SpectrumEntry> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) out.push_back({n, energy(n, p)});
  return out;
}

}  // namespace qosc

#endif  // QOSC_PARAMS_HPP
