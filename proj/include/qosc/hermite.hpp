#ifndef QOSC_HERMITE_HPP
#define QOSC_HERMITE_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qosc/analytic.hpp"
#include "qosc/params.hpp"

namespace qosc {

/// Deformed Hermite functions H_n(x; e^{-s^2}) in the unified (s, t)
/// parametrization. With w = (s+t)^2/2 they satisfy
///
///   H_{n+1} = (i/s) (e^{w - isx} - e^{-w + isx}) H_n
///             - (1/s^2) (1 - e^{-2ns^2}) H_{n-1},   H_0 = 1, H_{-1} = 0,
///
/// and reduce to a real polynomial in (2/s) sin sx for t = -s. The recursion
/// is the default evaluator; the power series below is the independent
/// cross-check and works equally at complex arguments.

enum class HermiteConvention { unified_series, recursion };

struct HermiteEval {
  int n;
  cplx value;
  HermiteConvention convention;
};

/// H_n by iterating the three-term recursion. O(n), numerically stable.
inline cplx hermite_recursion_eval(int n, const cplx& x, const DeformationParams& p) {
  if (n < 0) throw std::domain_error("hermite_recursion_eval: degree must be >= 0");
  const double s = p.s;
  const double w = 0.5 * (p.s + p.t) * (p.s + p.t);
  cplx Hm = 0.0, H = 1.0;
  const cplx i_over_s(0.0, 1.0 / s);
  for (int k = 0; k < n; ++k) {
    const cplx coef = i_over_s * (std::exp(w - cplx(0.0, s) * x) -
                                  std::exp(-w + cplx(0.0, s) * x));
    const double ck = -std::expm1(-2.0 * k * s * s) / (s * s);  // (1 - e^{-2ks^2})/s^2
    const cplx Hn = coef * H - ck * Hm;
    Hm = H;
    H = Hn;
  }
  return H;
}

/// H_n by the power series
///   (i/s)^n sum_{m=0}^{n} (-1)^m [n m]_{e^{-s^2}} exp{(2m-n)(isx - w)}.
inline cplx hermite_series(int n, const cplx& x, const DeformationParams& p) {
  if (n < 0) throw std::domain_error("hermite_series: degree must be >= 0");
  const double s = p.s;
  const double z = std::exp(-s * s);
  const double w = 0.5 * (p.s + p.t) * (p.s + p.t);
  cplx tot = 0.0;
  double sign = 1.0;
  for (int m = 0; m <= n; ++m) {
    tot += sign * q_binomial(n, m, z) *
           std::exp(static_cast<double>(2 * m - n) * (cplx(0.0, s) * x - w));
    sign = -sign;
  }
  return std::pow(cplx(0.0, 1.0 / s), n) * tot;
}

inline HermiteEval hermite_eval(int n, const cplx& x, const DeformationParams& p,
                                HermiteConvention c) {
  return {n,
          c == HermiteConvention::recursion ? hermite_recursion_eval(n, x, p)
                                            : hermite_series(n, x, p),
          c};
}

inline AnalyticMap hermite_map(int n, const DeformationParams& p) {
  return AnalyticMap::from_analytic(
      [n, p](const cplx& z) { return hermite_recursion_eval(n, z, p); },
      "H" + std::to_string(n));
}

/// Normalized residual of the shift recursion
///   is (e^{isx - w} + e^{-isx + w}) H_{n+1}(x)
///     = e^{-n s^2} (e^{2isx - 2w} H_n(x - is) - e^{-2isx + 2w} H_n(x + is)),
/// with H evaluated by the series. The shifted arguments are x -+ is.
inline double second_recursion_residual(int n, const cplx& x, const DeformationParams& p) {
  if (n < 0) throw std::domain_error("second_recursion_residual: degree must be >= 0");
  const double s = p.s;
  const double w = 0.5 * (p.s + p.t) * (p.s + p.t);
  const cplx isx = cplx(0.0, s) * x;
  const cplx pref = std::exp(isx - w) + std::exp(-isx + w);
  if (std::abs(pref) < 1e-12)
    throw std::domain_error("second_recursion_residual: left-side prefactor vanishes at x");
  const cplx L = cplx(0.0, s) * pref * hermite_series(n + 1, x, p);
  const cplx R = std::exp(-n * s * s) *
                 (std::exp(2.0 * isx - 2.0 * w) * hermite_series(n, x - cplx(0.0, s), p) -
                  std::exp(-2.0 * isx + 2.0 * w) * hermite_series(n, x + cplx(0.0, s), p));
  return std::abs(L - R) / std::max({1.0, std::abs(L), std::abs(R)});
}

/// Physicists' Hermite polynomial, H_{k+1} = 2x H_k - 2k H_{k-1}. Classical
/// limit oracle for the deformed family.
inline double classical_hermite(int n, double x) {
  if (n < 0) throw std::domain_error("classical_hermite: degree must be >= 0");
  double Hm = 0.0, H = 1.0;
  for (int k = 0; k < n; ++k) {
    const double Hn = 2.0 * x * H - 2.0 * k * Hm;
    Hm = H;
    H = Hn;
  }
  return H;
}

}  // namespace qosc

#endif  // QOSC_HERMITE_HPP
