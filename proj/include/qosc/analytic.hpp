#ifndef QOSC_ANALYTIC_HPP
#define QOSC_ANALYTIC_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "qosc/params.hpp"

namespace qosc {

using cplx = std::complex<double>;

/// Evaluation hit a pole of the composed expression.
class pole_error : public std::runtime_error {
 public:
  pole_error(const std::string& what, cplx location)
      : std::runtime_error(what), location_(location) {}
  cplx location() const { return location_; }

 private:
  cplx location_;
};

/// A function evaluable at complex arguments, as a closed-form evaluator.
///
/// Every map carries a second evaluator for its *formal conjugate*: the
/// analytic function whose coefficients are conjugated. For ordinary leaves
/// this is the Schwarz reflection z -> conj(f(conj z)); maps declared
/// formally real (the part-function g, whose square is real on the real
/// axis while principal-branch values need not be) conjugate to themselves.
/// Combinators propagate both channels, so inner products can pair g with g
/// to the signed weight g^2 rather than |g|^2.
class AnalyticMap {
 public:
  using Eval = std::function<cplx(const cplx&)>;

  AnalyticMap() : AnalyticMap(constant(0.0)) {}

  /// Leaf with the Schwarz-reflection conjugate.
  static AnalyticMap from_analytic(Eval f, std::string tag) {
    Eval fc = [f](const cplx& z) { return std::conj(f(std::conj(z))); };
    return AnalyticMap(std::move(f), std::move(fc), std::move(tag));
  }

  /// Leaf that is its own formal conjugate.
  static AnalyticMap formally_real(Eval f, std::string tag) {
    Eval fc = f;
    return AnalyticMap(std::move(f), std::move(fc), std::move(tag));
  }

  static AnalyticMap with_conjugate(Eval f, Eval fbar, std::string tag) {
    return AnalyticMap(std::move(f), std::move(fbar), std::move(tag));
  }

  static AnalyticMap constant(cplx c) {
    return AnalyticMap([c](const cplx&) { return c; },
                       [c](const cplx&) { return std::conj(c); }, "const");
  }

  static AnalyticMap coordinate() {
    return AnalyticMap([](const cplx& z) { return z; },
                       [](const cplx& z) { return z; }, "z");
  }

  cplx operator()(const cplx& z) const { return impl_->eval(z); }

  /// Evaluate the formal conjugate map at z.
  cplx conj_at(const cplx& z) const { return impl_->conj_eval(z); }

  AnalyticMap conjugate() const {
    return AnalyticMap(impl_->conj_eval, impl_->eval, "conj(" + impl_->tag + ")");
  }

  const std::string& tag() const { return impl_->tag; }

  AnalyticMap retagged(std::string tag) const {
    return AnalyticMap(impl_->eval, impl_->conj_eval, std::move(tag));
  }

 private:
  AnalyticMap(Eval f, Eval fc, std::string tag)
      : impl_(std::make_shared<const Impl>(Impl{std::move(f), std::move(fc), std::move(tag)})) {}

  struct Impl {
    Eval eval;
    Eval conj_eval;
    std::string tag;
  };
  std::shared_ptr<const Impl> impl_;
};

inline AnalyticMap operator+(const AnalyticMap& a, const AnalyticMap& b) {
  return AnalyticMap::with_conjugate(
      [a, b](const cplx& z) { return a(z) + b(z); },
      [a, b](const cplx& z) { return a.conj_at(z) + b.conj_at(z); },
      "(" + a.tag() + "+" + b.tag() + ")");
}

inline AnalyticMap operator-(const AnalyticMap& a, const AnalyticMap& b) {
  return AnalyticMap::with_conjugate(
      [a, b](const cplx& z) { return a(z) - b(z); },
      [a, b](const cplx& z) { return a.conj_at(z) - b.conj_at(z); },
      "(" + a.tag() + "-" + b.tag() + ")");
}

inline AnalyticMap operator*(const AnalyticMap& a, const AnalyticMap& b) {
  return AnalyticMap::with_conjugate(
      [a, b](const cplx& z) { return a(z) * b(z); },
      [a, b](const cplx& z) { return a.conj_at(z) * b.conj_at(z); },
      "(" + a.tag() + "*" + b.tag() + ")");
}

inline AnalyticMap operator/(const AnalyticMap& a, const AnalyticMap& b) {
  return AnalyticMap::with_conjugate(
      [a, b](const cplx& z) { return a(z) / b(z); },
      [a, b](const cplx& z) { return a.conj_at(z) / b.conj_at(z); },
      "(" + a.tag() + "/" + b.tag() + ")");
}

inline AnalyticMap operator*(cplx c, const AnalyticMap& a) {
  return AnalyticMap::with_conjugate(
      [c, a](const cplx& z) { return c * a(z); },
      [c, a](const cplx& z) { return std::conj(c) * a.conj_at(z); }, a.tag());
}

inline AnalyticMap operator*(const AnalyticMap& a, cplx c) { return c * a; }

/// z -> map(z + a). Shifting the formal conjugate shifts by conj(a).
inline AnalyticMap shift(const AnalyticMap& map, cplx a) {
  const cplx ac = std::conj(a);
  return AnalyticMap::with_conjugate(
      [map, a](const cplx& z) { return map(z + a); },
      [map, ac](const cplx& z) { return map.conj_at(z + ac); },
      "shift(" + map.tag() + ")");
}

/// z -> exp(c * map(z)) for real-analytic exponents.
inline AnalyticMap exp_of(cplx c, const AnalyticMap& map, std::string tag) {
  return AnalyticMap::with_conjugate(
      [c, map](const cplx& z) { return std::exp(c * map(z)); },
      [c, map](const cplx& z) { return std::exp(std::conj(c) * map.conj_at(z)); },
      std::move(tag));
}

// ---------------------------------------------------------------------------
// Gaussian superposition (the part-function f)
// ---------------------------------------------------------------------------

/// Coefficients c_m of f(x) = sum_m c_m exp(-(x - 2 m pi / s)^2 / 2).
///
/// The index set is finite, c_0 must be nonzero (the central Gaussian is the
/// one surviving the s -> 0 limit), and uniform coefficients over an infinite
/// index set are unrepresentable by construction.
class GaussianSuperposition {
 public:
  GaussianSuperposition(std::map<int, double> coefficients, double s)
      : coeffs_(std::move(coefficients)), s_(s) {
    if (!(s_ > 0.0)) throw std::domain_error("GaussianSuperposition: scale s must be positive");
    auto it = coeffs_.find(0);
    if (it == coeffs_.end() || it->second == 0.0)
      throw std::domain_error("GaussianSuperposition: the m = 0 coefficient must be nonzero");
    for (const auto& [m, c] : coeffs_)
      if (!std::isfinite(c))
        throw std::domain_error("GaussianSuperposition: coefficient c_" + std::to_string(m) +
                                " is not finite");
  }

  const std::map<int, double>& coefficients() const { return coeffs_; }
  double scale() const { return s_; }

  double center(int m) const { return 2.0 * m * std::numbers::pi / s_; }

  int max_abs_index() const {
    int M = 0;
    for (const auto& [m, c] : coeffs_) M = std::max(M, std::abs(m));
    return M;
  }

 private:
  std::map<int, double> coeffs_;
  double s_;
};

/// f evaluated at a complex point; entire, so this is exact continuation.
inline cplx eval_f(const GaussianSuperposition& coeffs, const cplx& z) {
  cplx out = 0.0;
  for (const auto& [m, c] : coeffs.coefficients()) {
    const cplx d = z - coeffs.center(m);
    out += c * std::exp(-0.5 * d * d);
  }
  return out;
}

inline AnalyticMap superposition_map(const GaussianSuperposition& coeffs) {
  return AnalyticMap::from_analytic(
      [coeffs](const cplx& z) { return eval_f(coeffs, z); }, "f");
}

/// Closed form of the squared L2 norm:
///   sqrt(pi) * sum_{n,m} c_n c_m exp(-(m-n)^2 pi^2 / s^2).
inline double f_square_norm(const GaussianSuperposition& coeffs) {
  const double s = coeffs.scale();
  double tot = 0.0;
  for (const auto& [n, cn] : coeffs.coefficients())
    for (const auto& [m, cm] : coeffs.coefficients()) {
      const double d = static_cast<double>(m - n) * std::numbers::pi / s;
      tot += cn * cm * std::exp(-d * d);
    }
  return std::sqrt(std::numbers::pi) * tot;
}

// ---------------------------------------------------------------------------
// Part-functions g, h and the ratio function F
// ---------------------------------------------------------------------------

/// The constant prefactor of g: ((exp(s^2) - exp(-s^2)) / s^2)^(1/4).
inline double g_prefactor(const DeformationParams& p) {
  return std::pow((std::exp(p.s * p.s) - std::exp(-p.s * p.s)) / (p.s * p.s), 0.25);
}

/// g(z) = g_prefactor * sqrt(cos(t z)) (principal branch).
/// Macfarlane (t = 0) reduces to the constant; dubna to the sqrt(cos sx)
/// family. Zeros of g (dubna, z = pi(2k+1)/(2s)) are legitimate zeros; poles
/// of 1/g are handled where the ratio is formed.
inline cplx part_g(const DeformationParams& p, const cplx& z) {
  const double gamma = g_prefactor(p);
  if (p.t == 0.0) return gamma;
  return gamma * std::sqrt(std::cos(p.t * z));
}

/// g as a map; formally real (its square is real on the real axis).
inline AnalyticMap part_g_map(const DeformationParams& p) {
  if (p.t == 0.0) {
    const double gamma = g_prefactor(p);
    return AnalyticMap::formally_real([gamma](const cplx&) { return gamma; }, "g");
  }
  return AnalyticMap::formally_real([p](const cplx& z) { return part_g(p, z); }, "g");
}

/// h(z) = -2 (s + t) z + a0. Linear for macfarlane, the constant a0 for dubna.
inline cplx part_h(const DeformationParams& p, const cplx& z, double a0) {
  return -2.0 * (p.s + p.t) * z + a0;
}

inline AnalyticMap part_h_map(const DeformationParams& p, double a0) {
  return AnalyticMap::from_analytic(
      [p, a0](const cplx& z) { return part_h(p, z, a0); }, "h");
}

/// F(z) = [f(z + i s)/f(z)]^2, formed as the literal ratio. For any
/// coefficient set on the lattice 2 m pi / s this equals exp(s^2 - 2 i s z)
/// identically; that closed form is the test oracle, not the implementation.
inline cplx big_F(const GaussianSuperposition& coeffs, const DeformationParams& p,
                  const cplx& z) {
  if (coeffs.scale() != p.s)
    throw std::domain_error("big_F: superposition scale does not match params.s");
  const cplx den = eval_f(coeffs, z);
  if (den == cplx(0.0))
    throw pole_error("big_F: f vanishes at the evaluation point", z);
  const cplx r = eval_f(coeffs, z + cplx(0.0, p.s)) / den;
  return r * r;
}

// ---------------------------------------------------------------------------
// Redundant factor G
// ---------------------------------------------------------------------------

/// Exponents and lattice indices of G(z) =
///   tanh^kappa[(2 mu + 1) pi z / (2 s)] * coth^lambda[(2 nu + 1) pi z / (2 s)].
struct RedundantFactorSpec {
  double kappa = 0.0;
  double lambda = 0.0;
  int mu = 0;
  int nu = 0;

  bool integer_exponents() const {
    return kappa == std::floor(kappa) && lambda == std::floor(lambda);
  }
};

namespace detail {

inline bool is_integer(double x) { return x == std::floor(x) && std::abs(x) < 1e15; }

/// w^p with exact sign handling for integer p; principal branch otherwise.
inline cplx cpow(const cplx& w, double p) {
  if (p == 0.0) return 1.0;
  if (is_integer(p) && std::abs(p) <= 64.0) {
    long n = static_cast<long>(p);
    cplx base = n > 0 ? w : cplx(1.0) / w;
    cplx out = 1.0;
    for (long k = std::labs(n); k > 0; --k) out *= base;
    return out;
  }
  return std::pow(w, p);
}

}  // namespace detail

/// Evaluate G; throws pole_error on a coth pole with positive exponent.
inline cplx redundant_factor(const RedundantFactorSpec& spec, double s, const cplx& z) {
  if (!(s > 0.0)) throw std::domain_error("redundant_factor: s must be positive");
  cplx out = 1.0;
  if (spec.kappa != 0.0) {
    const cplx a = (2.0 * spec.mu + 1.0) * std::numbers::pi * z / (2.0 * s);
    out *= detail::cpow(std::tanh(a), spec.kappa);
  }
  if (spec.lambda != 0.0) {
    const cplx b = (2.0 * spec.nu + 1.0) * std::numbers::pi * z / (2.0 * s);
    const cplx sh = std::sinh(b);
    if (sh == cplx(0.0))
      throw pole_error("redundant_factor: coth pole", z);
    out *= detail::cpow(std::cosh(b) / sh, spec.lambda);
  }
  if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
    throw pole_error("redundant_factor: evaluation diverged", z);
  return out;
}

inline AnalyticMap redundant_factor_map(const RedundantFactorSpec& spec, double s) {
  return AnalyticMap::from_analytic(
      [spec, s](const cplx& z) { return redundant_factor(spec, s, z); }, "G");
}

// ---------------------------------------------------------------------------
// q-derivative
// ---------------------------------------------------------------------------

/// D map: z -> (i/(s - t)) [map(z - i s) - map(z - i t)].
/// Macfarlane: (i/s)[map(z - i s) - map(z)]; dubna: (i/(2s))[map(z - i s) - map(z + i s)].
inline AnalyticMap q_derivative(const AnalyticMap& map, const DeformationParams& p) {
  if (p.s == p.t)
    throw std::domain_error("q_derivative: singular operator for s == t");
  const cplx c = cplx(0.0, 1.0) / (p.s - p.t);
  return (c * (shift(map, cplx(0.0, -p.s)) - shift(map, cplx(0.0, -p.t))))
      .retagged("D(" + map.tag() + ")");
}

}  // namespace qosc

#endif  // QOSC_ANALYTIC_HPP
