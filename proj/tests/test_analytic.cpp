#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "qosc/analytic.hpp"
#include "qosc/quadrature.hpp"

using namespace qosc;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<double> rand_reals(std::mt19937& gen, int count, double lo, double hi) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(lo + (hi - lo) * ((gen() >> 8) / 16777216.0));
  return out;
}
}  // namespace

TEST_CASE("GaussianSuperposition validation") {
  CHECK_THROWS_AS(GaussianSuperposition({{1, 1.0}}, 1.0), std::domain_error);
  CHECK_THROWS_AS(GaussianSuperposition({{0, 0.0}}, 1.0), std::domain_error);
  CHECK_THROWS_AS(GaussianSuperposition({{0, 1.0}}, 0.0), std::domain_error);
  const GaussianSuperposition c({{0, 1.0}, {2, 0.5}}, 0.5);
  CHECK(c.max_abs_index() == 2);
  CHECK(c.center(1) == Approx(2.0 * pi / 0.5));
}

TEST_CASE("eval_f at real and complex points") {
  const GaussianSuperposition one({{0, 1.0}}, 1.0);
  CHECK(eval_f(one, 0.0) == cplx(1.0));
  CHECK(std::abs(eval_f(one, cplx(0.0, 1.0)) - std::exp(0.5)) < 1e-15);
  const GaussianSuperposition two({{0, 1.0}, {1, 1.0}}, 1.0);
  CHECK(std::abs(eval_f(two, pi) - 2.0 * std::exp(-pi * pi / 2.0)) < 1e-15);
}

TEST_CASE("f_square_norm closed form") {
  const GaussianSuperposition one({{0, 1.0}}, 1.0);
  CHECK(f_square_norm(one) == Approx(std::sqrt(pi)).epsilon(1e-15));
  const GaussianSuperposition two({{0, 1.0}, {1, 1.0}}, 1.0);
  CHECK(f_square_norm(two) ==
        Approx(std::sqrt(pi) * (2.0 + 2.0 * std::exp(-pi * pi))).epsilon(1e-14));
  // quadrature oracle
  const GaussianSuperposition c({{0, 1.0}, {1, 0.5}}, 0.5);
  const AnalyticMap f = superposition_map(c);
  const cplx val = integrate(f * f, QuadratureSpec{-40.0, 40.0, 1e-13, 4000});
  CHECK(std::abs(val - f_square_norm(c)) < 1e-10);
}

TEST_CASE("shift combinator") {
  const GaussianSuperposition c({{0, 1.0}}, 1.0);
  const AnalyticMap f = superposition_map(c);
  CHECK(shift(f, 0.0)(0.37) == f(0.37));
  const AnalyticMap round_trip = shift(shift(f, cplx(0.0, 1.0)), cplx(0.0, -1.0));
  for (double x : {-1.3, 0.0, 0.9}) CHECK(std::abs(round_trip(x) - f(x)) < 1e-14);
  // exponentials are shift eigenfunctions
  const AnalyticMap ek = AnalyticMap::from_analytic(
      [](const cplx& z) { return std::exp(cplx(0.0, 2.0) * z); }, "e2");
  const cplx a(0.4, -0.1);
  CHECK(std::abs(shift(ek, a)(1.1) - std::exp(cplx(0.0, 2.0) * a) * ek(1.1)) < 1e-14);
}

TEST_CASE("shift matches the closed-form lattice continuation") {
  // f(x + is) = e^{s^2/2} e^{-isx} f(x) for any superposition on the lattice
  const double s = 0.7;
  const GaussianSuperposition c({{0, 1.0}, {1, 0.3}, {-2, 0.2}}, s);
  const AnalyticMap f = superposition_map(c);
  const AnalyticMap up = shift(f, cplx(0.0, s));
  for (double x : {-2.0, -0.3, 0.8, 1.9}) {
    const cplx expected = std::exp(0.5 * s * s) * std::exp(cplx(0.0, -s * x)) * f(x);
    CHECK(std::abs(up(x) - expected) < 1e-13 * std::abs(expected));
  }
}

TEST_CASE("q_derivative basics") {
  const auto mac = make_params(0.4, OscillatorKind::macfarlane);
  const auto dub = make_params(0.4, OscillatorKind::dubna);
  const AnalyticMap c1 = AnalyticMap::constant(3.7);
  for (const auto& p : {mac, dub})
    CHECK(std::abs(q_derivative(c1, p)(0.9)) < 1e-15);
  for (const auto& p : {mac, dub})
    CHECK(std::abs(q_derivative(AnalyticMap::coordinate(), p)(0.9) - 1.0) < 1e-14);
  CHECK_THROWS_AS(
      q_derivative(c1, DeformationParams{0.1, 0.1, 1.0, OscillatorKind::macfarlane}),
      std::domain_error);
}

TEST_CASE("q_derivative small-s limit on plane waves") {
  const double k = 1.3;
  const AnalyticMap ek = AnalyticMap::from_analytic(
      [k](const cplx& z) { return std::exp(cplx(0.0, k) * z); }, "ek");
  const cplx x0(0.7, 0.0);
  const cplx target = cplx(0.0, k) * ek(x0);
  // symmetric difference (dubna): second-order accurate
  const auto dub = make_params(1e-4, OscillatorKind::dubna);
  CHECK(std::abs(q_derivative(ek, dub)(x0) / target - 1.0) < 1e-6);
  // one-sided difference (macfarlane): first-order, deviation ~ k s / 2
  const auto mac = make_params(1e-4, OscillatorKind::macfarlane);
  const double dev = std::abs(q_derivative(ek, mac)(x0) / target - 1.0);
  CHECK(dev < 1e-4);
  CHECK(dev > 1e-6);
}

TEST_CASE("part_g values") {
  const auto mac = make_params(1.0, OscillatorKind::macfarlane);
  const double gamma = std::pow(std::exp(1.0) - std::exp(-1.0), 0.25);
  CHECK(std::abs(part_g(mac, 0.3) - gamma) < 1e-14);
  CHECK(std::abs(part_g(mac, cplx(1.0, 2.0)) - gamma) < 1e-14);

  const auto dub = make_params(1.0, OscillatorKind::dubna);
  CHECK(std::abs(part_g(dub, 0.0) - gamma) < 1e-14);
  CHECK(std::abs(part_g(dub, pi / 2.0)) < 1e-7);  // zero of cos at t z = -pi/2
}

TEST_CASE("part_h values") {
  const auto dub = make_params(0.8, OscillatorKind::dubna);
  CHECK(part_h(dub, 12.3, 0.0) == cplx(0.0));
  const auto mac = make_params(1.0, OscillatorKind::macfarlane);
  CHECK(part_h(mac, 2.0, 0.0) == cplx(-4.0));
  CHECK(std::abs(part_h(mac, 1.0, pi) - (pi - 2.0)) < 1e-15);
}

TEST_CASE("reality of the part-functions on the real axis") {
  const auto dub = make_params(0.9, OscillatorKind::dubna);
  const GaussianSuperposition c({{0, 1.0}, {1, -0.4}}, 0.9);
  for (double x : {-1.7, -0.2, 0.5, 1.9}) {
    CHECK(std::abs(eval_f(c, x).imag()) < 1e-14 * std::max(1.0, std::abs(eval_f(c, x))));
    const cplx g2 = part_g(dub, x) * part_g(dub, x);
    CHECK(std::abs(g2.imag()) < 1e-14 * std::max(1.0, std::abs(g2)));
    CHECK(part_h(dub, x, 0.3).imag() == 0.0);
  }
}

TEST_CASE("big_F equals exp(s^2 - 2 i s z) for every lattice superposition") {
  std::mt19937 gen(11);
  const double s = 0.7;
  const auto p = make_params(s, OscillatorKind::macfarlane);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<int, double> cm{{0, 1.0}};
    for (int m = -3; m <= 3; ++m)
      if (m != 0 && gen() % 2) cm[m] = -0.5 + (gen() >> 8) / 16777216.0;
    const GaussianSuperposition coeffs(cm, s);
    for (double x : rand_reals(gen, 20, -2.0, 2.0)) {
      const cplx expected = std::exp(cplx(s * s, -2.0 * s * x));
      CHECK(std::abs(big_F(coeffs, p, x) - expected) <= 1e-10 * std::abs(expected));
    }
  }
}

TEST_CASE("big_F frozen examples") {
  const auto p7 = make_params(0.7, OscillatorKind::macfarlane);
  const GaussianSuperposition one({{0, 1.0}}, 0.7);
  CHECK(std::abs(big_F(one, p7, 0.0) - std::exp(0.49)) < 1e-12);
  const GaussianSuperposition two({{0, 1.0}, {1, 0.3}}, 0.7);
  CHECK(std::abs(big_F(two, p7, 1.1) - std::exp(cplx(0.49, -2.0 * 0.7 * 1.1))) < 1e-12);
  // s -> 0: F -> 1, second order at the origin
  const auto tiny = make_params(1e-4, OscillatorKind::macfarlane);
  const GaussianSuperposition onet({{0, 1.0}}, 1e-4);
  CHECK(std::abs(big_F(onet, tiny, 0.0) - 1.0) < 1e-7);

  // pole: coefficients that cancel exactly halfway between the centers
  const GaussianSuperposition canc({{0, 1.0}, {1, -1.0}}, 1.0);
  CHECK_THROWS_AS(big_F(canc, make_params(1.0, OscillatorKind::macfarlane), pi),
                  pole_error);
  CHECK_THROWS_AS(big_F(one, make_params(0.5, OscillatorKind::dubna), 0.0),
                  std::domain_error);  // scale mismatch
}

TEST_CASE("redundant factor G") {
  const RedundantFactorSpec trivial{};
  CHECK(redundant_factor(trivial, 1.0, 0.33) == cplx(1.0));
  const RedundantFactorSpec t10{1.0, 0.0, 0, 0};
  CHECK(std::abs(redundant_factor(t10, 1.0, 1.0) - std::tanh(pi / 2.0)) < 1e-15);
  const RedundantFactorSpec c01{0.0, 1.0, 0, 0};
  CHECK_THROWS_AS(redundant_factor(c01, 1.0, 0.0), pole_error);

  // G(x) G(x + is) = 1 for integer exponents
  for (double kap : {0.0, 1.0, 2.0})
    for (double lam : {0.0, 1.0, 2.0})
      for (int mu : {-1, 0, 1})
        for (int nu : {-1, 0, 1}) {
          const RedundantFactorSpec spec{kap, lam, mu, nu};
          for (double x : {0.37, -0.91, 1.23}) {
            const cplx prod = redundant_factor(spec, 0.5, x) *
                              redundant_factor(spec, 0.5, cplx(x, 0.5));
            CHECK(std::abs(prod - 1.0) < 1e-10);
          }
        }
}

TEST_CASE("conjugate channel") {
  // Schwarz leaves: the formal conjugate at real points is the plain conjugate
  const AnalyticMap w = AnalyticMap::from_analytic(
      [](const cplx& z) { return std::exp(cplx(0.0, 1.0) * z); }, "w");
  CHECK(std::abs(w.conj_at(0.8) - std::conj(w(0.8))) < 1e-16);
  CHECK(std::abs(w.conjugate()(0.8) - std::conj(w(0.8))) < 1e-16);

  // g is formally real: where cos < 0 its principal value is imaginary but
  // the conjugate channel returns the same value, so g pairs to signed g^2
  const auto dub = make_params(0.5, OscillatorKind::dubna);
  const AnalyticMap g = part_g_map(dub);
  const double x = 4.0;  // cos(0.5 * 4) < 0
  CHECK(g(x).imag() != 0.0);
  CHECK(g.conj_at(x) == g(x));
  const cplx paired = g.conj_at(x) * g(x);
  CHECK(std::abs(paired - part_g(dub, x) * part_g(dub, x)) < 1e-15);
  CHECK(paired.real() < 0.0);

  // combinators propagate the channel
  const AnalyticMap prod = w * g;
  CHECK(std::abs(prod.conj_at(x) - std::conj(w(x)) * g(x)) < 1e-15);
}
