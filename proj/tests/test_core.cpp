#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qosc/params.hpp"

using namespace qosc;

namespace {

DeformationParams params_with_q(double q) {
  return DeformationParams{0.0, 0.0, q, q >= 1.0 ? OscillatorKind::macfarlane
                                                 : OscillatorKind::dubna};
}

// Direct triple-product form of the q-binomial, as the independent oracle
// for the cancelled-product implementation.
double q_binomial_direct(int n, int m, double z) {
  auto prod = [z](int count) {
    double out = 1.0;
    for (int k = 0; k < count; ++k) out *= 1.0 - std::pow(z, 2.0 * (k + 1));
    return out;
  };
  return prod(n) / (prod(n - m) * prod(m));
}

double binomial(int n, int m) {
  double out = 1.0;
  for (int j = 1; j <= m; ++j) out *= static_cast<double>(n - m + j) / j;
  return out;
}

}  // namespace

TEST_CASE("make_params fixes t and q per kind") {
  const auto mac = make_params(1.0, OscillatorKind::macfarlane);
  CHECK(mac.t == 0.0);
  CHECK(mac.q == Catch::Approx(std::exp(1.0)).epsilon(1e-15));

  const auto dub = make_params(1.0, OscillatorKind::dubna);
  CHECK(dub.t == -1.0);
  CHECK(dub.q == Catch::Approx(std::exp(-1.0)).epsilon(1e-15));

  for (auto kind : {OscillatorKind::macfarlane, OscillatorKind::dubna})
    CHECK(std::abs(make_params(1e-6, kind).q - 1.0) < 1e-11);

  CHECK_THROWS_AS(make_params(0.0, OscillatorKind::macfarlane), std::domain_error);
  CHECK_THROWS_AS(make_params(-0.3, OscillatorKind::dubna), std::domain_error);
  CHECK_THROWS_AS(make_params(1.6, OscillatorKind::macfarlane), std::domain_error);
  CHECK(make_params_unguarded(2.6, OscillatorKind::macfarlane).q > 800.0);
}

TEST_CASE("q always satisfies exp(s^2 + t^2 + 3 s t)") {
  for (auto kind : {OscillatorKind::macfarlane, OscillatorKind::dubna})
    for (double s : {0.1, 0.5, 1.0, 1.5}) {
      const auto p = make_params(s, kind);
      CHECK(p.q == Catch::Approx(std::exp(p.s * p.s + p.t * p.t + 3.0 * p.s * p.t))
                       .epsilon(1e-15));
    }
}

TEST_CASE("energy: base case and frozen values from the recursion oracle") {
  const auto p2 = params_with_q(2.0);
  CHECK(energy(0, p2) == 0.5);
  CHECK(energy(0, make_params(0.7, OscillatorKind::dubna)) == 0.5);
  // oracle: E_1 = C + q^-2 (E_0 - C), C = 5/6 at q = 2 -> 3/4; E_2 -> 13/16
  CHECK(energy(1, p2) == Catch::Approx(0.75).margin(1e-15));
  CHECK(energy(2, p2) == Catch::Approx(0.8125).margin(1e-15));
  CHECK(energy_via_recursion(0, p2) == 0.5);
  CHECK(energy_via_recursion(1, p2) == Catch::Approx(0.75).margin(1e-15));
}

TEST_CASE("energy closed form agrees with the recursion oracle") {
  for (double q : {0.5, 0.9, 1.1, 2.0}) {
    const auto p = params_with_q(q);
    for (int n = 0; n <= 50; ++n) {
      const double a = energy(n, p);
      const double b = energy_via_recursion(n, p);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
  }
  const auto p11 = params_with_q(1.1);
  CHECK(std::abs(energy(5, p11) - energy_via_recursion(5, p11)) < 1e-13);
}

TEST_CASE("energy error paths") {
  CHECK_THROWS_AS(energy(-1, params_with_q(2.0)), std::domain_error);
  // dubna: q^(-2n) = exp(2 n s^2) overflows
  const auto pd = make_params(1.5, OscillatorKind::dubna);
  CHECK_THROWS_AS(energy(200, pd), std::range_error);
  CHECK_THROWS_AS(energy_via_recursion(3, params_with_q(1.0)), std::domain_error);
  CHECK(energy(7, params_with_q(1.0)) == 7.5);  // limit form
}

TEST_CASE("spacing ratio equals q^-2") {
  for (double q : {0.5, 2.0}) {
    const auto p = params_with_q(q);
    for (int n = 1; n <= 30; ++n)
      CHECK(std::abs(spacing_ratio(n, p) - 1.0 / (q * q)) <= 1e-10 / (q * q));
  }
  // frozen examples
  CHECK(spacing_ratio(1, params_with_q(2.0)) == Catch::Approx(0.25).epsilon(1e-12));
  CHECK(spacing_ratio(3, params_with_q(0.5)) == Catch::Approx(4.0).epsilon(1e-12));
  // oracle cross-check against energy() subtraction where it is well-posed
  for (double q : {0.5, 1.1, 2.0}) {
    const auto p = params_with_q(q);
    for (int n = 1; n <= 8; ++n) {
      const double sub = (energy(n + 1, p) - energy(n, p)) / (energy(n, p) - energy(n - 1, p));
      CHECK(std::abs(spacing_ratio(n, p) - sub) < 1e-10);
    }
  }
  // q -> 1 limit
  const auto p1 = make_params(1e-6, OscillatorKind::macfarlane);
  CHECK(std::abs(spacing_ratio(4, p1) - 1.0) < 1e-8);
  // spacing underflow for the compressed macfarlane spectrum
  const auto pbig = make_params_unguarded(2.0, OscillatorKind::macfarlane);
  CHECK_THROWS_AS(spacing_ratio(200, pbig), std::range_error);
  CHECK_THROWS_AS(spacing_ratio(0, p1), std::domain_error);
}

TEST_CASE("monotonicity of the spectrum") {
  const auto mac = make_params(0.5, OscillatorKind::macfarlane);
  const auto dub = make_params(0.5, OscillatorKind::dubna);
  for (int n = 0; n < 60; ++n) CHECK(energy(n + 1, mac) > energy(n, mac));
  for (int n = 0; n < 50; ++n) CHECK(energy(n + 1, dub) > energy(n, dub));
}

TEST_CASE("normalization constants") {
  const auto p2 = params_with_q(2.0);
  CHECK(normalization(0, p2) == 1.0);
  CHECK(normalization(1, p2) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // N_2 = sqrt(2) * sqrt(1.5 / 0.9375) = sqrt(3.2)
  CHECK(normalization(2, p2) == Catch::Approx(std::sqrt(3.2)).epsilon(1e-14));
  CHECK(normalization(3, params_with_q(0.5)) > 0.0);
  CHECK_THROWS_AS(normalization(1, params_with_q(1.0)), std::domain_error);
}

TEST_CASE("normalization recursion (N_n/N_{n+1})^2 = (2 E_n + 1)/(2q)") {
  for (double q : {0.5, 0.9, 1.1, 2.0}) {
    const auto p = params_with_q(q);
    for (int n = 0; n < 20; ++n) {
      const double a = std::pow(normalization(n, p) / normalization(n + 1, p), 2);
      const double b = (2.0 * energy(n, p) + 1.0) / (2.0 * q);
      CHECK(std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}));
    }
  }
}

TEST_CASE("q-binomial values and properties") {
  for (int n = 0; n < 6; ++n) CHECK(q_binomial(n, 0, 0.37) == 1.0);
  CHECK(q_binomial(2, 1, 0.5) == Catch::Approx(1.25).epsilon(1e-15));
  CHECK(q_binomial(3, 1, 0.5) == Catch::Approx(1.3125).epsilon(1e-15));
  CHECK_THROWS_AS(q_binomial(3, 4, 0.5), std::domain_error);
  CHECK_THROWS_AS(q_binomial(3, -1, 0.5), std::domain_error);
  CHECK_THROWS_AS(q_binomial(3, 1, 0.0), std::domain_error);
  CHECK_THROWS_AS(q_binomial(3, 1, 1.5), std::domain_error);

  // against the direct product oracle
  std::mt19937 gen(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = static_cast<int>(gen() % 9);
    const int m = n == 0 ? 0 : static_cast<int>(gen() % (n + 1));
    const double z = 0.1 + 0.85 * ((gen() >> 8) / 16777216.0);
    CHECK(q_binomial(n, m, z) ==
          Catch::Approx(q_binomial_direct(n, m, z)).epsilon(1e-12));
  }

  // symmetry
  for (int n = 0; n <= 8; ++n)
    for (int m = 0; m <= n; ++m)
      CHECK(std::abs(q_binomial(n, m, 0.7) - q_binomial(n, n - m, 0.7)) < 1e-12);

  // classical limit as z -> 1, and the z = 1 limit value itself
  for (int n = 0; n <= 8; ++n)
    for (int m = 0; m <= n; ++m) {
      CHECK(std::abs(q_binomial(n, m, 1.0 - 1e-8) - binomial(n, m)) <=
            1e-4 * binomial(n, m));
      CHECK(q_binomial(n, m, 1.0) == Catch::Approx(binomial(n, m)).epsilon(1e-14));
    }
}

TEST_CASE("spectrum helper enumerates levels") {
  const auto p = make_params(0.7, OscillatorKind::dubna);
  const auto rows = spectrum(p, 5);
  REQUIRE(rows.size() == 6);
  for (int n = 0; n <= 5; ++n) {
    CHECK(rows[n].n == n);
    CHECK(rows[n].energy == energy(n, p));
    CHECK(rows[n].energy >= 0.5);
  }
}

TEST_CASE("macfarlane bounds") {
  const auto b2 = macfarlane_bounds(params_with_q(2.0));
  CHECK(b2.first == 0.5);
  CHECK(b2.second == Catch::Approx(0.5 + 1.0 / 3.0).epsilon(1e-15));
  const auto bs = macfarlane_bounds(params_with_q(std::sqrt(2.0)));
  CHECK(bs.second == Catch::Approx(1.5).epsilon(1e-14));

  const auto huge = params_with_q(1e3);
  const auto bh = macfarlane_bounds(huge);
  CHECK(std::abs((bh.second - bh.first) - 1e-6) < 1e-8);

  CHECK_THROWS_AS(macfarlane_bounds(make_params(0.5, OscillatorKind::dubna)),
                  std::domain_error);

  for (double s : {0.3, 0.5, 1.0, 1.5}) {
    const auto p = make_params(s, OscillatorKind::macfarlane);
    const auto [lo, hi] = macfarlane_bounds(p);
    for (int n = 0; n <= 1000; ++n) {
      const double E = energy(n, p);
      CHECK(E >= lo);
      CHECK(E <= hi);
      // strict upper bound wherever the analytic gap q^(-2n)/(q^2-1) is
      // still representable against hi
      const double gap = std::exp(-2.0 * n * p.log_q()) / std::expm1(2.0 * p.log_q());
      if (gap > 1e-15 * hi) CHECK(E < hi);
    }
  }
}
