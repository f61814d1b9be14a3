// Prints the deformed spectrum for both oscillator families side by side.
// The macfarlane levels accumulate below 1/2 + 1/(q^2 - 1); the dubna
// spacings grow geometrically.

#include <cstdio>

#include "qosc/params.hpp"

int main() {
  const auto mac = qosc::make_params(0.7, qosc::OscillatorKind::macfarlane);
  const auto dub = qosc::make_params(0.7, qosc::OscillatorKind::dubna);
  const auto [lo, hi] = qosc::macfarlane_bounds(mac);
  std::printf("s = 0.7: q_mac = %.6f, q_dub = %.6f, mac bound = %.6f\n\n", mac.q,
              dub.q, hi);
  std::printf("%4s %18s %18s\n", "n", "E_n (macfarlane)", "E_n (dubna)");
  for (int n = 0; n <= 8; ++n)
    std::printf("%4d %18.12f %18.12f\n", n, qosc::energy(n, mac),
                qosc::energy(n, dub));
  std::printf("\nspacing ratio (both kinds): mac %.12f  dub %.12f\n",
              qosc::spacing_ratio(3, mac), qosc::spacing_ratio(3, dub));
  return 0;
}
