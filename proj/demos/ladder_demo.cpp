// Builds a dubna oscillator, raises the ground state twice and checks the
// result pointwise against the closed-form eigenfunction.

#include <cstdio>

#include "qosc/qosc.hpp"

int main() {
  using namespace qosc;
  const auto p = make_params(0.5, OscillatorKind::dubna);
  const OscillatorModel model(p, Aperiodic{GaussianSuperposition({{0, 1.0}}, p.s)});

  const AnalyticMap direct = eigenfunction(model, 2);
  const AnalyticMap raised = eigenfunction_via_ladder(model, 2);

  std::printf("%8s %22s %22s\n", "x", "closed form", "N_2 Adag^2 psi0");
  for (double x : default_probes(p)) {
    const cplx a = direct(cplx(x, 0.0));
    const cplx b = raised(cplx(x, 0.0));
    std::printf("%8.4f %22.14e %22.14e\n", x, a.real(), b.real());
  }

  const AnalyticMap H2 = apply_hamiltonian(detail::model_context(model), direct);
  const cplx at(0.613, 0.0);
  std::printf("\nH psi_2 / psi_2 at x = %.3f: %.12f (E_2 = %.12f)\n", at.real(),
              (H2(at) / direct(at)).real(), energy(2, p));
  return 0;
}
