// Command-line front end: spectra, deformed Hermite tables, wavefunction
// sampling, Gram matrices and the verification suite, in CSV or JSON.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 numerical-convergence failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qosc/cli.hpp"

namespace {

struct RawOptions {
  std::string kind = "macfarlane";
  std::string structure = "aperiodic";
  std::string coeffs = "0:1";
  std::string format = "csv";
};

void attach_common(CLI::App& app, qosc::cli::RunConfig& cfg, RawOptions& raw) {
  app.add_option("--kind", raw.kind, "oscillator family: macfarlane or dubna")
      ->check(CLI::IsMember({"macfarlane", "dubna"}));
  app.add_option("--s", cfg.s, "deformation scale, 0 < s <= 1.5");
  app.add_option("--a0", cfg.a0, "phase constant of the part-function h");
  app.add_option("--structure", raw.structure, "global structure")
      ->check(CLI::IsMember({"aperiodic", "periodic"}));
  app.add_option("--coeffs", raw.coeffs, "Gaussian coefficients, e.g. 0:1,1:0.5,-1:0.5");
  app.add_option("--cell-index", cfg.cell_index, "cell index for the periodic structure");
  app.add_option("--n", cfg.n, "level/degree for hermite and wavefunction tables");
  app.add_option("--n-max", cfg.n_max, "row bound for spectrum, matrix bound for gram");
  app.add_option("--format", raw.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--x-min", cfg.x_min, "grid lower bound (default: model window)");
  app.add_option("--x-max", cfg.x_max, "grid upper bound (default: model window)");
  app.add_option("--samples", cfg.samples, "grid point count");
  app.add_option("--max-subdivisions", cfg.max_subdivisions,
                 "adaptive quadrature panel budget");
  app.add_option("--inject-fault", cfg.inject_fault,
                 "test hook: perturb a part-function by 1% (g, h or f)");
  for (const char* name :
       {"mutator", "eigen", "conditions", "second-recursion", "ginv", "appendix",
        "adjointness", "classical", "ground", "t-operator", "t-eigen", "quadrature"}) {
    app.add_option_function<double>(
        std::string("--tol-") + name,
        [&cfg, name = std::string(name)](double v) { cfg.tol[name] = v; },
        "tolerance override for the " + std::string(name) + " checks");
  }
}

void finalize(qosc::cli::RunConfig& cfg, const RawOptions& raw) {
  cfg.kind = raw.kind == "dubna" ? qosc::OscillatorKind::dubna
                                 : qosc::OscillatorKind::macfarlane;
  cfg.structure = raw.structure == "periodic" ? qosc::cli::StructureKind::periodic
                                              : qosc::cli::StructureKind::aperiodic;
  cfg.coeffs = qosc::cli::parse_coeffs(raw.coeffs);
  cfg.format = raw.format == "json" ? qosc::cli::OutputFormat::json
                                    : qosc::cli::OutputFormat::csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-deformed harmonic oscillators: spectra, ladder operators, "
               "deformed Hermite functions and identity verification"};
  app.fallthrough();
  app.set_config("--config", "", "INI-style key=value configuration file");
  qosc::cli::RunConfig cfg;
  RawOptions raw;
  attach_common(app, cfg, raw);

  auto* spectrum = app.add_subcommand("spectrum", "energy levels, spacings and ratios");
  auto* hermite = app.add_subcommand("hermite", "deformed Hermite function table");
  auto* wavefunction = app.add_subcommand("wavefunction", "eigenfunction samples");
  auto* gram = app.add_subcommand("gram", "Gram matrix of eigenfunctions");
  auto* verify = app.add_subcommand("verify", "run the full identity-residual suite");
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    finalize(cfg, raw);
    if (spectrum->parsed()) return qosc::cli::cmd_spectrum(cfg, std::cout);
    if (hermite->parsed()) return qosc::cli::cmd_hermite(cfg, std::cout);
    if (wavefunction->parsed()) return qosc::cli::cmd_wavefunction(cfg, std::cout);
    if (gram->parsed()) return qosc::cli::cmd_gram(cfg, std::cout);
    if (verify->parsed()) return qosc::cli::cmd_verify(cfg, std::cout);
  } catch (const qosc::convergence_error& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
